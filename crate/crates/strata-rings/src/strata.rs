//! Index combinatorics for boundary classes: marked ground sets, canonical
//! set partitions, the crossing/nesting predicates, and the orientation sign.
//!
//! Subsets are bitmasks over mark *values*, so containment and minima are
//! single integer operations even when two partitions live over different
//! ground sets. A subcurve ground set carries the node marker `nd`, which
//! occupies the smallest positive integer absent from the integer marks.

use crate::{Error, Result};
use std::fmt;

/// Which family of moduli spaces a ground set or alphabet refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Complex,
    Real,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Complex => "complex",
            Family::Real => "real",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A set of marks, stored as a bitmask over mark values (bit `v-1` is value `v`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkSet(pub u64);

impl MarkSet {
    pub const EMPTY: MarkSet = MarkSet(0);

    pub fn from_values<I: IntoIterator<Item = u32>>(values: I) -> MarkSet {
        let mut m = 0u64;
        for v in values {
            debug_assert!((1..=64).contains(&v));
            m |= 1 << (v - 1);
        }
        MarkSet(m)
    }

    pub fn range(lo: u32, hi: u32) -> MarkSet {
        MarkSet::from_values(lo..=hi)
    }

    pub fn contains(self, v: u32) -> bool {
        (1..=64).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 | other.0)
    }

    pub fn inter(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 & other.0)
    }

    pub fn minus(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: MarkSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: MarkSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest mark value, if any.
    pub fn min_value(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() + 1)
        }
    }

    pub fn values(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() + 1;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    pub fn insert(self, v: u32) -> MarkSet {
        debug_assert!((1..=64).contains(&v));
        MarkSet(self.0 | 1 << (v - 1))
    }
}

impl fmt::Debug for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.values().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered set of marks. Integer marks keep their value; the optional node
/// marker `nd` is ordered at the smallest positive integer missing from the
/// integer marks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    marks: MarkSet,
    nd_value: Option<u32>,
}

impl GroundSet {
    /// The ground set `[ell] = {1, ..., ell}`.
    pub fn integers(ell: u32) -> Result<GroundSet> {
        if ell == 0 || ell > 62 {
            return Err(Error::InvalidArgument(format!(
                "ground set size {ell} out of supported range 1..=62"
            )));
        }
        Ok(GroundSet {
            marks: MarkSet::range(1, ell),
            nd_value: None,
        })
    }

    /// The ground set `{nd} ⊔ ints`, with `nd` at the smallest absent value.
    pub fn with_node(ints: MarkSet) -> Result<GroundSet> {
        let mut nd = 1u32;
        while ints.contains(nd) {
            nd += 1;
        }
        if nd > 62 {
            return Err(Error::InvalidArgument(
                "no room for the node marker".into(),
            ));
        }
        Ok(GroundSet {
            marks: ints.insert(nd),
            nd_value: Some(nd),
        })
    }

    pub fn marks(&self) -> MarkSet {
        self.marks
    }

    pub fn nd_value(&self) -> Option<u32> {
        self.nd_value
    }

    pub fn size(&self) -> u32 {
        self.marks.len()
    }

    pub fn contains_set(&self, s: MarkSet) -> bool {
        s.is_subset_of(self.marks)
    }

    pub fn label(&self, v: u32) -> String {
        if self.nd_value == Some(v) {
            "nd".to_string()
        } else {
            v.to_string()
        }
    }

    /// Renders a subset per the generator-name grammar: single-digit marks are
    /// concatenated; sets with any multi-digit mark (or `nd`) use commas.
    pub fn render_set(&self, s: MarkSet) -> String {
        let multi = s
            .values()
            .any(|v| v >= 10 || self.nd_value == Some(v));
        let parts: Vec<String> = s.values().map(|v| self.label(v)).collect();
        if multi {
            parts.join(",")
        } else {
            parts.concat()
        }
    }
}

/// A canonical unordered splitting `{J, K}` of a ground set. The part
/// containing the minimum of `J ∪ K` sits in the `J` slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionPair {
    ground: GroundSet,
    j: MarkSet,
    k: MarkSet,
}

impl PartitionPair {
    /// Canonicalizes `{A, B}` over `ground`; errors unless `A ⊔ B = ground`.
    pub fn new(ground: GroundSet, a: MarkSet, b: MarkSet) -> Result<PartitionPair> {
        if !a.is_disjoint(b) {
            return Err(Error::InvalidPartition(format!(
                "parts overlap: {a:?} and {b:?}"
            )));
        }
        if a.union(b) != ground.marks() {
            return Err(Error::InvalidPartition(format!(
                "parts {a:?} ⊔ {b:?} do not cover the ground set {:?}",
                ground.marks()
            )));
        }
        Ok(Self::new_unchecked(ground, a, b))
    }

    fn new_unchecked(ground: GroundSet, a: MarkSet, b: MarkSet) -> PartitionPair {
        let all = a.union(b);
        match all.min_value() {
            Some(m) if b.contains(m) => PartitionPair { ground, j: b, k: a },
            _ => PartitionPair { ground, j: a, k: b },
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn j(&self) -> MarkSet {
        self.j
    }

    pub fn k(&self) -> MarkSet {
        self.k
    }

    /// Degree of nesting with the bullet condition `2 ≤ |J| ≤ |ground| - 2`.
    pub fn is_bullet(&self) -> bool {
        let n = self.ground.size();
        self.j.len() >= 2 && self.j.len() + 2 <= n
    }

    /// Orientation sign: `+1` if the minimum mark of `J ∪ K` lies in the
    /// designated part, `-1` otherwise. The designated part must be one of
    /// the two parts, and the pair must be nonempty.
    pub fn epsilon(&self, designated: MarkSet) -> Result<i32> {
        if designated != self.j && designated != self.k {
            return Err(Error::InvalidArgument(format!(
                "designated set {designated:?} is not a part of the pair"
            )));
        }
        let m = self
            .j
            .union(self.k)
            .min_value()
            .ok_or_else(|| Error::InvalidArgument("epsilon of the empty pair".into()))?;
        Ok(if designated.contains(m) { 1 } else { -1 })
    }
}

/// Nesting: `{J,K} ≼ {J',K'}` iff the parts embed componentwise in either
/// orientation. Ground sets may differ; containment is tested on mark values.
pub fn preceq(p: &PartitionPair, q: &PartitionPair) -> bool {
    (p.j.is_subset_of(q.j) && p.k.is_subset_of(q.k))
        || (p.j.is_subset_of(q.k) && p.k.is_subset_of(q.j))
}

/// Incomparability: neither pair nests in the other.
pub fn parallel(p: &PartitionPair, q: &PartitionPair) -> bool {
    !preceq(p, q) && !preceq(q, p)
}

/// Crossing predicate on a common ground set: the corresponding boundary
/// classes are disjoint exactly when this holds.
pub fn notcap_pair(p: &PartitionPair, q: &PartitionPair) -> Result<bool> {
    if p.ground != q.ground {
        return Err(Error::InvalidArgument(
            "crossing predicate requires a common ground set".into(),
        ));
    }
    Ok(!p.j.is_subset_of(q.j)
        && !p.j.is_subset_of(q.k)
        && !q.j.is_subset_of(p.j)
        && !q.k.is_subset_of(p.j))
}

/// A canonical triple `(I, {J, K})` indexing a real boundary divisor:
/// `I ⊔ J ⊔ K = ground` with `1 ≤ |I| ≤ |ground| - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePartition {
    ground: GroundSet,
    i: MarkSet,
    pair: PartitionPair,
}

impl TriplePartition {
    pub fn new(ground: GroundSet, i: MarkSet, a: MarkSet, b: MarkSet) -> Result<TriplePartition> {
        if !i.is_disjoint(a) || !i.is_disjoint(b) || !a.is_disjoint(b) {
            return Err(Error::InvalidPartition(format!(
                "parts overlap: {i:?}, {a:?}, {b:?}"
            )));
        }
        if i.union(a).union(b) != ground.marks() {
            return Err(Error::InvalidPartition(format!(
                "parts do not cover the ground set {:?}",
                ground.marks()
            )));
        }
        let n = ground.size();
        if i.is_empty() || i.len() + 2 > n {
            return Err(Error::InvalidPartition(format!(
                "fixed part {i:?} violates 1 ≤ |I| ≤ {}",
                n.saturating_sub(2)
            )));
        }
        // The conjugate pair {J,K} is canonicalized over the complement of I.
        let sub = GroundSet {
            marks: a.union(b),
            nd_value: ground.nd_value.filter(|&v| a.union(b).contains(v)),
        };
        Ok(TriplePartition {
            ground,
            i,
            pair: PartitionPair::new_unchecked(sub, a, b),
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn i(&self) -> MarkSet {
        self.i
    }

    pub fn j(&self) -> MarkSet {
        self.pair.j()
    }

    pub fn k(&self) -> MarkSet {
        self.pair.k()
    }

    pub fn conjugate_pair(&self) -> &PartitionPair {
        &self.pair
    }
}

/// Crossing predicate for triples on a common ground set: the conjugate pairs
/// are incomparable and `J ∪ K` is not absorbed by the other fixed part.
pub fn notcap_triple(t: &TriplePartition, u: &TriplePartition) -> Result<bool> {
    if t.ground != u.ground {
        return Err(Error::InvalidArgument(
            "crossing predicate requires a common ground set".into(),
        ));
    }
    Ok(parallel(&t.pair, &u.pair) && !t.j().union(t.k()).is_subset_of(u.i()))
}

/// One generator of a boundary-class alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorId {
    /// Complex boundary divisor, degree 2; the pair satisfies the bullet condition.
    ComplexD(PartitionPair),
    /// Real boundary hypersurface, degree 1.
    RealE(PartitionPair),
    /// Real boundary divisor, degree 2.
    RealD(TriplePartition),
}

impl GeneratorId {
    pub fn complex_d(pair: PartitionPair) -> Result<GeneratorId> {
        if !pair.is_bullet() {
            return Err(Error::InvalidPartition(format!(
                "complex divisor class requires 2 ≤ |J| ≤ n-2, got {:?}|{:?}",
                pair.j(),
                pair.k()
            )));
        }
        Ok(GeneratorId::ComplexD(pair))
    }

    pub fn degree(&self) -> u32 {
        match self {
            GeneratorId::RealE(_) => 1,
            GeneratorId::ComplexD(_) | GeneratorId::RealD(_) => 2,
        }
    }

    pub fn ground(&self) -> &GroundSet {
        match self {
            GeneratorId::ComplexD(p) | GeneratorId::RealE(p) => p.ground(),
            GeneratorId::RealD(t) => t.ground(),
        }
    }

    fn order_key(&self) -> (u32, u8, u64, u64) {
        match self {
            GeneratorId::RealE(p) => (1, 0, 0, p.j().0),
            GeneratorId::RealD(t) => (2, 1, t.i().0, t.j().0),
            GeneratorId::ComplexD(p) => (2, 2, 0, p.j().0),
        }
    }

    /// Name per the rendering grammar, e.g. `D{12|34}`, `E{1|23}`, `D{2;13|}`.
    pub fn name(&self) -> String {
        match self {
            GeneratorId::ComplexD(p) => {
                let g = p.ground();
                format!("D{{{}|{}}}", g.render_set(p.j()), g.render_set(p.k()))
            }
            GeneratorId::RealE(p) => {
                let g = p.ground();
                format!("E{{{}|{}}}", g.render_set(p.j()), g.render_set(p.k()))
            }
            GeneratorId::RealD(t) => {
                let g = t.ground();
                format!(
                    "D{{{};{}|{}}}",
                    g.render_set(t.i()),
                    g.render_set(t.j()),
                    g.render_set(t.k())
                )
            }
        }
    }
}

impl PartialOrd for GeneratorId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GeneratorId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// Enumerates subsets of `within` that contain the minimum mark of `within`,
/// in increasing bitmask order. Each unordered splitting appears once.
fn half_subsets(within: MarkSet) -> Vec<MarkSet> {
    let Some(m) = within.min_value() else {
        return vec![MarkSet::EMPTY];
    };
    let low = MarkSet::from_values([m]);
    let rest: Vec<u32> = within.minus(low).values().collect();
    let mut out = Vec::with_capacity(1 << rest.len());
    for pick in 0u64..(1 << rest.len()) {
        let mut s = low;
        for (b, &v) in rest.iter().enumerate() {
            if pick & (1 << b) != 0 {
                s = s.insert(v);
            }
        }
        out.push(s);
    }
    out.sort();
    out
}

/// All unordered pair classes `{J, K}` of `within` (the canonical `J`
/// contains the minimum mark; `K` may be empty).
pub fn pair_classes(ground: &GroundSet, within: MarkSet) -> Vec<PartitionPair> {
    half_subsets(within)
        .into_iter()
        .map(|j| PartitionPair::new_unchecked(
            GroundSet {
                marks: within,
                nd_value: ground.nd_value.filter(|&v| within.contains(v)),
            },
            j,
            within.minus(j),
        ))
        .collect()
}

/// The complete, sorted generator alphabet of a family over a ground set.
pub fn enumerate_generators(family: Family, ground: &GroundSet) -> Result<Vec<GeneratorId>> {
    let n = ground.size();
    let min_size = match family {
        Family::Complex => 3,
        Family::Real => 2,
    };
    if n < min_size {
        return Err(Error::InvalidArgument(format!(
            "{family} alphabet requires at least {min_size} marks, got {n}"
        )));
    }
    let mut out = Vec::new();
    match family {
        Family::Complex => {
            for pair in pair_classes(ground, ground.marks()) {
                if pair.is_bullet() {
                    out.push(GeneratorId::ComplexD(pair));
                }
            }
        }
        Family::Real => {
            for pair in pair_classes(ground, ground.marks()) {
                out.push(GeneratorId::RealE(pair));
            }
            for i in all_subsets(ground.marks()) {
                if i.is_empty() || i.len() + 2 > n {
                    continue;
                }
                let rest = ground.marks().minus(i);
                for j in half_subsets(rest) {
                    out.push(GeneratorId::RealD(TriplePartition::new(
                        *ground,
                        i,
                        j,
                        rest.minus(j),
                    )?));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All subsets of `within`, in increasing bitmask order.
pub fn all_subsets(within: MarkSet) -> Vec<MarkSet> {
    let vals: Vec<u32> = within.values().collect();
    let mut out = Vec::with_capacity(1 << vals.len());
    for pick in 0u64..(1 << vals.len()) {
        let mut s = MarkSet::EMPTY;
        for (b, &v) in vals.iter().enumerate() {
            if pick & (1 << b) != 0 {
                s = s.insert(v);
            }
        }
        out.push(s);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn ms(vals: &[u32]) -> MarkSet {
        MarkSet::from_values(vals.iter().copied())
    }

    // Independent set-based oracle used to cross-check the bitmask predicates.
    mod oracle {
        use std::collections::BTreeSet;

        pub type S = BTreeSet<u32>;

        pub fn subset(a: &S, b: &S) -> bool {
            a.is_subset(b)
        }

        pub fn preceq(j: &S, k: &S, j2: &S, k2: &S) -> bool {
            (subset(j, j2) && subset(k, k2)) || (subset(j, k2) && subset(k, j2))
        }

        pub fn notcap(j: &S, _k: &S, j2: &S, k2: &S) -> bool {
            !subset(j, j2) && !subset(j, k2) && !subset(j2, j) && !subset(k2, j)
        }

        pub fn parallel(j: &S, k: &S, j2: &S, k2: &S) -> bool {
            !preceq(j, k, j2, k2) && !preceq(j2, k2, j, k)
        }

        pub fn epsilon(j: &S, k: &S) -> i32 {
            let m = j.union(k).min().copied().unwrap();
            if j.contains(&m) {
                1
            } else {
                -1
            }
        }
    }

    fn to_set(m: MarkSet) -> BTreeSet<u32> {
        m.values().collect()
    }

    #[test]
    fn canonical_pair_examples() {
        let g3 = GroundSet::integers(3).unwrap();
        let p = PartitionPair::new(g3, ms(&[2]), ms(&[1, 3])).unwrap();
        assert_eq!(p.j(), ms(&[1, 3]));
        assert_eq!(p.k(), ms(&[2]));

        let g2 = GroundSet::integers(2).unwrap();
        let p = PartitionPair::new(g2, MarkSet::EMPTY, ms(&[1, 2])).unwrap();
        assert_eq!(p.j(), ms(&[1, 2]));
        assert_eq!(p.k(), MarkSet::EMPTY);

        // nd is ordered as the smallest missing positive integer (here 1).
        let gn = GroundSet::with_node(ms(&[2, 3])).unwrap();
        assert_eq!(gn.nd_value(), Some(1));
        let p = PartitionPair::new(gn, ms(&[3]), ms(&[1, 2])).unwrap();
        assert_eq!(p.j(), ms(&[1, 2])); // {nd, 2}
        assert_eq!(p.k(), ms(&[3]));
    }

    #[test]
    fn canonical_pair_rejects_bad_input() {
        let g3 = GroundSet::integers(3).unwrap();
        assert!(PartitionPair::new(g3, ms(&[1, 2]), ms(&[2, 3])).is_err());
        assert!(PartitionPair::new(g3, ms(&[1]), ms(&[3])).is_err());
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let g = GroundSet::integers(5).unwrap();
        for j in all_subsets(g.marks()) {
            let p = PartitionPair::new(g, j, g.marks().minus(j)).unwrap();
            let again = PartitionPair::new(g, p.j(), p.k()).unwrap();
            assert_eq!(p, again);
        }
    }

    #[test]
    fn epsilon_examples_and_antisymmetry() {
        let g3 = GroundSet::integers(3).unwrap();
        let p = PartitionPair::new(g3, ms(&[1, 3]), ms(&[2])).unwrap();
        assert_eq!(p.epsilon(ms(&[1, 3])).unwrap(), 1);
        assert_eq!(p.epsilon(ms(&[2])).unwrap(), -1);
        assert!(p.epsilon(ms(&[1])).is_err());

        let g4 = GroundSet {
            marks: ms(&[2, 3, 4]),
            nd_value: None,
        };
        let q = PartitionPair::new(g4, ms(&[2, 4]), ms(&[3])).unwrap();
        assert_eq!(q.epsilon(ms(&[2, 4])).unwrap(), 1);

        for ell in 2..=6u32 {
            let g = GroundSet::integers(ell).unwrap();
            for j in all_subsets(g.marks()) {
                let p = PartitionPair::new(g, j, g.marks().minus(j)).unwrap();
                if p.j().is_empty() && p.k().is_empty() {
                    continue;
                }
                // The two designated evaluations multiply to -1 even when one
                // part is empty (the minimum never lies in the empty part).
                assert_eq!(p.epsilon(p.j()).unwrap() * p.epsilon(p.k()).unwrap(), -1);
                assert_eq!(p.epsilon(p.j()).unwrap(), oracle::epsilon(&to_set(p.j()), &to_set(p.k())));
            }
        }
    }

    #[test]
    fn preceq_examples() {
        let g2 = GroundSet::integers(2).unwrap();
        let g4 = GroundSet::integers(4).unwrap();
        let p = PartitionPair::new(g2, ms(&[1]), ms(&[2])).unwrap();
        let q = PartitionPair::new(g4, ms(&[1, 3]), ms(&[2, 4])).unwrap();
        assert!(preceq(&p, &q));
        let r = PartitionPair::new(g4, ms(&[1, 2]), ms(&[3, 4])).unwrap();
        assert!(!preceq(&p, &r));
        let s = PartitionPair::new(g4, ms(&[2, 4]), ms(&[1, 3])).unwrap();
        assert!(preceq(&p, &s)); // crossed orientation
    }

    #[test]
    fn notcap_pair_examples_and_oracle() {
        let g4 = GroundSet::integers(4).unwrap();
        let a = PartitionPair::new(g4, ms(&[1, 2]), ms(&[3, 4])).unwrap();
        let b = PartitionPair::new(g4, ms(&[1, 3]), ms(&[2, 4])).unwrap();
        assert!(notcap_pair(&a, &b).unwrap());
        assert!(!notcap_pair(&a, &a).unwrap());

        let g5 = GroundSet::integers(5).unwrap();
        let c = PartitionPair::new(g5, ms(&[1, 2]), ms(&[3, 4, 5])).unwrap();
        let d = PartitionPair::new(g5, ms(&[1, 2, 3]), ms(&[4, 5])).unwrap();
        assert!(!notcap_pair(&c, &d).unwrap());

        let g3 = GroundSet::integers(3).unwrap();
        assert!(notcap_pair(&a, &PartitionPair::new(g3, ms(&[1]), ms(&[2, 3])).unwrap()).is_err());

        for ell in 2..=6u32 {
            let g = GroundSet::integers(ell).unwrap();
            let classes = pair_classes(&g, g.marks());
            for p in &classes {
                for q in &classes {
                    assert_eq!(
                        notcap_pair(p, q).unwrap(),
                        oracle::notcap(&to_set(p.j()), &to_set(p.k()), &to_set(q.j()), &to_set(q.k())),
                    );
                    assert_eq!(notcap_pair(p, q).unwrap(), notcap_pair(q, p).unwrap());
                    assert_eq!(
                        preceq(p, q),
                        oracle::preceq(&to_set(p.j()), &to_set(p.k()), &to_set(q.j()), &to_set(q.k())),
                    );
                }
                assert!(!notcap_pair(p, p).unwrap());
            }
        }
    }

    #[test]
    fn notcap_triple_examples_and_oracle() {
        let g3 = GroundSet::integers(3).unwrap();
        let t = TriplePartition::new(g3, ms(&[1]), ms(&[2]), ms(&[3])).unwrap();
        let u = TriplePartition::new(g3, ms(&[2]), ms(&[1, 3]), MarkSet::EMPTY).unwrap();
        assert!(notcap_triple(&t, &u).unwrap());
        assert!(!notcap_triple(&t, &t).unwrap());

        let g4 = GroundSet::integers(4).unwrap();
        let a = TriplePartition::new(g4, ms(&[3, 4]), ms(&[1]), ms(&[2])).unwrap();
        let b = TriplePartition::new(g4, ms(&[1, 2]), ms(&[3]), ms(&[4])).unwrap();
        assert!(!notcap_triple(&a, &b).unwrap());

        // All 6 divisors of the three-mark space are pairwise disjoint.
        let divisors: Vec<TriplePartition> = enumerate_generators(Family::Real, &g3)
            .unwrap()
            .into_iter()
            .filter_map(|g| match g {
                GeneratorId::RealD(t) => Some(t),
                _ => None,
            })
            .collect();
        assert_eq!(divisors.len(), 6);
        let mut failures = 0;
        for (i, t) in divisors.iter().enumerate() {
            for u in &divisors[i + 1..] {
                if !notcap_triple(t, u).unwrap() {
                    failures += 1;
                }
            }
        }
        assert_eq!(failures, 0);

        // Oracle sweep, including symmetry of the predicate on a common ground set.
        for ell in 3..=6u32 {
            let g = GroundSet::integers(ell).unwrap();
            let triples: Vec<TriplePartition> = enumerate_generators(Family::Real, &g)
                .unwrap()
                .into_iter()
                .filter_map(|gid| match gid {
                    GeneratorId::RealD(t) => Some(t),
                    _ => None,
                })
                .collect();
            for t in &triples {
                assert!(!notcap_triple(t, t).unwrap());
                for u in &triples {
                    let expect = oracle::parallel(
                        &to_set(t.j()),
                        &to_set(t.k()),
                        &to_set(u.j()),
                        &to_set(u.k()),
                    ) && !to_set(t.j().union(t.k())).is_subset(&to_set(u.i()));
                    assert_eq!(notcap_triple(t, u).unwrap(), expect);
                    assert_eq!(notcap_triple(t, u).unwrap(), notcap_triple(u, t).unwrap());
                }
            }
        }
    }

    #[test]
    fn generator_counts() {
        // Small cases pinned by hand.
        let g3 = GroundSet::integers(3).unwrap();
        assert!(enumerate_generators(Family::Complex, &g3).unwrap().is_empty());
        let real3 = enumerate_generators(Family::Real, &g3).unwrap();
        let e3 = real3.iter().filter(|g| matches!(g, GeneratorId::RealE(_))).count();
        let d3 = real3.iter().filter(|g| matches!(g, GeneratorId::RealD(_))).count();
        assert_eq!((e3, d3), (4, 6));
        let g5 = GroundSet::integers(5).unwrap();
        assert_eq!(enumerate_generators(Family::Complex, &g5).unwrap().len(), 10);

        // Count formulas against brute-force powerset enumeration.
        for ell in 3..=6u64 {
            let g = GroundSet::integers(ell as u32).unwrap();
            let complex = enumerate_generators(Family::Complex, &g).unwrap();
            assert_eq!(complex.len() as u64, (2u64.pow(ell as u32) - 2 - 2 * ell) / 2);
            let real = enumerate_generators(Family::Real, &g).unwrap();
            let e = real.iter().filter(|x| matches!(x, GeneratorId::RealE(_))).count() as u64;
            let d = real.iter().filter(|x| matches!(x, GeneratorId::RealD(_))).count() as u64;
            assert_eq!(e, 2u64.pow(ell as u32 - 1));
            let expected_d: u64 = (1..=ell - 2)
                .map(|i| binom(ell, i) * 2u64.pow((ell - i - 1) as u32))
                .sum();
            assert_eq!(d, expected_d);

            // Sorted, duplicate-free.
            let mut sorted = real.clone();
            sorted.sort();
            assert_eq!(real, sorted);
            let set: BTreeSet<_> = real.iter().map(|g| g.order_key()).collect();
            assert_eq!(set.len(), real.len());
        }

        assert!(enumerate_generators(Family::Real, &GroundSet::integers(1).unwrap()).is_err());
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn generator_names() {
        let g3 = GroundSet::integers(3).unwrap();
        let e = GeneratorId::RealE(PartitionPair::new(g3, ms(&[1]), ms(&[2, 3])).unwrap());
        assert_eq!(e.name(), "E{1|23}");
        let d = GeneratorId::RealD(
            TriplePartition::new(g3, ms(&[2]), ms(&[1, 3]), MarkSet::EMPTY).unwrap(),
        );
        assert_eq!(d.name(), "D{2;13|}");
        let g4 = GroundSet::integers(4).unwrap();
        let c = GeneratorId::complex_d(PartitionPair::new(g4, ms(&[1, 2]), ms(&[3, 4])).unwrap())
            .unwrap();
        assert_eq!(c.name(), "D{12|34}");

        let g12 = GroundSet::integers(12).unwrap();
        let big = GeneratorId::RealE(
            PartitionPair::new(g12, ms(&[1, 11]), g12.marks().minus(ms(&[1, 11]))).unwrap(),
        );
        assert_eq!(big.name(), "E{1,11|2,3,4,5,6,7,8,9,10,12}");
    }
}
