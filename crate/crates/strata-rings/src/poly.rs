//! Sparse multivariate polynomials over exact rationals in a graded
//! boundary-class alphabet.

use crate::strata::{enumerate_generators, Family, GeneratorId, GroundSet};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// The ordered generator list of one family over one ground set.
#[derive(Debug)]
pub struct Alphabet {
    family: Family,
    ground: GroundSet,
    gens: Vec<GeneratorId>,
    index: HashMap<GeneratorId, u32>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.ground == other.ground
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new(family: Family, ground: GroundSet) -> Result<Arc<Alphabet>> {
        let gens = enumerate_generators(family, &ground)?;
        let index = gens
            .iter()
            .enumerate()
            .map(|(i, g)| (*g, i as u32))
            .collect();
        Ok(Arc::new(Alphabet {
            family,
            ground,
            gens,
            index,
        }))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.gens
    }

    pub fn id(&self, idx: u32) -> &GeneratorId {
        &self.gens[idx as usize]
    }

    pub fn degree(&self, idx: u32) -> u32 {
        self.gens[idx as usize].degree()
    }

    pub fn index_of(&self, gid: &GeneratorId) -> Result<u32> {
        self.index.get(gid).copied().ok_or_else(|| {
            Error::AlphabetMismatch(format!("generator {} not in alphabet", gid.name()))
        })
    }
}

/// A monomial as a sparse exponent vector over alphabet indices.
/// Entries are sorted by generator index and strictly positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { exps: Vec::new() }
    }

    pub fn generator(idx: u32) -> Monomial {
        Monomial {
            exps: vec![(idx, 1)],
        }
    }

    pub fn from_exps(mut exps: Vec<(u32, u32)>) -> Monomial {
        exps.retain(|&(_, e)| e > 0);
        exps.sort_by_key(|&(i, _)| i);
        Monomial { exps }
    }

    pub fn exps(&self) -> &[(u32, u32)] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self, alphabet: &Alphabet) -> u32 {
        self.exps
            .iter()
            .map(|&(i, e)| alphabet.degree(i) * e)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut a, mut b) = (self.exps.iter().peekable(), other.exps.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ia, ea)), Some(&&(ib, eb))) => match ia.cmp(&ib) {
                    Ordering::Less => {
                        exps.push((ia, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        exps.push((ib, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        exps.push((ia, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => {
                    exps.extend(a.by_ref().copied());
                    break;
                }
                (None, Some(_)) => {
                    exps.extend(b.by_ref().copied());
                    break;
                }
                (None, None) => break,
            }
        }
        Monomial { exps }
    }
}

// Lexicographic over the generator order: a higher power of an earlier
// generator comes first. Within one degree this is graded-lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => {}
            }
            match a.1.cmp(&b.1) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {}
            }
        }
        self.exps.len().cmp(&other.exps.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse exact-rational linear combination of monomials over a shared alphabet.
#[derive(Clone, Debug)]
pub struct Polynomial {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(alphabet: Arc<Alphabet>) -> Polynomial {
        Polynomial {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alphabet: Arc<Alphabet>, c: BigRational) -> Polynomial {
        let mut p = Polynomial::zero(alphabet);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(alphabet: Arc<Alphabet>) -> Polynomial {
        Polynomial::constant(alphabet, BigRational::one())
    }

    pub fn generator(alphabet: &Arc<Alphabet>, gid: &GeneratorId) -> Result<Polynomial> {
        let idx = alphabet.index_of(gid)?;
        let mut p = Polynomial::zero(alphabet.clone());
        p.terms.insert(Monomial::generator(idx), BigRational::one());
        Ok(p)
    }

    pub fn from_terms(
        alphabet: Arc<Alphabet>,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(alphabet);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_alphabet(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "{} over {:?} vs {} over {:?}",
                self.alphabet.family(),
                self.alphabet.ground(),
                other.alphabet.family(),
                other.alphabet.ground()
            )))
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.alphabet.clone());
        }
        Polynomial {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_alphabet(other)?;
        let mut out = Polynomial::zero(self.alphabet.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            alphabet: self.alphabet.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Common degree of all terms: `Ok(None)` for the zero polynomial,
    /// an error if the terms do not share a degree.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut seen: Option<u32> = None;
        for m in self.terms.keys() {
            let d = m.degree(&self.alphabet);
            match seen {
                None => seen = Some(d),
                Some(s) if s != d => {
                    return Err(Error::Inhomogeneous(format!(
                        "terms of degree {s} and {d} in one polynomial"
                    )))
                }
                _ => {}
            }
        }
        Ok(seen)
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        m.exps()
            .iter()
            .map(|&(i, e)| {
                let name = self.alphabet.id(i).name();
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Text form: terms joined with " + " / " - ", coefficients in lowest
    /// terms, unit coefficients dropped before a generator name.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&self.render_monomial(m));
            }
        }
        out
    }
}

/// All monomials of total degree `d`, sorted by the monomial order.
pub fn monomials_of_degree(alphabet: &Alphabet, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current: Vec<(u32, u32)> = Vec::new();
    fn rec(
        alphabet: &Alphabet,
        idx: u32,
        rem: u32,
        current: &mut Vec<(u32, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if rem == 0 {
            out.push(Monomial {
                exps: current.clone(),
            });
            return;
        }
        if idx as usize >= alphabet.len() {
            return;
        }
        let g = alphabet.degree(idx);
        let max_e = rem / g;
        for e in (0..=max_e).rev() {
            if e > 0 {
                current.push((idx, e));
            }
            rec(alphabet, idx + 1, rem - e * g, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }
    rec(alphabet, 0, d, &mut current, &mut out);
    out
}

/// Number of degree-`d` monomials: the coefficient of `t^d` in
/// `Π_g (1 - t^{deg g})^{-1}`, computed by the product expansion.
pub fn count_monomials(alphabet: &Alphabet, d: u32) -> BigUint {
    let d = d as usize;
    let mut coeffs = vec![BigUint::zero(); d + 1];
    coeffs[0] = BigUint::one();
    for gid in alphabet.generators() {
        let g = gid.degree() as usize;
        for t in g..=d {
            let prev = coeffs[t - g].clone();
            coeffs[t] += prev;
        }
    }
    coeffs[d].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::MarkSet;
    use num_traits::ToPrimitive;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn real_alphabet(ell: u32) -> Arc<Alphabet> {
        Alphabet::new(Family::Real, GroundSet::integers(ell).unwrap()).unwrap()
    }

    fn complex_alphabet(ell: u32) -> Arc<Alphabet> {
        Alphabet::new(Family::Complex, GroundSet::integers(ell).unwrap()).unwrap()
    }

    #[test]
    fn add_and_mul_basics() {
        let a = real_alphabet(3);
        let x = Polynomial::generator(&a, &a.generators()[0].clone()).unwrap();
        let y = Polynomial::generator(&a, &a.generators()[1].clone()).unwrap();

        let zero = Polynomial::zero(a.clone());
        assert_eq!(x.add(&zero).unwrap(), x);
        assert!(x.add(&x.neg()).unwrap().is_zero());
        assert_eq!(x.add(&x).unwrap(), x.scale(&rat(2)));

        let one = Polynomial::one(a.clone());
        assert_eq!(x.mul(&one).unwrap(), x);
        let lhs = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let rhs = x.mul(&x).unwrap().sub(&y.mul(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grading_is_additive() {
        let a = real_alphabet(3);
        // First generators are the degree-1 hypersurfaces, the last the degree-2 divisors.
        let e = Polynomial::generator(&a, &a.generators()[0].clone()).unwrap();
        let d = Polynomial::generator(&a, &a.generators()[a.len() - 1].clone()).unwrap();
        assert_eq!(e.homogeneous_degree().unwrap(), Some(1));
        assert_eq!(d.homogeneous_degree().unwrap(), Some(2));
        assert_eq!(e.mul(&d).unwrap().homogeneous_degree().unwrap(), Some(3));
        assert!(e.add(&d).unwrap().homogeneous_degree().is_err());
        assert_eq!(
            Polynomial::zero(a.clone()).homogeneous_degree().unwrap(),
            None
        );
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let a = real_alphabet(3);
        let b = real_alphabet(4);
        let p = Polynomial::one(a);
        let q = Polynomial::one(b);
        assert!(p.add(&q).is_err());
        assert!(p.mul(&q).is_err());
    }

    #[test]
    fn monomial_enumeration_matches_counts() {
        let a = real_alphabet(3);
        assert_eq!(monomials_of_degree(&a, 0), vec![Monomial::one()]);
        // 4 degree-1 and 6 degree-2 generators: C(5,2) + 6 = 16 at degree 2.
        assert_eq!(monomials_of_degree(&a, 2).len(), 16);

        let c = complex_alphabet(4);
        assert_eq!(monomials_of_degree(&c, 4).len(), 6);

        for d in 0..=8u32 {
            for alpha in [&a, &c, &real_alphabet(2), &complex_alphabet(5)] {
                let listed = monomials_of_degree(alpha, d);
                assert_eq!(
                    BigUint::from(listed.len()),
                    count_monomials(alpha, d),
                    "count mismatch at degree {d}"
                );
                let mut sorted = listed.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(listed, sorted, "order or duplicates at degree {d}");
                for m in &listed {
                    assert_eq!(m.degree(alpha), d);
                }
            }
        }
    }

    #[test]
    fn count_matches_closed_form() {
        // Stars-and-bars cross-check on the real 3-mark alphabet.
        let a = real_alphabet(3);
        let n1 = 4u64; // degree-1 generators
        let n2 = 6u64; // degree-2 generators
        let binom = |n: u64, k: u64| -> u64 {
            if k > n {
                return 0;
            }
            (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
        };
        for d in 0..=6u64 {
            let mut expect = 0u64;
            let mut j = 0;
            while 2 * j <= d {
                expect += binom(d - 2 * j + n1 - 1, n1 - 1) * binom(j + n2 - 1, n2 - 1);
                j += 1;
            }
            assert_eq!(count_monomials(&a, d as u32).to_u64().unwrap(), expect);
        }
    }

    #[test]
    fn rendering() {
        let a = real_alphabet(2);
        let gens = a.generators().to_vec();
        let x = Polynomial::generator(&a, &gens[0]).unwrap(); // E{1|2}
        let y = Polynomial::generator(&a, &gens[1]).unwrap(); // E{12|}
        assert_eq!(x.add(&y).unwrap().render(), "E{1|2} + E{12|}");
        assert_eq!(x.mul(&x).unwrap().render(), "E{1|2}^2");
        assert_eq!(
            x.scale(&rat(-2)).add(&y).unwrap().render(),
            "-2*E{1|2} + E{12|}"
        );
        assert_eq!(Polynomial::zero(a.clone()).render(), "0");
        assert_eq!(
            Polynomial::constant(a, BigRational::new(3.into(), 2.into())).render(),
            "3/2"
        );

        let g3 = real_alphabet(3);
        let d = g3.generators()[g3.len() - 1];
        assert!(Polynomial::generator(&g3, &d).unwrap().render().starts_with("D{"));
    }

    #[test]
    fn coefficients_stay_reduced() {
        let a = real_alphabet(2);
        let x = Polynomial::generator(&a, &a.generators()[0].clone()).unwrap();
        let p = x.scale(&BigRational::new(2.into(), 4.into()));
        for (_, c) in p.terms() {
            assert_eq!(c.denom(), &num_bigint::BigInt::from(2));
            assert_eq!(c.numer(), &num_bigint::BigInt::from(1));
        }
        let half = BigRational::new(1.into(), 2.into());
        let q = p.add(&x.scale(&half)).unwrap();
        for (_, c) in q.terms() {
            assert_eq!(c.denom(), &num_bigint::BigInt::from(1));
        }
    }

    #[test]
    fn nd_grounds_form_alphabets() {
        // Complex alphabet over {nd} ⊔ {2,3} is empty (3 marks), over {nd} ⊔ [3] has 3 classes.
        let small = GroundSet::with_node(MarkSet::from_values([2, 3])).unwrap();
        assert!(Alphabet::new(Family::Complex, small).unwrap().is_empty());
        let four = GroundSet::with_node(MarkSet::from_values([1, 2, 3])).unwrap();
        assert_eq!(Alphabet::new(Family::Complex, four).unwrap().len(), 3);
    }
}
