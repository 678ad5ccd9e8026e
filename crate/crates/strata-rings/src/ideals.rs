//! Homogeneous generating sets for the boundary-class ideals of the complex
//! and real presentations, plus the auxiliary torsion-free degree-2 relation.
//!
//! Every generator carries a provenance tag naming the relation family and
//! the index data that produced it, so verification failures can name the
//! offending relation instance and the generator can be rebuilt bit-for-bit.

use crate::poly::{Alphabet, Polynomial};
use crate::strata::{
    notcap_pair, notcap_triple, preceq, Family, GeneratorId, GroundSet, MarkSet, PartitionPair,
    TriplePartition,
};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::Arc;

/// Relation family and index data of one ideal generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationTag {
    /// Complex crossing product `D·D'`.
    ComplexCrossing(PartitionPair, PartitionPair),
    /// Complex four-mark linear relation, indexed by `(a,b,c,d)`.
    ComplexFourMark(u32, u32, u32, u32),
    /// Real hypersurface product `E·E'` (squares included).
    RealEE(PartitionPair, PartitionPair),
    /// Real mixed product `E·D` for non-nesting indices.
    RealED(PartitionPair, TriplePartition),
    /// Real divisor crossing product `D·D'`.
    RealDD(TriplePartition, TriplePartition),
    /// Sum of all real hypersurface classes.
    RealESum,
    /// Real signed three-mark relation, indexed by `(a,b,c)`.
    RealThreeMark(u32, u32, u32),
}

impl RelationTag {
    pub fn family_str(&self) -> &'static str {
        match self {
            RelationTag::ComplexCrossing(..) | RelationTag::RealEE(..) => "e1a",
            RelationTag::RealED(..) => "e1b",
            RelationTag::RealDD(..) => "e1c",
            RelationTag::ComplexFourMark(..) => "e2",
            RelationTag::RealESum => "e2a",
            RelationTag::RealThreeMark(..) => "e2b",
        }
    }

    pub fn indices_str(&self) -> String {
        match self {
            RelationTag::ComplexCrossing(p, q) => format!(
                "{},{}",
                GeneratorId::ComplexD(*p).name(),
                GeneratorId::ComplexD(*q).name()
            ),
            RelationTag::ComplexFourMark(a, b, c, d) => format!("({a},{b},{c},{d})"),
            RelationTag::RealEE(p, q) => format!(
                "{},{}",
                GeneratorId::RealE(*p).name(),
                GeneratorId::RealE(*q).name()
            ),
            RelationTag::RealED(p, t) => format!(
                "{},{}",
                GeneratorId::RealE(*p).name(),
                GeneratorId::RealD(*t).name()
            ),
            RelationTag::RealDD(t, u) => format!(
                "{},{}",
                GeneratorId::RealD(*t).name(),
                GeneratorId::RealD(*u).name()
            ),
            RelationTag::RealESum => String::new(),
            RelationTag::RealThreeMark(a, b, c) => format!("({a},{b},{c})"),
        }
    }
}

/// One tagged homogeneous ideal generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGenerator {
    pub tag: RelationTag,
    pub poly: Polynomial,
}

/// A finitely presented boundary-class ideal, tagged complex or real.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    family: Family,
    ground: GroundSet,
    alphabet: Arc<Alphabet>,
    generators: Vec<IdealGenerator>,
}

impl IdealPresentation {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn generators(&self) -> &[IdealGenerator] {
        &self.generators
    }

    /// Rebuilds a generator from its tag alone; used to confirm that tags
    /// reconstruct their polynomials bit-for-bit.
    pub fn rebuild(&self, tag: &RelationTag) -> Result<Polynomial> {
        let a = &self.alphabet;
        match tag {
            RelationTag::ComplexCrossing(p, q) => {
                Polynomial::generator(a, &GeneratorId::ComplexD(*p))?
                    .mul(&Polynomial::generator(a, &GeneratorId::ComplexD(*q))?)
            }
            RelationTag::ComplexFourMark(x, b, c, d) => four_mark_element(a, *x, *b, *c, *d),
            RelationTag::RealEE(p, q) => Polynomial::generator(a, &GeneratorId::RealE(*p))?
                .mul(&Polynomial::generator(a, &GeneratorId::RealE(*q))?),
            RelationTag::RealED(p, t) => Polynomial::generator(a, &GeneratorId::RealE(*p))?
                .mul(&Polynomial::generator(a, &GeneratorId::RealD(*t))?),
            RelationTag::RealDD(t, u) => Polynomial::generator(a, &GeneratorId::RealD(*t))?
                .mul(&Polynomial::generator(a, &GeneratorId::RealD(*u))?),
            RelationTag::RealESum => hypersurface_sum(a),
            RelationTag::RealThreeMark(x, b, c) => three_mark_element(a, *x, *b, *c),
        }
    }

    /// Serializable document form (rendered names and polynomials).
    pub fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            family: self.family.as_str().to_string(),
            ell: self.ground.size(),
            alphabet: self.alphabet.generators().iter().map(|g| g.name()).collect(),
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorDoc {
                    tag: g.tag.family_str().to_string(),
                    indices: g.tag.indices_str(),
                    poly: g.poly.render(),
                })
                .collect(),
        }
    }

    /// Hex digest of the canonical document serialization; cache records are
    /// validated against it.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let doc = serde_json::to_string(&self.to_doc()).expect("presentation doc serializes");
        let digest = Sha256::digest(doc.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationDoc {
    pub family: String,
    pub ell: u32,
    pub alphabet: Vec<String>,
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorDoc {
    pub tag: String,
    pub indices: String,
    pub poly: String,
}

/// The four-mark linear relation over a complex alphabet:
/// classes with `a,b` against `c,d` minus classes with `a,c` against `b,d`.
/// Valid index data has `a≠b`, `c≠d`, `a≠c`, `b≠d`.
pub fn four_mark_element(alphabet: &Arc<Alphabet>, a: u32, b: u32, c: u32, d: u32) -> Result<Polynomial> {
    let marks = alphabet.ground().marks();
    for v in [a, b, c, d] {
        if !marks.contains(v) {
            return Err(Error::InvalidArgument(format!("mark {v} not in ground set")));
        }
    }
    if a == b || c == d || a == c || b == d {
        return Err(Error::InvalidArgument(format!(
            "four-mark relation needs a≠b, c≠d, a≠c, b≠d, got ({a},{b},{c},{d})"
        )));
    }
    let mut out = Polynomial::zero(alphabet.clone());
    let split = |x: u32, y: u32, p: &PartitionPair| -> bool {
        (p.j().contains(x) && p.j().contains(y)) || (p.k().contains(x) && p.k().contains(y))
    };
    for gid in alphabet.generators() {
        let GeneratorId::ComplexD(p) = gid else { continue };
        let idx = alphabet.index_of(gid)?;
        let m = crate::poly::Monomial::generator(idx);
        if split(a, b, p) && split(c, d, p) && !split(a, c, p) {
            out.add_term(m.clone(), BigRational::one());
        }
        if split(a, c, p) && split(b, d, p) && !split(a, b, p) {
            out.add_term(m, -BigRational::one());
        }
    }
    Ok(out)
}

/// The sum of all hypersurface classes of a real alphabet, one per class.
pub fn hypersurface_sum(alphabet: &Arc<Alphabet>) -> Result<Polynomial> {
    let mut out = Polynomial::zero(alphabet.clone());
    for gid in alphabet.generators() {
        if matches!(gid, GeneratorId::RealE(_)) {
            let idx = alphabet.index_of(gid)?;
            out.add_term(crate::poly::Monomial::generator(idx), BigRational::one());
        }
    }
    Ok(out)
}

fn designated_part(t: &TriplePartition, v: u32) -> Option<MarkSet> {
    if t.j().contains(v) {
        Some(t.j())
    } else if t.k().contains(v) {
        Some(t.k())
    } else {
        None
    }
}

/// The signed three-mark relation over a real alphabet, for distinct `a,b,c`:
/// the orientation sign is evaluated against the part singled out by the
/// membership conditions, not against the canonical form.
pub fn three_mark_element(alphabet: &Arc<Alphabet>, a: u32, b: u32, c: u32) -> Result<Polynomial> {
    let marks = alphabet.ground().marks();
    for v in [a, b, c] {
        if !marks.contains(v) {
            return Err(Error::InvalidArgument(format!("mark {v} not in ground set")));
        }
    }
    if a == b || a == c || b == c {
        return Err(Error::InvalidArgument(format!(
            "three-mark relation needs distinct marks, got ({a},{b},{c})"
        )));
    }
    let mut out = Polynomial::zero(alphabet.clone());
    for gid in alphabet.generators() {
        let GeneratorId::RealD(t) = gid else { continue };
        let idx = alphabet.index_of(gid)?;
        let m = crate::poly::Monomial::generator(idx);
        let pair = t.conjugate_pair();
        // a,b together in a conjugate part, c on the fixed component
        if t.i().contains(c) {
            if let Some(x) = designated_part(t, a) {
                if x.contains(b) {
                    out.add_term(m.clone(), BigRational::from_integer(pair.epsilon(x)?.into()));
                }
            }
        }
        // a,c together in a conjugate part, b on the fixed component
        if t.i().contains(b) {
            if let Some(x) = designated_part(t, a) {
                if x.contains(c) {
                    out.add_term(m.clone(), -BigRational::from_integer(pair.epsilon(x)?.into()));
                }
            }
        }
        // a on the fixed component, b and c on opposite conjugate parts
        if t.i().contains(a) {
            if let Some(x) = designated_part(t, b) {
                if !x.contains(c) && (t.j().contains(c) || t.k().contains(c)) {
                    out.add_term(m, -BigRational::from_integer(pair.epsilon(x)?.into()));
                }
            }
        }
    }
    Ok(out)
}

/// The degree-2 relation that is null-homologous even integrally: requires
/// `a ≠ b` and `a ≠ c` (`b = c` degenerates to zero). Not an ideal generator;
/// produced for membership testing.
pub fn torsion_free_relation(
    alphabet: &Arc<Alphabet>,
    a: u32,
    b: u32,
    c: u32,
) -> Result<Polynomial> {
    let marks = alphabet.ground().marks();
    for v in [a, b, c] {
        if !marks.contains(v) {
            return Err(Error::InvalidArgument(format!("mark {v} not in ground set")));
        }
    }
    if a == b || a == c {
        return Err(Error::InvalidArgument(format!(
            "relation needs a≠b and a≠c, got ({a},{b},{c})"
        )));
    }
    let mut out = Polynomial::zero(alphabet.clone());
    for gid in alphabet.generators() {
        let GeneratorId::RealD(t) = gid else { continue };
        let Some(x) = designated_part(t, a) else { continue };
        let idx = alphabet.index_of(gid)?;
        let eps = BigRational::from_integer(t.conjugate_pair().epsilon(x)?.into());
        if t.i().contains(c) && !t.i().contains(b) {
            out.add_term(crate::poly::Monomial::generator(idx), eps);
        } else if t.i().contains(b) && !t.i().contains(c) {
            out.add_term(crate::poly::Monomial::generator(idx), -eps);
        }
    }
    Ok(out)
}

/// The complex boundary ideal over an arbitrary ground set of at least three marks.
pub fn complex_ideal_over(ground: GroundSet) -> Result<IdealPresentation> {
    let alphabet = Alphabet::new(Family::Complex, ground)?;
    let mut generators = Vec::new();

    let pairs: Vec<PartitionPair> = alphabet
        .generators()
        .iter()
        .filter_map(|g| match g {
            GeneratorId::ComplexD(p) => Some(*p),
            _ => None,
        })
        .collect();
    for (i, p) in pairs.iter().enumerate() {
        for q in &pairs[i + 1..] {
            if notcap_pair(p, q)? {
                generators.push(IdealGenerator {
                    tag: RelationTag::ComplexCrossing(*p, *q),
                    poly: Polynomial::generator(&alphabet, &GeneratorId::ComplexD(*p))?
                        .mul(&Polynomial::generator(&alphabet, &GeneratorId::ComplexD(*q))?)?,
                });
            }
        }
    }

    let values: Vec<u32> = ground.marks().values().collect();
    let mut seen = HashSet::new();
    for &a in &values {
        for &b in &values {
            for &c in &values {
                for &d in &values {
                    if a == b || c == d || a == c || b == d {
                        continue;
                    }
                    let poly = four_mark_element(&alphabet, a, b, c, d)?;
                    if poly.is_zero() || !seen.insert(poly.render()) {
                        continue;
                    }
                    generators.push(IdealGenerator {
                        tag: RelationTag::ComplexFourMark(a, b, c, d),
                        poly,
                    });
                }
            }
        }
    }

    Ok(IdealPresentation {
        family: Family::Complex,
        ground,
        alphabet,
        generators,
    })
}

/// The complex boundary ideal at level `ell`.
pub fn complex_ideal(ell: u32) -> Result<IdealPresentation> {
    if ell < 3 {
        return Err(Error::InvalidArgument(format!(
            "complex presentation requires ell ≥ 3, got {ell}"
        )));
    }
    complex_ideal_over(GroundSet::integers(ell)?)
}

/// The real boundary ideal over an arbitrary ordered ground set of at least two marks.
pub fn real_ideal_over(ground: GroundSet) -> Result<IdealPresentation> {
    let alphabet = Alphabet::new(Family::Real, ground)?;
    let mut generators = Vec::new();

    let hyps: Vec<PartitionPair> = alphabet
        .generators()
        .iter()
        .filter_map(|g| match g {
            GeneratorId::RealE(p) => Some(*p),
            _ => None,
        })
        .collect();
    let divs: Vec<TriplePartition> = alphabet
        .generators()
        .iter()
        .filter_map(|g| match g {
            GeneratorId::RealD(t) => Some(*t),
            _ => None,
        })
        .collect();

    // All hypersurface products, squares included: the normal bundles are trivial.
    for (i, p) in hyps.iter().enumerate() {
        for q in &hyps[i..] {
            generators.push(IdealGenerator {
                tag: RelationTag::RealEE(*p, *q),
                poly: Polynomial::generator(&alphabet, &GeneratorId::RealE(*p))?
                    .mul(&Polynomial::generator(&alphabet, &GeneratorId::RealE(*q))?)?,
            });
        }
    }

    for p in &hyps {
        for t in &divs {
            if !preceq(t.conjugate_pair(), p) {
                generators.push(IdealGenerator {
                    tag: RelationTag::RealED(*p, *t),
                    poly: Polynomial::generator(&alphabet, &GeneratorId::RealE(*p))?
                        .mul(&Polynomial::generator(&alphabet, &GeneratorId::RealD(*t))?)?,
                });
            }
        }
    }

    for (i, t) in divs.iter().enumerate() {
        for u in &divs[i + 1..] {
            if notcap_triple(t, u)? {
                generators.push(IdealGenerator {
                    tag: RelationTag::RealDD(*t, *u),
                    poly: Polynomial::generator(&alphabet, &GeneratorId::RealD(*t))?
                        .mul(&Polynomial::generator(&alphabet, &GeneratorId::RealD(*u))?)?,
                });
            }
        }
    }

    generators.push(IdealGenerator {
        tag: RelationTag::RealESum,
        poly: hypersurface_sum(&alphabet)?,
    });

    let values: Vec<u32> = ground.marks().values().collect();
    for &a in &values {
        for &b in &values {
            for &c in &values {
                if a == b || a == c || b == c {
                    continue;
                }
                let poly = three_mark_element(&alphabet, a, b, c)?;
                if !poly.is_zero() {
                    generators.push(IdealGenerator {
                        tag: RelationTag::RealThreeMark(a, b, c),
                        poly,
                    });
                }
            }
        }
    }

    Ok(IdealPresentation {
        family: Family::Real,
        ground,
        alphabet,
        generators,
    })
}

/// The real boundary ideal at level `ell`.
pub fn real_ideal(ell: u32) -> Result<IdealPresentation> {
    if ell < 2 {
        return Err(Error::InvalidArgument(format!(
            "real presentation requires ell ≥ 2, got {ell}"
        )));
    }
    real_ideal_over(GroundSet::integers(ell)?)
}
