//! Level-raising transfer homomorphisms: the lift from level `ell` to
//! `ell + 1`, the subcurve embedding maps, their assembled span map, and
//! machine checks of the well-definedness and surjectivity claims.

use crate::betti::BettiVector;
use crate::ideals::{complex_ideal, complex_ideal_over, real_ideal, real_ideal_over};
use crate::poly::{monomials_of_degree, Alphabet, Monomial, Polynomial};
use crate::rank::{ideal_slice, rank_of_rows, RankContext, SparseRow};
use crate::strata::{Family, GeneratorId, GroundSet, MarkSet, PartitionPair, TriplePartition};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

/// A generator at level `ell` together with its signed image classes at
/// level `ell + 1` under the lift.
#[derive(Clone, Debug)]
pub struct LiftedGenerator {
    pub source: GeneratorId,
    pub images: Vec<(GeneratorId, i32)>,
}

fn extend(s: MarkSet, v: u32) -> MarkSet {
    s.insert(v)
}

/// Images of one generator under the lift. The new mark joins each slot in
/// turn; for a real divisor the `+`/`0` slots swap according to whether the
/// first mark sits on the fixed component.
pub fn lift_generator(gid: &GeneratorId, ell: u32) -> Result<LiftedGenerator> {
    let target = GroundSet::integers(ell + 1)?;
    let new = ell + 1;
    let images = match gid {
        GeneratorId::ComplexD(p) => {
            let plus = GeneratorId::complex_d(PartitionPair::new(
                target,
                extend(p.j(), new),
                p.k(),
            )?)?;
            let zero = GeneratorId::complex_d(PartitionPair::new(
                target,
                p.j(),
                extend(p.k(), new),
            )?)?;
            vec![(plus, 1), (zero, 1)]
        }
        GeneratorId::RealE(p) => {
            let plus = GeneratorId::RealE(PartitionPair::new(target, extend(p.j(), new), p.k())?);
            let minus = GeneratorId::RealE(PartitionPair::new(target, p.j(), extend(p.k(), new))?);
            vec![(plus, 1), (minus, 1)]
        }
        GeneratorId::RealD(t) => {
            let join_i = GeneratorId::RealD(TriplePartition::new(
                target,
                extend(t.i(), new),
                t.j(),
                t.k(),
            )?);
            let join_j = GeneratorId::RealD(TriplePartition::new(
                target,
                t.i(),
                extend(t.j(), new),
                t.k(),
            )?);
            let minus = GeneratorId::RealD(TriplePartition::new(
                target,
                t.i(),
                t.j(),
                extend(t.k(), new),
            )?);
            let (plus, zero) = if t.i().contains(1) {
                (join_i, join_j)
            } else {
                (join_j, join_i)
            };
            vec![(plus, 1), (zero, 1), (minus, 1)]
        }
    };
    Ok(LiftedGenerator {
        source: *gid,
        images,
    })
}

/// The ring homomorphism lifting level-`ell` polynomials to level `ell + 1`.
/// Generator images are precomputed so repeated evaluation stays cheap.
pub struct Lift {
    family: Family,
    ell: u32,
    source: Arc<Alphabet>,
    target: Arc<Alphabet>,
    images: Vec<Polynomial>,
}

impl Lift {
    pub fn new(family: Family, ell: u32) -> Result<Lift> {
        let source = Alphabet::new(family, GroundSet::integers(ell)?)?;
        let target = Alphabet::new(family, GroundSet::integers(ell + 1)?)?;
        let mut images = Vec::with_capacity(source.len());
        for gid in source.generators() {
            let lifted = lift_generator(gid, ell)?;
            let mut p = Polynomial::zero(target.clone());
            for (im, sign) in &lifted.images {
                p = p.add(&Polynomial::generator(&target, im)?.scale(&BigRational::from_integer(
                    (*sign).into(),
                )))?;
            }
            images.push(p);
        }
        Ok(Lift {
            family,
            ell,
            source,
            target,
        images,
        })
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    /// Homomorphic evaluation: each generator is replaced by its image sum.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.alphabet().as_ref() != self.source.as_ref() {
            return Err(Error::AlphabetMismatch(format!(
                "lift at level {} applied to a polynomial over another alphabet",
                self.ell
            )));
        }
        let mut out = Polynomial::zero(self.target.clone());
        for (m, c) in p.terms() {
            let mut prod = Polynomial::constant(self.target.clone(), c.clone());
            for &(idx, e) in m.exps() {
                for _ in 0..e {
                    prod = prod.mul(&self.images[idx as usize])?;
                }
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }

    pub fn family(&self) -> Family {
        self.family
    }
}

/// One-shot lift of a polynomial; builds the generator images on the fly.
pub fn lift_polynomial(family: Family, ell: u32, p: &Polynomial) -> Result<Polynomial> {
    Lift::new(family, ell)?.apply(p)
}

fn expect_alphabet(q: &Polynomial, family: Family, ground: GroundSet) -> Result<Arc<Alphabet>> {
    let expected = Alphabet::new(family, ground)?;
    if q.alphabet().as_ref() != expected.as_ref() {
        return Err(Error::AlphabetMismatch(format!(
            "component expected over the {family} alphabet on {:?}",
            ground.marks()
        )));
    }
    Ok(expected)
}

/// Splits a pair over a node-marked ground into (node part minus the node,
/// other part), designating the part that carries the node marker.
fn node_split(p: &PartitionPair) -> Result<(MarkSet, MarkSet)> {
    let nd = p
        .ground()
        .nd_value()
        .ok_or_else(|| Error::Internal("subcurve ground set lacks the node marker".into()))?;
    if p.j().contains(nd) {
        Ok((p.j().minus(MarkSet::from_values([nd])), p.k()))
    } else if p.k().contains(nd) {
        Ok((p.k().minus(MarkSet::from_values([nd])), p.j()))
    } else {
        Err(Error::Internal("node marker missing from both parts".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSide {
    J,
    K,
}

/// Complex subcurve embedding: classes over `{nd} ⊔ side` map to level-`ell`
/// classes by replacing the node with the complementary part.
pub fn embed_subcurve_complex(
    ell: u32,
    pair: &PartitionPair,
    side: PairSide,
    q: &Polynomial,
) -> Result<Polynomial> {
    let ground = GroundSet::integers(ell)?;
    if *pair.ground() != ground {
        return Err(Error::InvalidArgument(
            "pair must live over the integer ground set".into(),
        ));
    }
    let (own, other) = match side {
        PairSide::J => (pair.j(), pair.k()),
        PairSide::K => (pair.k(), pair.j()),
    };
    expect_alphabet(q, Family::Complex, GroundSet::with_node(own)?)?;
    let target = Alphabet::new(Family::Complex, ground)?;
    map_generators(q, &target, |gid| {
        let GeneratorId::ComplexD(p) = gid else {
            return Err(Error::Internal("complex subcurve alphabet holds divisors only".into()));
        };
        let (nd_rest, kept) = node_split(p)?;
        let out = GeneratorId::complex_d(PartitionPair::new(ground, other.union(nd_rest), kept)?)?;
        Ok((out, BigRational::one()))
    })
}

/// Both tensor factors embedded and multiplied: the `J`-side factor inserts
/// `K`, the `K`-side factor inserts `J`.
pub fn embed_pair_tensor_complex(
    ell: u32,
    pair: &PartitionPair,
    tensor: &[(Polynomial, Polynomial)],
) -> Result<Polynomial> {
    let target = Alphabet::new(Family::Complex, GroundSet::integers(ell)?)?;
    let mut out = Polynomial::zero(target);
    for (qj, qk) in tensor {
        let a = embed_subcurve_complex(ell, pair, PairSide::J, qj)?;
        let b = embed_subcurve_complex(ell, pair, PairSide::K, qk)?;
        out = out.add(&a.mul(&b)?)?;
    }
    Ok(out)
}

fn pair_sign(conj_j: MarkSet, conj_k: MarkSet, kept: MarkSet) -> Result<(MarkSet, MarkSet, i32)> {
    let a = conj_j.inter(kept);
    let b = conj_k.inter(kept);
    let m = a
        .union(b)
        .min_value()
        .ok_or_else(|| Error::Internal("empty conjugate split".into()))?;
    let eps = if a.contains(m) { 1 } else { -1 };
    let sign = if conj_k.len().is_multiple_of(2) { eps } else { -eps };
    Ok((a, b, sign))
}

/// Hypersurface subcurve embedding: complex classes over `{nd} ⊔ [ell]`
/// rewritten as signed real divisor classes at level `ell`.
pub fn embed_hypersurface_complex(
    ell: u32,
    pair: &PartitionPair,
    q: &Polynomial,
) -> Result<Polynomial> {
    let ground = GroundSet::integers(ell)?;
    if *pair.ground() != ground {
        return Err(Error::InvalidArgument(
            "pair must live over the integer ground set".into(),
        ));
    }
    expect_alphabet(q, Family::Complex, GroundSet::with_node(ground.marks())?)?;
    let target = Alphabet::new(Family::Real, ground)?;
    map_generators(q, &target, |gid| {
        let GeneratorId::ComplexD(p) = gid else {
            return Err(Error::Internal("complex subcurve alphabet holds divisors only".into()));
        };
        let (nd_rest, kept) = node_split(p)?;
        let (a, b, sign) = pair_sign(pair.j(), pair.k(), kept)?;
        let out = GeneratorId::RealD(TriplePartition::new(ground, nd_rest, a, b)?);
        Ok((out, BigRational::from_integer(sign.into())))
    })
}

/// Second-factor embedding for a divisor subcurve: complex classes over
/// `{nd} ⊔ (J ∪ K)` joined onto the fixed part `I`, with the same sign rule.
pub fn embed_divisor_complex(
    ell: u32,
    triple: &TriplePartition,
    q: &Polynomial,
) -> Result<Polynomial> {
    let ground = GroundSet::integers(ell)?;
    if *triple.ground() != ground {
        return Err(Error::InvalidArgument(
            "triple must live over the integer ground set".into(),
        ));
    }
    let conj = triple.j().union(triple.k());
    expect_alphabet(q, Family::Complex, GroundSet::with_node(conj)?)?;
    let target = Alphabet::new(Family::Real, ground)?;
    map_generators(q, &target, |gid| {
        let GeneratorId::ComplexD(p) = gid else {
            return Err(Error::Internal("complex subcurve alphabet holds divisors only".into()));
        };
        let (nd_rest, kept) = node_split(p)?;
        let (a, b, sign) = pair_sign(triple.j(), triple.k(), kept)?;
        let out = GeneratorId::RealD(TriplePartition::new(ground, triple.i().union(nd_rest), a, b)?);
        Ok((out, BigRational::from_integer(sign.into())))
    })
}

/// First-factor embedding for a divisor subcurve: real classes over
/// `{nd} ⊔ I` absorb the conjugate parts `J`, `K` of the ambient triple.
pub fn embed_divisor_real(
    ell: u32,
    triple: &TriplePartition,
    q: &Polynomial,
) -> Result<Polynomial> {
    let ground = GroundSet::integers(ell)?;
    if *triple.ground() != ground {
        return Err(Error::InvalidArgument(
            "triple must live over the integer ground set".into(),
        ));
    }
    let sub = GroundSet::with_node(triple.i())?;
    expect_alphabet(q, Family::Real, sub)?;
    let nd = sub.nd_value().expect("node ground has a node");
    let target = Alphabet::new(Family::Real, ground)?;
    map_generators(q, &target, |gid| {
        let out = match gid {
            GeneratorId::RealE(p) => {
                let (nd_rest, kept) = node_split(p)?;
                GeneratorId::RealE(PartitionPair::new(
                    ground,
                    triple.j().union(nd_rest),
                    triple.k().union(kept),
                )?)
            }
            GeneratorId::RealD(t) => {
                if t.i().contains(nd) {
                    GeneratorId::RealD(TriplePartition::new(
                        ground,
                        t.i()
                            .minus(MarkSet::from_values([nd]))
                            .union(triple.j())
                            .union(triple.k()),
                        t.j(),
                        t.k(),
                    )?)
                } else {
                    let (nd_rest, kept) = node_split(t.conjugate_pair())?;
                    GeneratorId::RealD(TriplePartition::new(
                        ground,
                        t.i(),
                        triple.j().union(nd_rest),
                        triple.k().union(kept),
                    )?)
                }
            }
            GeneratorId::ComplexD(_) => {
                return Err(Error::Internal("real subcurve alphabet holds real classes".into()))
            }
        };
        Ok((out, BigRational::one()))
    })
}

/// Tensor embedding for a divisor subcurve: first factor real, second complex.
pub fn embed_divisor_tensor(
    ell: u32,
    triple: &TriplePartition,
    tensor: &[(Polynomial, Polynomial)],
) -> Result<Polynomial> {
    let target = Alphabet::new(Family::Real, GroundSet::integers(ell)?)?;
    let mut out = Polynomial::zero(target);
    for (qr, qc) in tensor {
        let a = embed_divisor_real(ell, triple, qr)?;
        let b = embed_divisor_complex(ell, triple, qc)?;
        out = out.add(&a.mul(&b)?)?;
    }
    Ok(out)
}

/// Generator-wise substitution extended multiplicatively.
fn map_generators(
    q: &Polynomial,
    target: &Arc<Alphabet>,
    f: impl Fn(&GeneratorId) -> Result<(GeneratorId, BigRational)>,
) -> Result<Polynomial> {
    let src = q.alphabet().clone();
    let mut image_cache: HashMap<u32, (u32, BigRational)> = HashMap::new();
    let mut out = Polynomial::zero(target.clone());
    for (m, c) in q.terms() {
        let mut mono = Monomial::one();
        let mut coeff = c.clone();
        for &(idx, e) in m.exps() {
            let (tgt_idx, sign) = match image_cache.get(&idx) {
                Some(hit) => hit.clone(),
                None => {
                    let (gid, sign) = f(src.id(idx))?;
                    let entry = (target.index_of(&gid)?, sign);
                    image_cache.insert(idx, entry.clone());
                    entry
                }
            };
            for _ in 0..e {
                mono = mono.mul(&Monomial::generator(tgt_idx));
                coeff *= &sign;
            }
        }
        out.add_term(mono, coeff);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Distinguished level-(ell+1) classes used by the span map

fn complex_zero_class(pair: &PartitionPair, ell: u32) -> Result<GeneratorId> {
    let target = GroundSet::integers(ell + 1)?;
    GeneratorId::complex_d(PartitionPair::new(
        target,
        pair.j(),
        extend(pair.k(), ell + 1),
    )?)
}

fn complex_leading_class(ell: u32) -> Result<GeneratorId> {
    let target = GroundSet::integers(ell + 1)?;
    let j = MarkSet::from_values([1, ell + 1]);
    GeneratorId::complex_d(PartitionPair::new(target, j, target.marks().minus(j))?)
}

fn real_e_zero_class(pair: &PartitionPair, ell: u32) -> Result<GeneratorId> {
    let target = GroundSet::integers(ell + 1)?;
    Ok(GeneratorId::RealD(TriplePartition::new(
        target,
        MarkSet::from_values([ell + 1]),
        pair.j(),
        pair.k(),
    )?))
}

fn real_e_minus_class(pair: &PartitionPair, ell: u32) -> Result<GeneratorId> {
    let target = GroundSet::integers(ell + 1)?;
    Ok(GeneratorId::RealE(PartitionPair::new(
        target,
        pair.j(),
        extend(pair.k(), ell + 1),
    )?))
}

fn real_d_zero_class(triple: &TriplePartition, ell: u32) -> Result<GeneratorId> {
    let target = GroundSet::integers(ell + 1)?;
    Ok(GeneratorId::RealD(if triple.i().contains(1) {
        TriplePartition::new(target, triple.i(), extend(triple.j(), ell + 1), triple.k())?
    } else {
        TriplePartition::new(target, extend(triple.i(), ell + 1), triple.j(), triple.k())?
    }))
}

fn real_d_minus_class(triple: &TriplePartition, ell: u32) -> Result<GeneratorId> {
    let target = GroundSet::integers(ell + 1)?;
    Ok(GeneratorId::RealD(TriplePartition::new(
        target,
        triple.i(),
        triple.j(),
        extend(triple.k(), ell + 1),
    )?))
}

fn real_leading_class(ell: u32) -> Result<GeneratorId> {
    let target = GroundSet::integers(ell + 1)?;
    Ok(GeneratorId::RealD(TriplePartition::new(
        target,
        MarkSet::range(2, ell),
        MarkSet::from_values([1, ell + 1]),
        MarkSet::EMPTY,
    )?))
}

// ---------------------------------------------------------------------------
// The assembled span map

/// Input of the complex span map: two ambient components plus one tensor
/// element per bullet pair, each a sum of factor pairs.
pub struct ComplexTransferInput {
    pub kappa0: Polynomial,
    pub kappa: Polynomial,
    pub pair_components: Vec<(PartitionPair, Vec<(Polynomial, Polynomial)>)>,
}

/// Input of the real span map: two ambient components, two subcurve
/// components per hypersurface class, and two tensor elements per divisor.
pub struct RealTransferInput {
    pub kappa0: Polynomial,
    pub kappa: Polynomial,
    pub pair_components: Vec<(PartitionPair, Polynomial, Polynomial)>,
    #[allow(clippy::type_complexity)]
    pub triple_components: Vec<(
        TriplePartition,
        Vec<(Polynomial, Polynomial)>,
        Vec<(Polynomial, Polynomial)>,
    )>,
}

pub fn transfer_image_complex(ell: u32, input: &ComplexTransferInput) -> Result<Polynomial> {
    let lift = Lift::new(Family::Complex, ell)?;
    let target = lift.target().clone();
    let lead = Polynomial::generator(&target, &complex_leading_class(ell)?)?;
    let mut out = lead.mul(&lift.apply(&input.kappa0)?)?;
    out = out.add(&lift.apply(&input.kappa)?)?;
    for (pair, tensor) in &input.pair_components {
        let zero = Polynomial::generator(&target, &complex_zero_class(pair, ell)?)?;
        let embedded = embed_pair_tensor_complex(ell, pair, tensor)?;
        out = out.add(&zero.mul(&lift.apply(&embedded)?)?)?;
    }
    Ok(out)
}

pub fn transfer_image_real(ell: u32, input: &RealTransferInput) -> Result<Polynomial> {
    let lift = Lift::new(Family::Real, ell)?;
    let target = lift.target().clone();
    let lead = Polynomial::generator(&target, &real_leading_class(ell)?)?;
    let mut out = lead.mul(&lift.apply(&input.kappa0)?)?;
    out = out.add(&lift.apply(&input.kappa)?)?;
    for (pair, q, q_minus) in &input.pair_components {
        let zero = Polynomial::generator(&target, &real_e_zero_class(pair, ell)?)?;
        let minus = Polynomial::generator(&target, &real_e_minus_class(pair, ell)?)?;
        out = out.add(&zero.mul(&lift.apply(&embed_hypersurface_complex(ell, pair, q)?)?)?)?;
        out = out.add(&minus.mul(&lift.apply(&embed_hypersurface_complex(ell, pair, q_minus)?)?)?)?;
    }
    for (triple, tensor, tensor_minus) in &input.triple_components {
        let zero = Polynomial::generator(&target, &real_d_zero_class(triple, ell)?)?;
        let minus = Polynomial::generator(&target, &real_d_minus_class(triple, ell)?)?;
        out = out.add(&zero.mul(&lift.apply(&embed_divisor_tensor(ell, triple, tensor)?)?)?)?;
        out = out.add(&minus.mul(&lift.apply(&embed_divisor_tensor(ell, triple, tensor_minus)?)?)?)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankWitness {
    pub rank: usize,
    pub columns: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub indices: String,
    pub degree: u32,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RankWitness>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WellDefReport {
    pub family: String,
    pub ell: u32,
    pub degree_bound: u32,
    pub checks: Vec<CheckRecord>,
    pub incomplete: bool,
}

impl WellDefReport {
    pub fn all_pass(&self) -> bool {
        !self.incomplete && self.checks.iter().all(|c| c.pass)
    }
}

/// One pending membership check: the span-map image of an ideal element from
/// one domain summand, to be tested against the target ideal.
struct PendingCheck {
    check: String,
    indices: String,
    image: Polynomial,
}

fn monomial_polys(alphabet: &Arc<Alphabet>, max_degree: u32) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for m in monomials_of_degree(alphabet, d) {
            out.push(Polynomial::from_terms(
                alphabet.clone(),
                [(m, BigRational::one())],
            ));
        }
    }
    out
}

/// Checks that the span map kills the ideal of every domain summand: each
/// generator, multiplied by monomials up to the degree bound, must map into
/// the target ideal. The default bound is the target's top degree.
pub fn verify_transfer_well_defined(
    family: Family,
    ell: u32,
    bound: Option<u32>,
    ctx: &RankContext,
) -> Result<WellDefReport> {
    let bound = bound.unwrap_or_else(|| BettiVector::top_degree(family, ell + 1));
    let target = match family {
        Family::Complex => complex_ideal(ell + 1)?,
        Family::Real => real_ideal(ell + 1)?,
    };
    let mut pending: Vec<PendingCheck> = Vec::new();

    match family {
        Family::Complex => {
            let source = complex_ideal(ell)?;
            let lift = Lift::new(Family::Complex, ell)?;
            let lead = Polynomial::generator(lift.target(), &complex_leading_class(ell)?)?;
            for gen in source.generators() {
                let gd = gen.poly.homogeneous_degree()?.unwrap_or(0);
                for m in monomial_polys(source.alphabet(), bound.saturating_sub(gd)) {
                    let elt = gen.poly.mul(&m)?;
                    let lifted = lift.apply(&elt)?;
                    if lifted.homogeneous_degree()?.unwrap_or(0) <= bound {
                        pending.push(PendingCheck {
                            check: "kappa".into(),
                            indices: format!("{}:{}", gen.tag.family_str(), gen.tag.indices_str()),
                            image: lifted.clone(),
                        });
                    }
                    let led = lead.mul(&lifted)?;
                    if led.homogeneous_degree()?.unwrap_or(0) <= bound {
                        pending.push(PendingCheck {
                            check: "kappa0".into(),
                            indices: format!("{}:{}", gen.tag.family_str(), gen.tag.indices_str()),
                            image: led,
                        });
                    }
                }
            }
            for pair in bullet_pairs(ell)? {
                let zero = Polynomial::generator(lift.target(), &complex_zero_class(&pair, ell)?)?;
                for side in [PairSide::J, PairSide::K] {
                    let own = match side {
                        PairSide::J => pair.j(),
                        PairSide::K => pair.k(),
                    };
                    let other_alpha = Alphabet::new(
                        Family::Complex,
                        GroundSet::with_node(match side {
                            PairSide::J => pair.k(),
                            PairSide::K => pair.j(),
                        })?,
                    )?;
                    let sub = complex_ideal_over(GroundSet::with_node(own)?)?;
                    for gen in sub.generators() {
                        let gd = gen.poly.homogeneous_degree()?.unwrap_or(0);
                        for m1 in monomial_polys(sub.alphabet(), bound.saturating_sub(gd + 2)) {
                            let own_elt = gen.poly.mul(&m1)?;
                            let ed = own_elt.homogeneous_degree()?.unwrap_or(0);
                            for m2 in monomial_polys(&other_alpha, bound.saturating_sub(ed + 2)) {
                                let tensor = match side {
                                    PairSide::J => vec![(own_elt.clone(), m2.clone())],
                                    PairSide::K => vec![(m2.clone(), own_elt.clone())],
                                };
                                let embedded = embed_pair_tensor_complex(ell, &pair, &tensor)?;
                                let image = zero.mul(&lift.apply(&embedded)?)?;
                                if image.homogeneous_degree()?.unwrap_or(0) > bound {
                                    continue;
                                }
                                pending.push(PendingCheck {
                                    check: format!("pair[{}]", GeneratorId::ComplexD(pair).name()),
                                    indices: format!(
                                        "{}:{}",
                                        gen.tag.family_str(),
                                        gen.tag.indices_str()
                                    ),
                                    image,
                                });
                            }
                        }
                    }
                }
            }
        }
        Family::Real => {
            let source = real_ideal(ell)?;
            let lift = Lift::new(Family::Real, ell)?;
            let lead = Polynomial::generator(lift.target(), &real_leading_class(ell)?)?;
            for gen in source.generators() {
                let gd = gen.poly.homogeneous_degree()?.unwrap_or(0);
                for m in monomial_polys(source.alphabet(), bound.saturating_sub(gd)) {
                    let elt = gen.poly.mul(&m)?;
                    let lifted = lift.apply(&elt)?;
                    if lifted.homogeneous_degree()?.unwrap_or(0) <= bound {
                        pending.push(PendingCheck {
                            check: "kappa".into(),
                            indices: format!("{}:{}", gen.tag.family_str(), gen.tag.indices_str()),
                            image: lifted.clone(),
                        });
                    }
                    let led = lead.mul(&lifted)?;
                    if led.homogeneous_degree()?.unwrap_or(0) <= bound {
                        pending.push(PendingCheck {
                            check: "kappa0".into(),
                            indices: format!("{}:{}", gen.tag.family_str(), gen.tag.indices_str()),
                            image: led,
                        });
                    }
                }
            }
            // Hypersurface summands: the subcurve ideal is the complex ideal
            // over {nd} ⊔ [ell].
            let sub = complex_ideal_over(GroundSet::with_node(GroundSet::integers(ell)?.marks())?)?;
            for pair in all_pairs(ell)? {
                let zero = Polynomial::generator(lift.target(), &real_e_zero_class(&pair, ell)?)?;
                let minus = Polynomial::generator(lift.target(), &real_e_minus_class(&pair, ell)?)?;
                for gen in sub.generators() {
                    let gd = gen.poly.homogeneous_degree()?.unwrap_or(0);
                    for (slot, prefix, pdeg) in [("E0", &zero, 2u32), ("E-", &minus, 1u32)] {
                        for m in monomial_polys(sub.alphabet(), bound.saturating_sub(gd + pdeg)) {
                            let elt = gen.poly.mul(&m)?;
                            let image = prefix
                                .mul(&lift.apply(&embed_hypersurface_complex(ell, &pair, &elt)?)?)?;
                            if image.homogeneous_degree()?.unwrap_or(0) > bound {
                                continue;
                            }
                            pending.push(PendingCheck {
                                check: format!(
                                    "hyp[{}]/{slot}",
                                    GeneratorId::RealE(pair).name()
                                ),
                                indices: format!(
                                    "{}:{}",
                                    gen.tag.family_str(),
                                    gen.tag.indices_str()
                                ),
                                image,
                            });
                        }
                    }
                }
            }
            // Divisor summands: real ideal over {nd} ⊔ I tensored with the
            // monomials of the complex side, and conversely.
            for triple in bullet_triples(ell)? {
                let zero = Polynomial::generator(lift.target(), &real_d_zero_class(&triple, ell)?)?;
                let minus =
                    Polynomial::generator(lift.target(), &real_d_minus_class(&triple, ell)?)?;
                let conj = triple.j().union(triple.k());
                let real_sub = real_ideal_over(GroundSet::with_node(triple.i())?)?;
                let complex_sub = complex_ideal_over(GroundSet::with_node(conj)?)?;
                let complex_alpha = complex_sub.alphabet().clone();
                let real_alpha = real_sub.alphabet().clone();
                for (slot, prefix) in [("D0", &zero), ("D-", &minus)] {
                    for gen in real_sub.generators() {
                        let gd = gen.poly.homogeneous_degree()?.unwrap_or(0);
                        for m1 in monomial_polys(&real_alpha, bound.saturating_sub(gd + 2)) {
                            let elt = gen.poly.mul(&m1)?;
                            let ed = elt.homogeneous_degree()?.unwrap_or(0);
                            for m2 in monomial_polys(&complex_alpha, bound.saturating_sub(ed + 2)) {
                                let embedded = embed_divisor_tensor(
                                    ell,
                                    &triple,
                                    &[(elt.clone(), m2.clone())],
                                )?;
                                let image = prefix.mul(&lift.apply(&embedded)?)?;
                                if image.homogeneous_degree()?.unwrap_or(0) > bound {
                                    continue;
                                }
                                pending.push(PendingCheck {
                                    check: format!(
                                        "div[{}]/{slot}/real",
                                        GeneratorId::RealD(triple).name()
                                    ),
                                    indices: format!(
                                        "{}:{}",
                                        gen.tag.family_str(),
                                        gen.tag.indices_str()
                                    ),
                                    image,
                                });
                            }
                        }
                    }
                    for gen in complex_sub.generators() {
                        let gd = gen.poly.homogeneous_degree()?.unwrap_or(0);
                        for m2 in monomial_polys(&complex_alpha, bound.saturating_sub(gd + 2)) {
                            let elt = gen.poly.mul(&m2)?;
                            let ed = elt.homogeneous_degree()?.unwrap_or(0);
                            for m1 in monomial_polys(&real_alpha, bound.saturating_sub(ed + 2)) {
                                let embedded = embed_divisor_tensor(
                                    ell,
                                    &triple,
                                    &[(m1.clone(), elt.clone())],
                                )?;
                                let image = prefix.mul(&lift.apply(&embedded)?)?;
                                if image.homogeneous_degree()?.unwrap_or(0) > bound {
                                    continue;
                                }
                                pending.push(PendingCheck {
                                    check: format!(
                                        "div[{}]/{slot}/complex",
                                        GeneratorId::RealD(triple).name()
                                    ),
                                    indices: format!(
                                        "{}:{}",
                                        gen.tag.family_str(),
                                        gen.tag.indices_str()
                                    ),
                                    image,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    let run_one = |p: &PendingCheck| -> Result<CheckRecord> {
        let degree = p.image.homogeneous_degree()?.unwrap_or(0);
        let pass = ctx.contains(&target, &p.image)?;
        Ok(CheckRecord {
            check: p.check.clone(),
            indices: p.indices.clone(),
            degree,
            pass,
            witness: None,
        })
    };
    let results: Vec<Result<CheckRecord>> = if ctx.config().parallel {
        pending.par_iter().map(run_one).collect()
    } else {
        pending.iter().map(run_one).collect()
    };
    let mut checks = Vec::with_capacity(results.len());
    let mut incomplete = false;
    for r in results {
        match r {
            Ok(c) => checks.push(c),
            Err(Error::ResourceLimit(_)) => incomplete = true,
            Err(e) => return Err(e),
        }
    }
    Ok(WellDefReport {
        family: family.as_str().to_string(),
        ell,
        degree_bound: bound,
        checks,
        incomplete,
    })
}

fn bullet_pairs(ell: u32) -> Result<Vec<PartitionPair>> {
    let alphabet = Alphabet::new(Family::Complex, GroundSet::integers(ell)?)?;
    Ok(alphabet
        .generators()
        .iter()
        .filter_map(|g| match g {
            GeneratorId::ComplexD(p) => Some(*p),
            _ => None,
        })
        .collect())
}

fn all_pairs(ell: u32) -> Result<Vec<PartitionPair>> {
    let alphabet = Alphabet::new(Family::Real, GroundSet::integers(ell)?)?;
    Ok(alphabet
        .generators()
        .iter()
        .filter_map(|g| match g {
            GeneratorId::RealE(p) => Some(*p),
            _ => None,
        })
        .collect())
}

fn bullet_triples(ell: u32) -> Result<Vec<TriplePartition>> {
    let alphabet = Alphabet::new(Family::Real, GroundSet::integers(ell)?)?;
    Ok(alphabet
        .generators()
        .iter()
        .filter_map(|g| match g {
            GeneratorId::RealD(t) => Some(*t),
            _ => None,
        })
        .collect())
}

fn poly_to_int_row(p: &Polynomial, col_index: &HashMap<Monomial, u32>) -> Result<SparseRow> {
    let mut denom_lcm = BigInt::one();
    for (_, c) in p.terms() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut row: SparseRow = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms() {
        let col = *col_index
            .get(m)
            .ok_or_else(|| Error::Internal("image monomial outside the slice basis".into()))?;
        row.push((col, c.numer() * (&denom_lcm / c.denom())));
    }
    row.sort_by_key(|&(c, _)| c);
    Ok(row)
}

/// All span-map images of degree `d`: monomial inputs in every domain slot.
fn surjectivity_images(family: Family, ell: u32, d: u32) -> Result<Vec<Polynomial>> {
    let mut images = Vec::new();
    match family {
        Family::Complex => {
            let lift = Lift::new(Family::Complex, ell)?;
            let lead = Polynomial::generator(lift.target(), &complex_leading_class(ell)?)?;
            if d >= 2 {
                for m in monomials_of_degree(lift.source(), d - 2) {
                    let p = Polynomial::from_terms(
                        lift.source().clone(),
                        [(m, BigRational::one())],
                    );
                    images.push(lead.mul(&lift.apply(&p)?)?);
                }
            }
            for m in monomials_of_degree(lift.source(), d) {
                let p = Polynomial::from_terms(lift.source().clone(), [(m, BigRational::one())]);
                images.push(lift.apply(&p)?);
            }
            for pair in bullet_pairs(ell)? {
                if d < 2 {
                    continue;
                }
                let zero = Polynomial::generator(lift.target(), &complex_zero_class(&pair, ell)?)?;
                let aj = Alphabet::new(Family::Complex, GroundSet::with_node(pair.j())?)?;
                let ak = Alphabet::new(Family::Complex, GroundSet::with_node(pair.k())?)?;
                for d1 in 0..=(d - 2) {
                    for m1 in monomials_of_degree(&aj, d1) {
                        for m2 in monomials_of_degree(&ak, d - 2 - d1) {
                            let t = vec![(
                                Polynomial::from_terms(aj.clone(), [(m1.clone(), BigRational::one())]),
                                Polynomial::from_terms(ak.clone(), [(m2.clone(), BigRational::one())]),
                            )];
                            let embedded = embed_pair_tensor_complex(ell, &pair, &t)?;
                            images.push(zero.mul(&lift.apply(&embedded)?)?);
                        }
                    }
                }
            }
        }
        Family::Real => {
            let lift = Lift::new(Family::Real, ell)?;
            let lead = Polynomial::generator(lift.target(), &real_leading_class(ell)?)?;
            if d >= 2 {
                for m in monomials_of_degree(lift.source(), d - 2) {
                    let p = Polynomial::from_terms(
                        lift.source().clone(),
                        [(m, BigRational::one())],
                    );
                    images.push(lead.mul(&lift.apply(&p)?)?);
                }
            }
            for m in monomials_of_degree(lift.source(), d) {
                let p = Polynomial::from_terms(lift.source().clone(), [(m, BigRational::one())]);
                images.push(lift.apply(&p)?);
            }
            let hyp_alpha = Alphabet::new(
                Family::Complex,
                GroundSet::with_node(GroundSet::integers(ell)?.marks())?,
            )?;
            for pair in all_pairs(ell)? {
                for (prefix_gid, pdeg) in [
                    (real_e_zero_class(&pair, ell)?, 2u32),
                    (real_e_minus_class(&pair, ell)?, 1u32),
                ] {
                    if d < pdeg {
                        continue;
                    }
                    let prefix = Polynomial::generator(lift.target(), &prefix_gid)?;
                    for m in monomials_of_degree(&hyp_alpha, d - pdeg) {
                        let p = Polynomial::from_terms(
                            hyp_alpha.clone(),
                            [(m, BigRational::one())],
                        );
                        let embedded = embed_hypersurface_complex(ell, &pair, &p)?;
                        images.push(prefix.mul(&lift.apply(&embedded)?)?);
                    }
                }
            }
            for triple in bullet_triples(ell)? {
                if d < 2 {
                    continue;
                }
                let ar = Alphabet::new(Family::Real, GroundSet::with_node(triple.i())?)?;
                let ac = Alphabet::new(
                    Family::Complex,
                    GroundSet::with_node(triple.j().union(triple.k()))?,
                )?;
                for prefix_gid in [
                    real_d_zero_class(&triple, ell)?,
                    real_d_minus_class(&triple, ell)?,
                ] {
                    let prefix = Polynomial::generator(lift.target(), &prefix_gid)?;
                    for d1 in 0..=(d - 2) {
                        for m1 in monomials_of_degree(&ar, d1) {
                            for m2 in monomials_of_degree(&ac, d - 2 - d1) {
                                let t = vec![(
                                    Polynomial::from_terms(
                                        ar.clone(),
                                        [(m1.clone(), BigRational::one())],
                                    ),
                                    Polynomial::from_terms(
                                        ac.clone(),
                                        [(m2.clone(), BigRational::one())],
                                    ),
                                )];
                                let embedded = embed_divisor_tensor(ell, &triple, &t)?;
                                images.push(prefix.mul(&lift.apply(&embedded)?)?);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(images)
}

/// True iff the span-map images of all degree-compatible domain monomials,
/// together with the degree-`d` ideal slice, span the whole degree-`d`
/// component at level `ell + 1`.
pub fn verify_transfer_surjective(
    family: Family,
    ell: u32,
    d: u32,
    ctx: &RankContext,
) -> Result<(bool, RankWitness)> {
    let target = match family {
        Family::Complex => complex_ideal(ell + 1)?,
        Family::Real => real_ideal(ell + 1)?,
    };
    let slice = ideal_slice(&target, d, ctx.config())?;
    let col_index: HashMap<Monomial, u32> = slice
        .columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect();
    let mut rows = slice.rows;
    for image in surjectivity_images(family, ell, d)? {
        if image.is_zero() {
            continue;
        }
        rows.push(poly_to_int_row(&image, &col_index)?);
    }
    let ncols = slice.columns.len();
    let rank = rank_of_rows(&rows, ncols, ctx.config());
    Ok((
        rank == ncols,
        RankWitness {
            rank,
            columns: ncols,
            expected: ncols,
        },
    ))
}
