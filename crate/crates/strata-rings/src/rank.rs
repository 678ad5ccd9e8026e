//! Degree slices of homogeneous ideals, exact sparse rank computation, and
//! ideal membership. Rows are cleared to integers; a modular pass over a
//! fixed 62-bit prime serves as a certificate when it meets the dimension
//! bound, and fraction-free integer elimination decides everything else.

use crate::betti::{BettiVector, Method};
use crate::ideals::IdealPresentation;
use crate::poly::{count_monomials, monomials_of_degree, Monomial, Polynomial};
use crate::strata::{Family, GroundSet};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

/// Largest prime below 2^62; the default modulus of the fast pre-pass.
pub const DEFAULT_MODULUS: u64 = (1u64 << 62) - 57;

#[derive(Clone, Debug)]
pub struct RankConfig {
    /// Ceiling on the monomial-basis size of a single slice.
    pub column_limit: usize,
    /// Modulus of the pre-pass; a modular rank meeting the dimension bound
    /// certifies the exact rank.
    pub modular_prime: u64,
    /// Fan out independent degrees and membership queries across threads.
    pub parallel: bool,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            column_limit: 2_000_000,
            modular_prime: DEFAULT_MODULUS,
            parallel: true,
        }
    }
}

pub type SparseRow = Vec<(u32, BigInt)>;

/// The degree-`d` component of an ideal: the monomial basis of the ambient
/// slice and one integer row per generator-times-monomial product.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    pub degree: u32,
    pub columns: Vec<Monomial>,
    pub rows: Vec<SparseRow>,
}

/// Clears denominators and the integer content of a polynomial, mapping its
/// terms onto slice columns.
fn poly_to_row(p: &Polynomial, col_index: &HashMap<Monomial, u32>) -> Result<SparseRow> {
    let mut denom_lcm = BigInt::one();
    for (_, c) in p.terms() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut row: SparseRow = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms() {
        let col = *col_index.get(m).ok_or_else(|| {
            Error::Internal("monomial missing from the slice basis".to_string())
        })?;
        row.push((col, c.numer() * (&denom_lcm / c.denom())));
    }
    row.sort_by_key(|&(c, _)| c);
    let content = row
        .iter()
        .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if content > BigInt::one() {
        for (_, v) in &mut row {
            *v /= &content;
        }
    }
    Ok(row)
}

/// Builds the degree-`d` slice of an ideal presentation.
pub fn ideal_slice(pres: &IdealPresentation, d: u32, cfg: &RankConfig) -> Result<DegreeSlice> {
    let alphabet = pres.alphabet();
    let count = count_monomials(alphabet, d);
    if count > num_bigint::BigUint::from(cfg.column_limit) {
        return Err(Error::ResourceLimit(format!(
            "degree-{d} slice needs {count} columns, limit {}",
            cfg.column_limit
        )));
    }
    let columns = monomials_of_degree(alphabet, d);
    let col_index: HashMap<Monomial, u32> = columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect();
    let mut rows = Vec::new();
    for gen in pres.generators() {
        let gd = gen
            .poly
            .homogeneous_degree()?
            .ok_or_else(|| Error::Internal("zero ideal generator".to_string()))?;
        if gd > d {
            continue;
        }
        for m in monomials_of_degree(alphabet, d - gd) {
            rows.push(poly_to_row(&gen.poly.mul_monomial(&m), &col_index)?);
        }
    }
    Ok(DegreeSlice {
        degree: d,
        columns,
        rows,
    })
}

// ---------------------------------------------------------------------------
// Modular elimination (fast pre-pass)

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i64().expect("residue fits i64");
    if r < 0 {
        (r + p as i64) as u64
    } else {
        r as u64
    }
}

/// Rank of the row set modulo `p`, a lower bound for the rational rank.
fn rank_mod(rows: &[SparseRow], ncols: usize, p: u64) -> usize {
    let mut work: Vec<BTreeMap<u32, u64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let mut m = BTreeMap::new();
        for (c, v) in row {
            let r = bigint_mod(v, p);
            if r != 0 {
                m.insert(*c, r);
            }
        }
        if !m.is_empty() {
            work.push(m);
        }
    }
    let mut col_rows: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); ncols];
    let mut active: BTreeSet<(usize, u32)> = BTreeSet::new();
    for (r, row) in work.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c as usize].insert(r as u32);
        }
        active.insert((row.len(), r as u32));
    }
    let mut rank = 0usize;
    while let Some(&(_, r)) = active.iter().next() {
        let ru = r as usize;
        active.remove(&(work[ru].len(), r));
        let c = *work[ru]
            .keys()
            .min_by_key(|&&c| (col_rows[c as usize].len(), c))
            .expect("active rows are nonempty");
        let pivot_inv = inv_mod(work[ru][&c], p);
        let pivot_row: Vec<(u32, u64)> = work[ru].iter().map(|(&k, &v)| (k, v)).collect();
        let victims: Vec<u32> = col_rows[c as usize].iter().copied().filter(|&s| s != r).collect();
        for s in victims {
            let su = s as usize;
            active.remove(&(work[su].len(), s));
            let a = work[su].remove(&c).expect("column index is consistent");
            col_rows[c as usize].remove(&s);
            let factor = mul_mod(a, pivot_inv, p);
            for &(col, v) in &pivot_row {
                if col == c {
                    continue;
                }
                let delta = mul_mod(factor, v, p);
                let entry = work[su].entry(col).or_insert(0);
                let newv = (*entry + p - delta) % p;
                if newv == 0 {
                    work[su].remove(&col);
                    col_rows[col as usize].remove(&s);
                } else {
                    if *work[su].get(&col).unwrap() == newv {
                    } else {
                        *work[su].get_mut(&col).unwrap() = newv;
                    }
                    col_rows[col as usize].insert(s);
                }
            }
            if !work[su].is_empty() {
                active.insert((work[su].len(), s));
            }
        }
        for &col in pivot_row.iter().map(|(c, _)| c) {
            col_rows[col as usize].remove(&r);
        }
        rank += 1;
    }
    rank
}

// ---------------------------------------------------------------------------
// Exact fraction-free elimination

/// Row-echelon pivot data over the integers, in elimination order. Later
/// pivot rows contain no earlier pivot columns, so sequential reduction
/// against this list decides rational span membership.
#[derive(Debug)]
pub struct Echelon {
    pub ncols: usize,
    pub pivots: Vec<(u32, SparseRow)>,
}

fn content_reduce(row: &mut BTreeMap<u32, BigInt>) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

fn eliminate_exact(rows: &[SparseRow], ncols: usize) -> Echelon {
    let mut work: Vec<BTreeMap<u32, BigInt>> = Vec::with_capacity(rows.len());
    for row in rows {
        let m: BTreeMap<u32, BigInt> =
            row.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        if !m.is_empty() {
            work.push(m);
        }
    }
    let mut col_rows: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); ncols];
    let mut active: BTreeSet<(usize, u32)> = BTreeSet::new();
    for (r, row) in work.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c as usize].insert(r as u32);
        }
        active.insert((row.len(), r as u32));
    }
    let mut pivots: Vec<(u32, SparseRow)> = Vec::new();
    while let Some(&(_, r)) = active.iter().next() {
        let ru = r as usize;
        active.remove(&(work[ru].len(), r));
        // Prefer unit pivots, then sparse columns.
        let c = *work[ru]
            .iter()
            .min_by_key(|(&c, v)| {
                (
                    u8::from(!(v.magnitude().is_one())),
                    col_rows[c as usize].len(),
                    c,
                )
            })
            .map(|(c, _)| c)
            .expect("active rows are nonempty");
        let pivot_val = work[ru][&c].clone();
        let pivot_row: Vec<(u32, BigInt)> =
            work[ru].iter().map(|(&k, v)| (k, v.clone())).collect();
        let victims: Vec<u32> = col_rows[c as usize].iter().copied().filter(|&s| s != r).collect();
        for s in victims {
            let su = s as usize;
            active.remove(&(work[su].len(), s));
            let a = work[su].remove(&c).expect("column index is consistent");
            col_rows[c as usize].remove(&s);
            // s := pivot * s - a * pivot_row, with the pivot column dropped.
            if !pivot_val.is_one() {
                if pivot_val == -BigInt::one() {
                    for v in work[su].values_mut() {
                        *v = -std::mem::take(v);
                    }
                } else {
                    for v in work[su].values_mut() {
                        *v *= &pivot_val;
                    }
                }
            }
            for (col, v) in &pivot_row {
                if *col == c {
                    continue;
                }
                let delta = &a * v;
                match work[su].entry(*col) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                        col_rows[*col as usize].insert(s);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                            col_rows[*col as usize].remove(&s);
                        }
                    }
                }
            }
            content_reduce(&mut work[su]);
            if !work[su].is_empty() {
                active.insert((work[su].len(), s));
            }
        }
        for (col, _) in &pivot_row {
            col_rows[*col as usize].remove(&r);
        }
        pivots.push((c, pivot_row));
    }
    Echelon { ncols, pivots }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces an integer row against the pivot list; `true` means the row
    /// lies in the rational span.
    pub fn reduces_to_zero(&self, row: &SparseRow) -> bool {
        let mut v: BTreeMap<u32, BigInt> = row
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .cloned()
            .collect();
        for (c, prow) in &self.pivots {
            if v.is_empty() {
                return true;
            }
            let Some(a) = v.remove(c) else { continue };
            let pivot_val = prow
                .iter()
                .find(|(col, _)| col == c)
                .map(|(_, x)| x.clone())
                .expect("pivot column present in pivot row");
            if !pivot_val.is_one() {
                if pivot_val == -BigInt::one() {
                    for x in v.values_mut() {
                        *x = -std::mem::take(x);
                    }
                } else {
                    for x in v.values_mut() {
                        *x *= &pivot_val;
                    }
                }
            }
            for (col, pv) in prow {
                if col == c {
                    continue;
                }
                let delta = &a * pv;
                match v.entry(*col) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
            content_reduce(&mut v);
        }
        v.is_empty()
    }
}

/// Exact rank of a row set, modular certificate first.
pub fn rank_of_rows(rows: &[SparseRow], ncols: usize, cfg: &RankConfig) -> usize {
    let nonzero = rows.iter().filter(|r| !r.is_empty()).count();
    if nonzero == 0 || ncols == 0 {
        return 0;
    }
    let lower = rank_mod(rows, ncols, cfg.modular_prime);
    if lower == nonzero.min(ncols) {
        return lower;
    }
    let exact = eliminate_exact(rows, ncols).rank();
    debug_assert!(exact >= lower);
    exact
}

/// Exact rank of a degree slice over the rationals.
pub fn slice_rank(slice: &DegreeSlice, cfg: &RankConfig) -> usize {
    rank_of_rows(&slice.rows, slice.columns.len(), cfg)
}

// ---------------------------------------------------------------------------
// Cached per-degree elimination

#[derive(Clone, PartialEq, Eq, Hash)]
struct SliceKey {
    family: Family,
    ground: GroundSet,
    degree: u32,
}

enum SliceState {
    /// The modular pass met the column count, so the slice spans everything.
    FullColumnRank { ncols: usize },
    /// Rank certified without pivot data (modular rank met the row count).
    RankOnly { rank: usize },
    /// Full echelon data, able to answer membership queries.
    Echelonized {
        col_index: Arc<HashMap<Monomial, u32>>,
        echelon: Arc<Echelon>,
    },
}

impl SliceState {
    fn rank(&self) -> usize {
        match self {
            SliceState::FullColumnRank { ncols } => *ncols,
            SliceState::RankOnly { rank, .. } => *rank,
            SliceState::Echelonized { echelon, .. } => echelon.rank(),
        }
    }
}

/// Shared cache of eliminated ideal slices, keyed by family, ground set, and
/// degree. Safe for concurrent use.
pub struct RankContext {
    cfg: RankConfig,
    memo: Mutex<HashMap<SliceKey, Arc<SliceState>>>,
}

impl Default for RankContext {
    fn default() -> Self {
        RankContext::new(RankConfig::default())
    }
}

impl RankContext {
    pub fn new(cfg: RankConfig) -> RankContext {
        RankContext {
            cfg,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &RankConfig {
        &self.cfg
    }

    fn key(pres: &IdealPresentation, d: u32) -> SliceKey {
        SliceKey {
            family: pres.family(),
            ground: *pres.ground(),
            degree: d,
        }
    }

    fn lookup(&self, key: &SliceKey) -> Option<Arc<SliceState>> {
        self.memo.lock().expect("rank memo poisoned").get(key).cloned()
    }

    fn store(&self, key: SliceKey, state: SliceState) -> Arc<SliceState> {
        let state = Arc::new(state);
        self.memo
            .lock()
            .expect("rank memo poisoned")
            .insert(key, state.clone());
        state
    }

    fn compute(
        &self,
        pres: &IdealPresentation,
        d: u32,
        need_pivots: bool,
    ) -> Result<Arc<SliceState>> {
        let key = Self::key(pres, d);
        if let Some(hit) = self.lookup(&key) {
            let usable = !(need_pivots && matches!(&*hit, SliceState::RankOnly { .. }));
            if usable {
                return Ok(hit);
            }
        }
        let slice = ideal_slice(pres, d, &self.cfg)?;
        let ncols = slice.columns.len();
        let nonzero = slice.rows.iter().filter(|r| !r.is_empty()).count();
        let lower = if ncols == 0 || nonzero == 0 {
            0
        } else {
            rank_mod(&slice.rows, ncols, self.cfg.modular_prime)
        };
        if lower == ncols && ncols > 0 {
            return Ok(self.store(key, SliceState::FullColumnRank { ncols }));
        }
        if !need_pivots && lower == nonzero {
            return Ok(self.store(key, SliceState::RankOnly { rank: lower }));
        }
        let col_index: HashMap<Monomial, u32> = slice
            .columns
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let echelon = eliminate_exact(&slice.rows, ncols);
        debug_assert!(echelon.rank() >= lower);
        Ok(self.store(
            key,
            SliceState::Echelonized {
                col_index: Arc::new(col_index),
                echelon: Arc::new(echelon),
            },
        ))
    }

    /// Exact rank of the degree-`d` slice of the ideal.
    pub fn rank(&self, pres: &IdealPresentation, d: u32) -> Result<usize> {
        Ok(self.compute(pres, d, false)?.rank())
    }

    /// Exact membership of a homogeneous polynomial in the ideal.
    pub fn contains(&self, pres: &IdealPresentation, p: &Polynomial) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        if p.alphabet().as_ref() != pres.alphabet().as_ref() {
            return Err(Error::AlphabetMismatch(
                "membership query over a different alphabet".to_string(),
            ));
        }
        let d = p
            .homogeneous_degree()?
            .expect("nonzero polynomial has a degree");
        let state = self.compute(pres, d, true)?;
        match &*state {
            SliceState::FullColumnRank { .. } => Ok(true),
            SliceState::RankOnly { .. } => Err(Error::Internal(
                "membership query served without pivots".to_string(),
            )),
            SliceState::Echelonized { col_index, echelon } => {
                let row = poly_to_row(p, col_index)?;
                Ok(echelon.reduces_to_zero(&row))
            }
        }
    }
}

/// Exact ideal membership through a shared context.
pub fn ideal_contains(pres: &IdealPresentation, p: &Polynomial, ctx: &RankContext) -> Result<bool> {
    ctx.contains(pres, p)
}

/// Result of a rank-method graded-dimension computation.
#[derive(Clone, Debug)]
pub struct QuotientDims {
    pub vector: BettiVector,
    /// Set when the requested bound exceeded the top degree and was clamped.
    pub clamped: bool,
}

/// Graded dimensions of the quotient ring by exact rank, degree by degree.
pub fn quotient_dims(
    family: Family,
    ell: u32,
    dmax: Option<u32>,
    ctx: &RankContext,
) -> Result<QuotientDims> {
    let pres = match family {
        Family::Complex => crate::ideals::complex_ideal(ell)?,
        Family::Real => crate::ideals::real_ideal(ell)?,
    };
    quotient_dims_over(&pres, dmax, ctx)
}

/// Graded dimensions for an already-built presentation (any ground set).
pub fn quotient_dims_over(
    pres: &IdealPresentation,
    dmax: Option<u32>,
    ctx: &RankContext,
) -> Result<QuotientDims> {
    let family = pres.family();
    let ell = pres.ground().size();
    let top = BettiVector::top_degree(family, ell);
    let bound = dmax.unwrap_or(top).min(top);
    let clamped = dmax.is_some_and(|d| d > top);
    let degrees: Vec<u32> = (0..=bound).collect();
    let compute_one = |&d: &u32| -> Result<u64> {
        let total = count_monomials(pres.alphabet(), d)
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("monomial count at degree {d}")))?;
        let rank = ctx.rank(pres, d)? as u64;
        Ok(total - rank)
    };
    let dims: Vec<u64> = if ctx.cfg.parallel {
        degrees
            .par_iter()
            .map(compute_one)
            .collect::<Result<Vec<u64>>>()?
    } else {
        degrees.iter().map(compute_one).collect::<Result<Vec<u64>>>()?
    };
    Ok(QuotientDims {
        vector: BettiVector {
            family,
            ell,
            dims,
            method: Method::Rank,
            truncated_at: if bound < top { Some(bound) } else { None },
        },
        clamped,
    })
}
