//! Closed recursions for the Betti numbers of both families, independent of
//! any ring computation. Everything is evaluated in arbitrary precision; the
//! halved convolution in the complex recursion is checked to stay integral.

use crate::strata::Family;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Recursion,
    Rank,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Recursion => "recursion",
            Method::Rank => "rank",
        }
    }
}

/// Graded-dimension sequence for one `(family, ell)`, indexed by
/// cohomological degree from 0 through the top degree (or a truncation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiVector {
    pub family: Family,
    pub ell: u32,
    pub dims: Vec<u64>,
    pub method: Method,
    pub truncated_at: Option<u32>,
}

impl BettiVector {
    /// Top cohomological degree of the graded ring.
    pub fn top_degree(family: Family, ell: u32) -> u32 {
        match family {
            Family::Complex => 2 * ell.saturating_sub(3),
            Family::Real => 2 * ell - 3,
        }
    }

    /// The vector as displayed: all degrees for the real family, even degrees
    /// only for the complex family (odd ones vanish identically).
    pub fn display_dims(&self) -> Vec<u64> {
        match self.family {
            Family::Real => self.dims.clone(),
            Family::Complex => self.dims.iter().copied().step_by(2).collect(),
        }
    }
}

fn to_u64(x: &BigUint, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} exceeds 64 bits")))
}

/// Triangle of complex Betti numbers `h[level][p]` for levels `3..=max`,
/// indexed by homological degree `p` in `0..=2(level-3)`.
fn complex_table(max: u32) -> Result<Vec<Vec<BigUint>>> {
    let mut table: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    let h = |table: &Vec<Vec<BigUint>>, level: u32, p: i64| -> BigUint {
        if level < 3 || p < 0 {
            return BigUint::zero();
        }
        table
            .get((level - 3) as usize)
            .and_then(|row| row.get(p as usize))
            .cloned()
            .unwrap_or_default()
    };
    for level in 3..max {
        let top = 2 * (level + 1 - 3) as usize;
        let mut next = Vec::with_capacity(top + 1);
        for p in 0..=top as i64 {
            let mut val = h(&table, level, p) + h(&table, level, p - 2);
            let mut conv = BigUint::zero();
            for j in 2..=level.saturating_sub(2) {
                let coeff = binomial(BigUint::from(level), BigUint::from(j));
                let mut inner = BigUint::zero();
                for q in 0..=(p - 2).max(-1) {
                    inner += h(&table, j + 1, q) * h(&table, level - j + 1, p - 2 - q);
                }
                conv += coeff * inner;
            }
            if (&conv % 2u32) != BigUint::zero() {
                return Err(Error::Internal(format!(
                    "odd convolution at level {} degree {p}",
                    level + 1
                )));
            }
            val += conv >> 1;
            next.push(val);
        }
        table.push(next);
    }
    Ok(table)
}

/// Triangle of real Betti numbers `h0[ell][p]` for `ell` in `2..=max`,
/// indexed by degree `p` in `0..=2*ell-3`. Consumes the complex triangle.
fn real_table(max: u32) -> Result<Vec<Vec<BigUint>>> {
    let complex = complex_table(max.max(3))?;
    let hc = |level: u32, p: i64| -> BigUint {
        if level < 3 || p < 0 {
            return BigUint::zero();
        }
        complex
            .get((level - 3) as usize)
            .and_then(|row| row.get(p as usize))
            .cloned()
            .unwrap_or_default()
    };
    let mut table: Vec<Vec<BigUint>> = vec![vec![BigUint::one(), BigUint::one()]];
    let h0 = |table: &Vec<Vec<BigUint>>, ell: u32, p: i64| -> BigUint {
        if ell < 2 || p < 0 {
            return BigUint::zero();
        }
        table
            .get((ell - 2) as usize)
            .and_then(|row| row.get(p as usize))
            .cloned()
            .unwrap_or_default()
    };
    for ell in 2..max {
        let top = (2 * (ell + 1) - 3) as usize;
        let mut next = Vec::with_capacity(top + 1);
        for p in 0..=top as i64 {
            let mut val = h0(&table, ell, p) + h0(&table, ell, p - 2);
            val += (BigUint::one() << (ell - 1)) * (hc(ell + 1, p - 1) + hc(ell + 1, p - 2));
            for i in 1..=ell.saturating_sub(2) {
                let coeff = (BigUint::one() << (ell - i)) * binomial(BigUint::from(ell), BigUint::from(i));
                let mut inner = BigUint::zero();
                for q in 0..=(p - 2).max(-1) {
                    inner += h0(&table, i + 1, q) * hc(ell - i + 1, p - 2 - q);
                }
                val += coeff * inner;
            }
            next.push(val);
        }
        table.push(next);
    }
    Ok(table)
}

/// Betti numbers of the complex moduli space at level `ell` by recursion.
pub fn complex_betti(ell: u32) -> Result<BettiVector> {
    if ell < 3 {
        return Err(Error::InvalidArgument(format!(
            "complex Betti numbers require ell ≥ 3, got {ell}"
        )));
    }
    let table = complex_table(ell)?;
    let dims = table[(ell - 3) as usize]
        .iter()
        .map(|x| to_u64(x, "betti number"))
        .collect::<Result<Vec<u64>>>()?;
    Ok(BettiVector {
        family: Family::Complex,
        ell,
        dims,
        method: Method::Recursion,
        truncated_at: None,
    })
}

/// Betti numbers of the real moduli space at level `ell` by recursion.
pub fn real_betti(ell: u32) -> Result<BettiVector> {
    if ell < 2 {
        return Err(Error::InvalidArgument(format!(
            "real Betti numbers require ell ≥ 2, got {ell}"
        )));
    }
    let table = real_table(ell)?;
    let dims = table[(ell - 2) as usize]
        .iter()
        .map(|x| to_u64(x, "betti number"))
        .collect::<Result<Vec<u64>>>()?;
    Ok(BettiVector {
        family: Family::Real,
        ell,
        dims,
        method: Method::Recursion,
        truncated_at: None,
    })
}

/// Closed form for the first real Betti number.
pub fn real_h1_closed_form(ell: u32) -> Result<u64> {
    if ell < 2 {
        return Err(Error::InvalidArgument(format!(
            "closed form requires ell ≥ 2, got {ell}"
        )));
    }
    if ell > 64 {
        return Err(Error::Overflow(format!("2^{} - 1 exceeds 64 bits", ell - 1)));
    }
    Ok((1u64 << (ell - 1)) - 1)
}
