//! Integer polynomials and truncated power series in `t`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Polynomial in `t` with integer coefficients, lowest degree first, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntPoly(Vec<i128>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn one() -> Self {
        Self(vec![1])
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Self(c)
    }

    /// `Σ_j t^{degrees[j]}`.
    pub fn sum_of_powers(degrees: &[u32]) -> Self {
        let top = degrees.iter().copied().max().unwrap_or(0) as usize;
        let mut c = vec![0; top + 1];
        for &d in degrees {
            c[d as usize] += 1;
        }
        Self::new(c)
    }

    /// `1 − t^k`.
    pub fn one_minus_power(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[0] += 1;
        c[k] -= 1;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> i128 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return Self(Vec::new());
        }
        let mut c = vec![0; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn eval(&self, t: i128) -> i128 {
        self.0.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// Value of the formal derivative at `t`.
    pub fn derivative_at(&self, t: i128) -> i128 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0, |acc, (i, &c)| acc * t + i as i128 * c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "t")?,
                (1, m) => write!(f, "{m}*t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, m) => write!(f, "{m}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `numerator / denominator` expanded as a power series to degree `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesQuotient {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
    pub truncation: u32,
    pub coefficients: Vec<i128>,
}

/// Power-series division; the denominator's constant term must be `±1`.
pub fn series_expand(
    numerator: &IntPoly,
    denominator: &IntPoly,
    max_degree: u32,
) -> Result<SeriesQuotient> {
    let c0 = denominator.coeff(0);
    if c0 != 1 && c0 != -1 {
        return Err(Error::BadDenominator);
    }
    let n = max_degree as usize + 1;
    let mut q = vec![0i128; n];
    for k in 0..n {
        let mut acc = numerator.coeff(k);
        for j in 1..=k.min(denominator.coeffs().len().saturating_sub(1)) {
            acc -= denominator.coeff(j) * q[k - j];
        }
        q[k] = acc * c0;
    }
    Ok(SeriesQuotient {
        numerator: numerator.clone(),
        denominator: denominator.clone(),
        truncation: max_degree,
        coefficients: q,
    })
}

/// `∏_i (1 − t^{d_i})`.
pub fn hilbert_denominator(degrees: &[u32]) -> IntPoly {
    degrees.iter().fold(IntPoly::one(), |acc, &d| {
        acc.mul(&IntPoly::one_minus_power(d as usize))
    })
}

/// Coefficients of `H(t) · ∏(1 − t^{d_i})` up to `D`, where `H` is given by
/// its first `D + 1` coefficients `dims`.
pub fn quotient_numerator(
    dims: &[usize],
    hsop_degrees: &[u32],
    max_degree: u32,
) -> Result<IntPoly> {
    let den = hilbert_denominator(hsop_degrees);
    let n = (max_degree as usize + 1).min(dims.len());
    let mut c = vec![0i128; n];
    for (k, slot) in c.iter_mut().enumerate() {
        *slot = (0..=k).map(|j| dims[j] as i128 * den.coeff(k - j)).sum();
    }
    if let Some((degree, &value)) = c.iter().enumerate().find(|(_, &v)| v < 0) {
        return Err(Error::NegativeCoefficient { degree, value });
    }
    Ok(IntPoly::new(c))
}

/// `r = N(1)` (module rank) and `s = N'(1)` (sum of basis degrees).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SInvariant {
    pub r: i128,
    pub s: i128,
}

pub fn s_invariant(numerator: &IntPoly) -> SInvariant {
    SInvariant {
        r: numerator.eval(1),
        s: numerator.derivative_at(1),
    }
}
