//! Smith and Hermite normal forms over the local ring `Z_(p)`.
//!
//! Every nonzero element of `Z_(p)` is `p^k * unit`, so elimination only
//! needs the pivot of least valuation; the quotients it divides by are
//! always p-integral.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{residue, vp, PValuation, Prime, QMatrix, Rational};
use crate::error::{Error, Result};

/// Exponents `k_1 <= ... <= k_r` of the p-power elementary divisors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SmithProfile {
    pub exponents: Vec<u64>,
    pub total: u64,
}

impl SmithProfile {
    fn from_exponents(exponents: Vec<u64>) -> Self {
        let total = exponents.iter().sum();
        SmithProfile { exponents, total }
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

fn finite(v: PValuation) -> i64 {
    v.finite().expect("nonzero entry has finite valuation")
}

fn check_integral(m: &QMatrix, p: Prime) -> Result<()> {
    match m.first_non_integral(p) {
        Some((row, col)) => Err(Error::NotPIntegral { row, col }),
        None => Ok(()),
    }
}

/// Elementary-divisor exponents of a p-integral matrix of any shape and
/// rank. The profile's length is the rank over `Q_p`.
pub fn smith_profile(m: &QMatrix, p: Prime) -> Result<SmithProfile> {
    check_integral(m, p)?;
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut exps = Vec::new();
    for k in 0..rows.min(cols) {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let v = finite(vp(&a[(i, j)], p));
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap_rows(i, k);
        a.swap_cols(j, k);
        let piv = a[(k, k)].clone();
        for i in k + 1..rows {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &piv;
            for j in k..cols {
                if !a[(k, j)].is_zero() {
                    let x = &a[(i, j)] - &f * &a[(k, j)];
                    a[(i, j)] = x;
                }
            }
        }
        // the row k entries right of the pivot only touch row k itself once
        // the column below the pivot is clear
        for j in k + 1..cols {
            a[(k, j)] = Rational::zero();
        }
        exps.push(v as u64);
    }
    Ok(SmithProfile::from_exponents(exps))
}

/// Smith profile of a square, full-rank, p-integral matrix.
/// `total` equals `v_p(det m)`.
pub fn smith_p(m: &QMatrix, p: Prime) -> Result<SmithProfile> {
    if !m.is_square() {
        return Err(Error::InvalidInput("smith_p needs a square matrix".into()));
    }
    let prof = smith_profile(m, p)?;
    if prof.rank() < m.rows() {
        return Err(Error::SingularMatrix);
    }
    Ok(prof)
}

/// Canonical basis of the `Z_(p)`-lattice spanned by the columns of `b`.
///
/// Column operations give a lower-triangular `d x d` matrix with pivots
/// `p^k` on the diagonal and each entry left of a pivot reduced to an integer
/// in `[0, p^k)`. Two generator matrices span the same lattice iff their
/// Hermite forms are equal. `b` must have full row rank.
pub fn hermite_p(b: &QMatrix, p: Prime) -> Result<QMatrix> {
    check_integral(b, p)?;
    let d = b.rows();
    let n = b.cols();
    let mut a = b.clone();
    let mut pivots = Vec::with_capacity(d);
    for i in 0..d {
        let mut best: Option<(i64, usize)> = None;
        for j in i..n {
            if a[(i, j)].is_zero() {
                continue;
            }
            let v = finite(vp(&a[(i, j)], p));
            if best.is_none_or(|(bv, _)| v < bv) {
                best = Some((v, j));
            }
        }
        let Some((k, j)) = best else {
            return Err(Error::SingularMatrix);
        };
        a.swap_cols(i, j);
        let pk = p.rational_pow(k);
        let unit_inv = &pk / &a[(i, i)];
        for r in i..d {
            let x = &a[(r, i)] * &unit_inv;
            a[(r, i)] = x;
        }
        for j in i + 1..n {
            if a[(i, j)].is_zero() {
                continue;
            }
            let f = &a[(i, j)] / &pk;
            for r in i..d {
                if !a[(r, i)].is_zero() {
                    let x = &a[(r, j)] - &f * &a[(r, i)];
                    a[(r, j)] = x;
                }
            }
        }
        pivots.push(k as u32);
    }
    let mut h = QMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            h[(r, c)] = a[(r, c)].clone();
        }
    }
    for i in 0..d {
        let pk = p.rational_pow(pivots[i] as i64);
        for j in 0..i {
            if h[(i, j)].is_zero() {
                continue;
            }
            let r = Rational::from_integer(residue(&h[(i, j)], p, pivots[i])?);
            let q = (&h[(i, j)] - &r) / &pk;
            if q.is_zero() {
                continue;
            }
            for row in i..d {
                if !h[(row, i)].is_zero() {
                    let x = &h[(row, j)] - &q * &h[(row, i)];
                    h[(row, j)] = x;
                }
            }
        }
    }
    debug_assert!((0..d).all(|i| h[(i, i)] == p.rational_pow(pivots[i] as i64)));
    debug_assert!((0..d).all(|i| (i + 1..d).all(|j| h[(i, j)].is_zero())));
    Ok(h)
}
