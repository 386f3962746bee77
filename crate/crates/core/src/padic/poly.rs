//! Univariate polynomials over `Q`, coefficients in ascending order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{vp, Prime, QMatrix, Rational};
use crate::error::{Error, Result};

/// Valuations of the roots of `poly` over `C_p`, with multiplicity, in
/// ascending order.
///
/// `poly` lists coefficients `c_0, c_1, ..., c_n`. The result reads off the
/// lower convex hull of `(i, v_p(c_i))`: a hull segment of slope `s` and
/// width `w` contributes `w` roots of valuation `-s`, so `x - p` gives `[1]`.
pub fn newton_slopes(poly: &[Rational], p: Prime) -> Result<Vec<Rational>> {
    let n = poly
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if poly[0].is_zero() {
        return Err(Error::InvalidInput("zero constant term".into()));
    }
    let points: Vec<(i64, i64)> = (0..=n)
        .filter(|&i| !poly[i].is_zero())
        .map(|i| (i as i64, vp(&poly[i], p).finite().expect("nonzero coefficient")))
        .collect();

    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            // keep b only if a -> b -> pt turns counter-clockwise
            let cross = (bx - ax) * (pt.1 - ay) - (by - ay) * (pt.0 - ax);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        let root_val = Rational::new(BigInt::from(y1 - y2), BigInt::from(x2 - x1));
        out.extend(std::iter::repeat_n(root_val, (x2 - x1) as usize));
    }
    out.sort();
    Ok(out)
}

fn eval(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

/// Distinct rational roots, ascending. `None` when the coefficients are too
/// large for the rational-root candidate search.
pub fn rational_roots(poly: &[Rational]) -> Option<Vec<Rational>> {
    let n = poly.iter().rposition(|c| !c.is_zero())?;
    let lcm = poly[..=n].iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = poly[..=n].iter().map(|c| (c * &lcm).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero())?;
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    if low < n {
        let nums = divisors(&ints[low])?;
        let dens = divisors(&ints[n])?;
        for a in &nums {
            for b in &dens {
                for sign in [-1i64, 1] {
                    let r = Rational::new(BigInt::from(sign) * BigInt::from(*a), BigInt::from(*b));
                    if eval(poly, &r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

/// Rational eigenvalues of a square matrix.
pub fn charpoly_roots_rational(m: &QMatrix) -> Option<Vec<Rational>> {
    rational_roots(&m.charpoly())
}
