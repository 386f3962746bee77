//! Independent reference computations and automorphism families shared by
//! the integration tests. Nothing here calls into the library's linear
//! algebra.

#![allow(dead_code)]

use lielat_core::{LieLattice, QMatrix, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type Rows = Vec<Vec<Rational>>;

pub fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn fr(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn vp_big(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

/// `v_p(x)` by repeated division; `None` for zero.
pub fn val(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_big(x.numer(), p) - vp_big(x.denom(), p))
}

pub fn p_integral(x: &Rational, p: u64) -> bool {
    val(x, p).is_none_or(|v| v >= 0)
}

/// `p^k` as a rational, any sign of `k`.
pub fn ppow(p: u64, k: i64) -> Rational {
    let base = r(p as i64);
    let mut out = Rational::one();
    for _ in 0..k.abs() {
        out *= &base;
    }
    if k < 0 {
        out.recip()
    } else {
        out
    }
}

/// Laplace expansion along the first row.
pub fn det(m: &Rows) -> Rational {
    let n = m.len();
    match n {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut sum = Rational::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Rows = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][c] * det(&minor);
                if c % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            sum
        }
    }
}

pub fn rows(m: &QMatrix) -> Rows {
    m.to_rows()
}

pub fn from_rows(m: &Rows) -> QMatrix {
    QMatrix::from_rows(m.clone()).unwrap()
}

pub fn matmul(a: &Rows, b: &Rows) -> Rows {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Rational::zero(), |s, t| s + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Rows) -> Rows {
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { r(1) } else { r(0) }).collect())
        .collect()
}

/// Dense `c[i][j][k]` read straight from the bracket table.
pub fn tensor(l: &LieLattice) -> Vec<Vec<Vec<Rational>>> {
    let d = l.dim();
    let mut c = vec![vec![vec![r(0); d]; d]; d];
    for (i, j, coeffs) in l.brackets() {
        for k in 0..d {
            c[i][j][k] = coeffs[k].clone();
            c[j][i][k] = -coeffs[k].clone();
        }
    }
    c
}

pub fn bracket(c: &[Vec<Vec<Rational>>], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let d = x.len();
    let mut out = vec![r(0); d];
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let xy = &x[i] * &y[j];
            for k in 0..d {
                out[k] += &xy * &c[i][j][k];
            }
        }
    }
    out
}

fn col(m: &Rows, j: usize) -> Vec<Rational> {
    m.iter().map(|row| row[j].clone()).collect()
}

fn apply(m: &Rows, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(r(0), |s, (a, b)| s + a * b))
        .collect()
}

/// `[s a_i, s a_j] = s [a_i, a_j]` on all pairs, and `det s != 0`.
pub fn is_automorphism(l: &LieLattice, s: &Rows) -> bool {
    let c = tensor(l);
    let d = l.dim();
    let unit = |i: usize| -> Vec<Rational> { (0..d).map(|k| if k == i { r(1) } else { r(0) }).collect() };
    !det(s).is_zero()
        && (0..d)
            .all(|i| (0..d).all(|j| bracket(&c, &col(s, i), &col(s, j)) == apply(s, &bracket(&c, &unit(i), &unit(j)))))
}

/// `A_ij = tr(ad a_i ad a_j) = Σ_{k,m} c[i][m][k] c[j][k][m]`.
pub fn killing(l: &LieLattice) -> Rows {
    let c = tensor(l);
    let d = l.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut s = r(0);
                    for k in 0..d {
                        for m in 0..d {
                            s += &c[i][m][k] * &c[j][k][m];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Whether the columns of `n` span the same `Z_(p)`-module as those of `m`.
pub fn same_lattice(m: &Rows, n: &Rows, p: u64) -> bool {
    let (dm, dn) = (det(m), det(n));
    if dm.is_zero() || dn.is_zero() || val(&dm, p) != val(&dn, p) {
        return false;
    }
    // n = m X with X p-integral and |det X| = 1
    let x = solve(m, n);
    x.iter().flatten().all(|v| p_integral(v, p))
}

/// `m⁻¹ n` by Cramer's rule.
pub fn solve(m: &Rows, n: &Rows) -> Rows {
    let d = m.len();
    let dm = det(m);
    let mut out = vec![vec![r(0); n[0].len()]; d];
    for c in 0..n[0].len() {
        for i in 0..d {
            let mut mi = m.clone();
            for row in 0..d {
                mi[row][i] = n[row][c].clone();
            }
            out[i][c] = det(&mi) / &dm;
        }
    }
    out
}

pub fn random_unit(rng: &mut impl Rng, p: u64) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-12..=12);
        let d: i64 = rng.gen_range(1..=9);
        if n % p as i64 != 0 && d % p as i64 != 0 {
            return fr(n, d);
        }
    }
}

/// A `p`-integral rational, often with a `p`-power factor.
pub fn random_integral(rng: &mut impl Rng, p: u64) -> Rational {
    let n: i64 = rng.gen_range(-9..=9);
    let k: i64 = rng.gen_range(0..=2);
    let mut d: i64 = rng.gen_range(1..=7);
    while d % p as i64 == 0 {
        d += 1;
    }
    fr(n, d) * ppow(p, k)
}

pub fn random_full_rank(rng: &mut impl Rng, p: u64, d: usize) -> Rows {
    loop {
        let m: Rows = (0..d)
            .map(|_| (0..d).map(|_| random_integral(rng, p)).collect())
            .collect();
        if !det(&m).is_zero() {
            return m;
        }
    }
}

pub fn scale(m: &Rows, k: &Rational) -> Rows {
    m.iter().map(|row| row.iter().map(|x| x * k).collect()).collect()
}

/// Basis `(e, h, f)`: `e ↔ f`, `h ↦ -h`.
pub fn sl2_involution() -> Rows {
    vec![vec![r(0), r(0), r(1)], vec![r(0), r(-1), r(0)], vec![r(1), r(0), r(0)]]
}

/// `exp(t ad e)`: `e ↦ e`, `h ↦ h - 2te`, `f ↦ f + th - t²e`.
pub fn sl2_exp_e(t: &Rational) -> Rows {
    let t2 = t * t;
    vec![
        vec![r(1), -(r(2) * t), -t2],
        vec![r(0), r(1), t.clone()],
        vec![r(0), r(0), r(1)],
    ]
}

/// `exp(t ad f)`: `e ↦ e - th - t²f`, `h ↦ h + 2tf`, `f ↦ f`.
pub fn sl2_exp_f(t: &Rational) -> Rows {
    let t2 = t * t;
    vec![
        vec![r(1), r(0), r(0)],
        vec![-t.clone(), r(1), r(0)],
        vec![-t2, r(2) * t, r(1)],
    ]
}

pub fn sl2_torus(u: &Rational) -> Rows {
    vec![
        vec![u.clone(), r(0), r(0)],
        vec![r(0), r(1), r(0)],
        vec![r(0), r(0), u.recip()],
    ]
}

/// Cayley rotation `I + 2(A + A²)/(1 + a² + b² + c²)` for the skew matrix of
/// `(a, b, c)`.
pub fn so3_cayley(a: i64, b: i64, c: i64) -> Rows {
    let skew = vec![
        vec![r(0), r(-c), r(b)],
        vec![r(c), r(0), r(-a)],
        vec![r(-b), r(a), r(0)],
    ];
    let sq = matmul(&skew, &skew);
    let k = fr(2, 1 + a * a + b * b + c * c);
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| &identity(3)[i][j] + &k * (&skew[i][j] + &sq[i][j]))
                .collect()
        })
        .collect()
}

/// Signed permutation matrices of determinant one.
pub fn so3_signed_rotations() -> Vec<Rows> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for perm in perms {
        for signs in 0..8 {
            let mut m = vec![vec![r(0); 3]; 3];
            for (c, &row) in perm.iter().enumerate() {
                m[row][c] = if signs >> c & 1 == 1 { r(-1) } else { r(1) };
            }
            if det(&m) == r(1) {
                out.push(m);
            }
        }
    }
    out
}

/// Product of one to four random factors from the `sl2` families, all
/// `p`-integral with `p`-integral inverse.
pub fn random_sl2_automorphism(rng: &mut impl Rng, p: u64) -> Rows {
    let mut s = identity(3);
    for _ in 0..rng.gen_range(1..=4) {
        let f = match rng.gen_range(0..4) {
            0 => sl2_involution(),
            1 => sl2_exp_e(&random_integral(rng, p)),
            2 => sl2_exp_f(&random_integral(rng, p)),
            _ => sl2_torus(&random_unit(rng, p)),
        };
        s = matmul(&s, &f);
    }
    s
}

pub fn random_so3_automorphism(rng: &mut impl Rng, p: u64) -> Rows {
    let rotations = so3_signed_rotations();
    let mut s = identity(3);
    for _ in 0..rng.gen_range(1..=3) {
        let f = if rng.gen_bool(0.5) {
            rotations[rng.gen_range(0..rotations.len())].clone()
        } else {
            loop {
                let (a, b, c) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-4..=4));
                if (1 + a * a + b * b + c * c) % p as i64 != 0 {
                    break so3_cayley(a, b, c);
                }
            }
        };
        s = matmul(&s, &f);
    }
    s
}

/// Integral matrix with unit determinant.
pub fn random_unimodular(rng: &mut impl Rng, p: u64, d: usize) -> Rows {
    loop {
        let m: Rows = (0..d)
            .map(|_| (0..d).map(|_| r(rng.gen_range(-3..=3))).collect())
            .collect();
        if val(&det(&m), p) == Some(0) {
            return m;
        }
    }
}
