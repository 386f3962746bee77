//! Structure constants reduced mod `q = p^e`, and isomorphism search between
//! two such reductions.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::LieLattice;
use crate::padic::{residue, Prime};

/// `c[i][j][k]` mod `q`, stored flat for all ordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Tensor {
    pub d: usize,
    pub q: u64,
    c: Vec<u64>,
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

impl Tensor {
    pub fn reduce(l: &LieLattice, e: u32) -> Result<Self> {
        let p = l.p();
        let q = p
            .pow(e)
            .to_u64()
            .filter(|&q| q < 1 << 62)
            .ok_or_else(|| Error::InvalidInput(format!("p^{e} is too large")))?;
        let d = l.dim();
        let t = l.structure_tensor();
        let mut c = Vec::with_capacity(d * d * d);
        for row in &t {
            for v in row {
                for x in v {
                    c.push(residue(x, p, e)?.to_u64().expect("residue below q"));
                }
            }
        }
        Ok(Tensor { d, q, c })
    }

    fn at(&self, i: usize, j: usize, k: usize) -> u64 {
        self.c[(i * self.d + j) * self.d + k]
    }
}

/// Component `(i, j, k)` of `g[a_i, a_j]_M - [g a_i, g a_j]_N` mod `q`, with
/// `g` row-major and mapping `M`-coordinates to `N`-coordinates.
fn defect_at(g: &[u64], m: &Tensor, n: &Tensor, i: usize, j: usize, k: usize) -> u64 {
    let (d, q) = (m.d, m.q);
    let mut lhs = 0u64;
    for r in 0..d {
        lhs = (lhs + mulmod(g[k * d + r], m.at(i, j, r), q)) % q;
    }
    let mut rhs = 0u64;
    for a in 0..d {
        let ga = g[a * d + i];
        if ga == 0 {
            continue;
        }
        for b in 0..d {
            let gb = g[b * d + j];
            if gb == 0 {
                continue;
            }
            rhs = (rhs + mulmod(mulmod(ga, gb, q), n.at(a, b, k), q)) % q;
        }
    }
    (lhs + q - rhs) % q
}

pub(crate) fn is_lie_map(g: &[u64], m: &Tensor, n: &Tensor) -> bool {
    let d = m.d;
    (0..d).all(|i| (i + 1..d).all(|j| (0..d).all(|k| defect_at(g, m, n, i, j, k) == 0)))
}

/// Determinant mod a prime by elimination.
pub(crate) fn det_mod_p(g: &[u64], d: usize, p: u64) -> u64 {
    let mut a: Vec<u64> = g.iter().map(|x| x % p).collect();
    let mut det = 1u64;
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| a[r * d + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..d {
                a.swap(piv * d + c, col * d + c);
            }
            det = (p - det) % p;
        }
        let pv = a[col * d + col];
        det = mulmod(det, pv, p);
        let inv = inv_mod_p(pv, p);
        for r in col + 1..d {
            let f = mulmod(a[r * d + col], inv, p);
            if f == 0 {
                continue;
            }
            for c in col..d {
                let sub = mulmod(f, a[col * d + c], p);
                a[r * d + c] = (a[r * d + c] + p - sub) % p;
            }
        }
    }
    det
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let mut r = 1u64;
    let mut b = a % p;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        k >>= 1;
    }
    r
}

/// `|GL_d(F_p)|`, saturating.
pub(crate) fn gl_order(d: usize, p: u64) -> u128 {
    let pd = (p as u128).saturating_pow(d as u32);
    (0..d as u32).fold(1u128, |acc, i| acc.saturating_mul(pd - (p as u128).pow(i)))
}

/// Calls `visit` on every `g ∈ GL_d(F_p)` that is a Lie map `M → N` mod `p`,
/// in lexicographic order of the row-major entries, until it returns `true`.
/// Both tensors must be reduced mod `p`.
pub(crate) fn scan_mod_p(m: &Tensor, n: &Tensor, mut visit: impl FnMut(&[u64]) -> bool) {
    let (d, p) = (m.d, m.q);
    let mut g = vec![0u64; d * d];
    loop {
        if is_lie_map(&g, m, n) && det_mod_p(&g, d, p) != 0 && visit(&g) {
            return;
        }
        let mut pos = d * d;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            g[pos] += 1;
            if g[pos] < p {
                break;
            }
            g[pos] = 0;
        }
    }
}

/// Solves `a x = b` over `F_p` (`a` has `cols` columns), free variables zero.
fn solve_mod_p(mut a: Vec<Vec<u64>>, mut b: Vec<u64>, cols: usize, p: u64) -> Option<Vec<u64>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        b.swap(r, piv);
        let inv = inv_mod_p(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        b[r] = mulmod(b[r], inv, p);
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for cc in 0..cols {
                    let sub = mulmod(f, a[r][cc], p);
                    a[i][cc] = (a[i][cc] + p - sub) % p;
                }
                b[i] = (b[i] + p - mulmod(f, b[r], p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = b[row];
    }
    Some(x)
}

/// Lifts a Lie map mod `p` to one mod `p^e` (the moduli of `m` and `n`) by
/// successive linear corrections `g + p^t h`, free choices set to zero.
pub(crate) fn hensel_lift(g0: &[u64], m: &Tensor, n: &Tensor, p: Prime) -> Option<Vec<u64>> {
    let (d, q) = (m.d, m.q);
    let p = p.get();
    let mut g = g0.to_vec();
    let mut pt = p;
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    while pt < q {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for &(i, j) in &pairs {
            for k in 0..d {
                let f = defect_at(&g, m, n, i, j, k);
                if !f.is_multiple_of(pt) {
                    return None;
                }
                let f = (f / pt) % p;
                // derivative of the defect in direction h, entry h[a][b] at a*d+b
                let mut row = vec![0u64; d * d];
                for r in 0..d {
                    row[k * d + r] = (row[k * d + r] + m.at(i, j, r)) % p;
                }
                for a in 0..d {
                    for b in 0..d {
                        let c = n.at(a, b, k) % p;
                        if c == 0 {
                            continue;
                        }
                        // h[a][i] g[b][j] + g[a][i] h[b][j]
                        let t1 = mulmod(g[b * d + j] % p, c, p);
                        row[a * d + i] = (row[a * d + i] + p - t1) % p;
                        let t2 = mulmod(g[a * d + i] % p, c, p);
                        row[b * d + j] = (row[b * d + j] + p - t2) % p;
                    }
                }
                rows.push(row);
                rhs.push((p - f) % p);
            }
        }
        let h = if rows.is_empty() {
            vec![0; d * d]
        } else {
            solve_mod_p(rows, rhs, d * d, p)?
        };
        for (x, hx) in g.iter_mut().zip(&h) {
            *x = (*x + mulmod(*hx, pt, q)) % q;
        }
        pt *= p;
    }
    is_lie_map(&g, m, n).then_some(g)
}

/// Signed permutation matrices, identity first.
pub(crate) fn signed_permutations(d: usize) -> Vec<Vec<i64>> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..d {
        perms = perms
            .into_iter()
            .flat_map(|perm| {
                let free: Vec<usize> = (0..d).filter(|x| !perm.contains(x)).collect();
                free.into_iter().map(move |x| {
                    let mut next = perm.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for perm in &perms {
        for signs in 0..(1u32 << d) {
            let mut g = vec![0i64; d * d];
            for (col, &row) in perm.iter().enumerate() {
                g[row * d + col] = if signs >> col & 1 == 1 { -1 } else { 1 };
            }
            out.push(g);
        }
    }
    out
}

/// Entries of a residue matrix lifted to `(-q/2, q/2]`.
pub(crate) fn symmetric_lift(g: &[u64], q: u64) -> Vec<i64> {
    g.iter()
        .map(|&x| if x > q / 2 { x as i64 - q as i64 } else { x as i64 })
        .collect()
}

pub(crate) fn reduce_signed(g: &[i64], q: u64) -> Vec<u64> {
    g.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect()
}
