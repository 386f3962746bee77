//! Built-in lattices.

use super::LieLattice;
use crate::error::{Error, Result};
use crate::padic::{rat, Prime, Rational};

fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

fn labelled(l: LieLattice, labels: &[&str]) -> LieLattice {
    l.with_labels(labels.iter().map(|s| s.to_string()).collect())
        .expect("catalog labels match dimension")
}

pub fn abelian(p: Prime, dim: usize) -> LieLattice {
    LieLattice::new(format!("abelian{dim}"), p, dim, vec![]).expect("positive dimension")
}

/// `[x, y] = z`.
pub fn heisenberg(p: Prime) -> LieLattice {
    let l = LieLattice::new("heisenberg", p, 3, vec![(0, 1, v(&[0, 0, 1]))]).unwrap();
    labelled(l, &["x", "y", "z"])
}

/// `[x, y] = p z`. Powerful for odd `p` only.
pub fn heisenberg_powerful(p: Prime) -> LieLattice {
    let c = p.get() as i64;
    let l = LieLattice::new("heisenberg_powerful", p, 3, vec![(0, 1, v(&[0, 0, c]))]).unwrap();
    labelled(l, &["x", "y", "z"])
}

/// Basis `(e, h, f)`: `[h, e] = 2e`, `[h, f] = -2f`, `[e, f] = h`.
pub fn sl2(p: Prime) -> LieLattice {
    let l = LieLattice::new(
        "sl2",
        p,
        3,
        vec![(0, 1, v(&[-2, 0, 0])), (0, 2, v(&[0, 1, 0])), (1, 2, v(&[0, 0, -2]))],
    )
    .unwrap();
    labelled(l, &["e", "h", "f"])
}

/// `[e1, e2] = e3` and cyclic.
pub fn so3(p: Prime) -> LieLattice {
    let l = LieLattice::new(
        "so3",
        p,
        3,
        vec![(0, 1, v(&[0, 0, 1])), (0, 2, v(&[0, -1, 0])), (1, 2, v(&[1, 0, 0]))],
    )
    .unwrap();
    labelled(l, &["e1", "e2", "e3"])
}

/// Two commuting copies of [`sl2`], basis `(e, h, f, e', h', f')`.
pub fn sl2_plus_sl2(p: Prime) -> LieLattice {
    let one = sl2(p);
    let mut brackets = Vec::new();
    for (i, j, c) in one.brackets() {
        let mut lo = c.to_vec();
        lo.extend(v(&[0, 0, 0]));
        let mut hi = v(&[0, 0, 0]);
        hi.extend(c.iter().cloned());
        brackets.push((i, j, lo));
        brackets.push((i + 3, j + 3, hi));
    }
    let l = LieLattice::new("sl2_plus_sl2", p, 6, brackets).unwrap();
    labelled(l, &["e", "h", "f", "e'", "h'", "f'"])
}

pub const NAMES: &[&str] = &[
    "abelian",
    "heisenberg",
    "heisenberg_powerful",
    "sl2",
    "so3",
    "sl2_plus_sl2",
];

/// Looks up `name` or `name?dim=N` (the parameter only applies to `abelian`).
pub fn builtin(spec: &str, p: Prime) -> Result<LieLattice> {
    let (name, query) = match spec.split_once('?') {
        Some((n, q)) => (n, Some(q)),
        None => (spec, None),
    };
    let mut dim = None;
    if let Some(q) = query {
        for kv in q.split('&') {
            match kv.split_once('=') {
                Some(("dim", d)) => {
                    dim = Some(
                        d.parse::<usize>()
                            .map_err(|_| Error::InvalidInput(format!("bad dim parameter {d:?}")))?,
                    )
                }
                _ => return Err(Error::InvalidInput(format!("unknown catalog parameter {kv:?}"))),
            }
        }
    }
    if dim.is_some() && name != "abelian" {
        return Err(Error::InvalidInput(format!("{name} takes no dim parameter")));
    }
    Ok(match name {
        "abelian" => {
            let d = dim.unwrap_or(2);
            if d == 0 {
                return Err(Error::InvalidInput("dimension must be positive".into()));
            }
            abelian(p, d)
        }
        "heisenberg" => heisenberg(p),
        "heisenberg_powerful" => heisenberg_powerful(p),
        "sl2" => sl2(p),
        "so3" => so3(p),
        "sl2_plus_sl2" => sl2_plus_sl2(p),
        _ => return Err(Error::InvalidInput(format!("unknown built-in lattice {name:?}"))),
    })
}

/// Every built-in, with `abelian` at ranks 1 to 3.
pub fn all(p: Prime) -> Vec<LieLattice> {
    vec![
        abelian(p, 1),
        abelian(p, 2),
        abelian(p, 3),
        heisenberg(p),
        heisenberg_powerful(p),
        sl2(p),
        so3(p),
        sl2_plus_sl2(p),
    ]
}
