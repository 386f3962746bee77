//! Series, derivations and the centroid. All ranks are over `Q_p`, computed
//! exactly over `Q`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::LieLattice;
use crate::error::Result;
use crate::padic::{charpoly_roots_rational, QMatrix, Rational, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesProfile {
    /// Ranks of `L = L^1 ⊇ L^2 = [L, L] ⊇ ...` up to the first repeat.
    pub lower_central_ranks: Vec<usize>,
    /// Ranks of `L ⊇ [L, L] ⊇ [[L, L], [L, L]] ⊇ ...` up to the first repeat.
    pub derived_ranks: Vec<usize>,
    pub nilpotency_class: Option<usize>,
    pub solvable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationAlgebra {
    pub basis: Vec<QMatrix>,
    pub dim: usize,
    /// Whether the descending central chain of `Der(L)` reaches zero.
    pub nilpotent: bool,
    /// Nonzero terms of that chain (the class when nilpotent), or the
    /// number of steps taken before it stabilised.
    pub chain_length: usize,
    /// Whether every basis derivation is a nilpotent endomorphism.
    pub nilpotent_operators: bool,
}

impl DerivationAlgebra {
    /// `Der(L)` is a nilpotent Lie algebra of nilpotent endomorphisms. Then
    /// the identity component of `Aut(L)` is unipotent, every automorphism
    /// has root-of-unity eigenvalues, and `|det s|_p = 1` for all of them.
    pub fn forces_unit_determinants(&self) -> bool {
        self.nilpotent && self.nilpotent_operators
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub semisimple: bool,
    pub centroid_dim: usize,
    pub simple: Verdict,
    pub just_infinite: Verdict,
    /// Dimension of a proper nonzero ideal cut out by a centroid eigenspace,
    /// when one was found.
    pub proper_ideal_dim: Option<usize>,
}

fn flatten(m: &QMatrix) -> Vec<Rational> {
    m.entries().to_vec()
}

fn unflatten(v: &[Rational], d: usize) -> QMatrix {
    QMatrix::new(d, d, v.to_vec()).expect("d*d entries")
}

fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    &(a * b) - &(b * a)
}

impl LieLattice {
    /// Span of `[x, y]` over basis vectors of `a` and `b`.
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = Subspace::new(self.dim);
        for x in a.basis() {
            for y in b.basis() {
                out.insert(self.bracket(x, y));
                if out.rank() == self.dim {
                    return out;
                }
            }
        }
        out
    }

    /// `L^1 = L, L^{k+1} = [L, L^k]`, stopping at the first repeat.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        let mut terms = vec![full.clone()];
        loop {
            let last = terms.last().expect("nonempty");
            if last.rank() == 0 {
                break;
            }
            let next = self.bracket_span(&full, last);
            if next.rank() == last.rank() {
                break;
            }
            terms.push(next);
        }
        terms
    }

    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut terms = vec![Subspace::full(self.dim)];
        loop {
            let last = terms.last().expect("nonempty");
            if last.rank() == 0 {
                break;
            }
            let next = self.bracket_span(last, last);
            if next.rank() == last.rank() {
                break;
            }
            terms.push(next);
        }
        terms
    }

    pub fn series_profile(&self) -> SeriesProfile {
        let lower: Vec<usize> = self.lower_central_series().iter().map(Subspace::rank).collect();
        let derived: Vec<usize> = self.derived_series().iter().map(Subspace::rank).collect();
        let nilpotency_class = (lower.last() == Some(&0)).then(|| lower.len() - 1);
        let solvable = derived.last() == Some(&0);
        SeriesProfile {
            lower_central_ranks: lower,
            derived_ranks: derived,
            nilpotency_class,
            solvable,
        }
    }

    /// Kernel of the Leibniz system `D[x,y] = [Dx,y] + [x,Dy]` on basis
    /// pairs, with the unknown entry `D[r][c]` at index `r * d + c`.
    pub fn derivations(&self) -> DerivationAlgebra {
        let d = self.dim;
        let c = self.structure_tensor();
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
        let basis: Vec<QMatrix> = if pairs.is_empty() {
            (0..d * d)
                .map(|k| {
                    let mut m = QMatrix::zeros(d, d);
                    m[(k / d, k % d)] = Rational::one();
                    m
                })
                .collect()
        } else {
            let mut sys = QMatrix::zeros(pairs.len() * d, d * d);
            for (row_block, &(i, j)) in pairs.iter().enumerate() {
                for k in 0..d {
                    let row = row_block * d + k;
                    for m in 0..d {
                        sys[(row, k * d + m)] += &c[i][j][m];
                        sys[(row, m * d + i)] -= &c[m][j][k];
                        sys[(row, m * d + j)] -= &c[i][m][k];
                    }
                }
            }
            sys.kernel().iter().map(|v| unflatten(v, d)).collect()
        };

        let (nilpotent, chain_length) = lie_nilpotency(&basis, d);
        let nilpotent_operators = basis.iter().all(QMatrix::is_nilpotent);
        DerivationAlgebra {
            dim: basis.len(),
            basis,
            nilpotent,
            chain_length,
            nilpotent_operators,
        }
    }

    /// Endomorphisms commuting with every `ad(a_i)`.
    pub fn centroid(&self) -> Vec<QMatrix> {
        let d = self.dim;
        let ads = self.ad_matrices();
        let mut sys = QMatrix::zeros(d * d * d, d * d);
        for (n, ad) in ads.iter().enumerate() {
            for r in 0..d {
                for col in 0..d {
                    let row = n * d * d + r * d + col;
                    for m in 0..d {
                        // (C ad)[r][col] - (ad C)[r][col]
                        sys[(row, r * d + m)] += &ad[(m, col)];
                        sys[(row, m * d + col)] -= &ad[(r, m)];
                    }
                }
            }
        }
        sys.kernel().iter().map(|v| unflatten(v, d)).collect()
    }

    pub fn simplicity_report(&self) -> Result<SimplicityReport> {
        let semisimple = self.is_semisimple()?.semisimple;
        let centroid = self.centroid();
        let centroid_dim = centroid.len();
        let mut report = SimplicityReport {
            semisimple,
            centroid_dim,
            simple: Verdict::No,
            just_infinite: Verdict::No,
            proper_ideal_dim: None,
        };
        if self.dim == 1 {
            report.just_infinite = Verdict::Yes;
            return Ok(report);
        }
        if !semisimple {
            return Ok(report);
        }
        if centroid_dim == 1 {
            report.simple = Verdict::Yes;
            report.just_infinite = Verdict::Yes;
            return Ok(report);
        }
        // A rational eigenvalue of a centroid element with a proper
        // eigenspace exhibits an ideal. Without one the centroid may still
        // be a proper field extension of Q_p, so nothing is concluded.
        for c in &centroid {
            let Some(roots) = charpoly_roots_rational(c) else {
                continue;
            };
            for lambda in roots {
                let shifted = c - &QMatrix::identity(self.dim).scale(&lambda);
                let k = shifted.kernel().len();
                if 0 < k && k < self.dim {
                    report.proper_ideal_dim = Some(k);
                    return Ok(report);
                }
            }
        }
        report.simple = Verdict::Indeterminate;
        report.just_infinite = Verdict::Indeterminate;
        Ok(report)
    }
}

/// Descending central chain of a matrix Lie algebra, to a fixed point.
fn lie_nilpotency(basis: &[QMatrix], d: usize) -> (bool, usize) {
    if basis.is_empty() {
        return (true, 0);
    }
    let mut term = Subspace::spanned_by(d * d, basis.iter().map(flatten));
    let mut length = 1;
    loop {
        let mut next = Subspace::new(d * d);
        for a in basis {
            for x in term.basis() {
                let br = commutator(a, &unflatten(x, d));
                if !br.is_zero() {
                    next.insert(flatten(&br));
                }
            }
        }
        if next.rank() == 0 {
            return (true, length);
        }
        if next.rank() == term.rank() {
            return (false, length);
        }
        term = next;
        length += 1;
    }
}
