//! Automorphisms, Serre's determinant criterion and index-stability verdicts.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LieLattice;
use crate::padic::{self, newton_slopes, vp, PValuation, QMatrix, Rational, Subspace};
use crate::sublattice::Sublattice;

pub const DEFAULT_BUDGET: u64 = 10_000;

/// A linear map of `L ⊗ Q_p`, with the outcome of the automorphism test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoMap {
    pub matrix: QMatrix,
    pub verified: bool,
    pub det_valuation: PValuation,
}

/// Invertible and `[Sx, Sy] = S[x, y]` on every basis pair, checked exactly.
pub fn automorphism_check(l: &LieLattice, s: &QMatrix) -> Result<AutoMap> {
    let d = l.dim();
    if s.rows() != d || s.cols() != d {
        return Err(Error::InvalidInput(format!(
            "map is {}x{}, lattice has rank {d}",
            s.rows(),
            s.cols()
        )));
    }
    let det = s.det()?;
    let det_valuation = vp(&det, l.p());
    let verified = !det.is_zero() && preserves_brackets(l, s);
    Ok(AutoMap {
        matrix: s.clone(),
        verified,
        det_valuation,
    })
}

fn preserves_brackets(l: &LieLattice, s: &QMatrix) -> bool {
    let d = l.dim();
    let cols = s.columns();
    (0..d).all(|i| (i + 1..d).all(|j| l.bracket(&cols[i], &cols[j]) == s.mul_vec(&l.basis_bracket(i, j))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreVerdict {
    pub det_valuation: i64,
    /// `|det s|_p = p^(-det_valuation)`.
    #[serde(with = "padic::serde_rational")]
    pub norm_det: Rational,
    pub passes: bool,
    /// Valuations of the eigenvalues, ascending, with multiplicity.
    #[serde(with = "padic::serde_rational::vec")]
    pub eigen_valuations: Vec<Rational>,
}

pub fn serre_verdict(l: &LieLattice, s: &AutoMap) -> Result<SerreVerdict> {
    if !s.verified {
        return Err(Error::NotAnAutomorphism);
    }
    let v = s.det_valuation.finite().ok_or(Error::NotAnAutomorphism)?;
    let eigen_valuations = newton_slopes(&s.matrix.charpoly(), l.p())?;
    Ok(SerreVerdict {
        det_valuation: v,
        norm_det: l.p().rational_pow(-v),
        passes: v == 0,
        eigen_valuations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoIndexReport {
    pub index_m: u64,
    pub index_n: u64,
    pub equal: bool,
    pub semisimple: bool,
    /// `Bᵀ A B = Cᵀ A C`, checked when `L` is semisimple.
    pub gram_identity: Option<bool>,
}

/// Checks that `phi` (ambient coordinates) carries the subalgebra `m` onto
/// `n` as a Lie isomorphism, and compares the indices.
pub fn iso_index_check(
    l: &LieLattice,
    m: &Sublattice<'_>,
    n: &Sublattice<'_>,
    phi: &QMatrix,
) -> Result<IsoIndexReport> {
    let d = l.dim();
    if m.parent().dim() != d || n.parent().dim() != d {
        return Err(Error::InvalidInput("sublattices belong to a different lattice".into()));
    }
    let map = automorphism_check(l, phi)?;
    if phi.det()?.is_zero() {
        return Err(Error::InvalidIso("map is singular".into()));
    }
    if !map.verified {
        return Err(Error::InvalidIso("map does not preserve brackets".into()));
    }
    if !m.is_subalgebra() {
        return Err(Error::InvalidIso("source is not a subalgebra".into()));
    }
    let c = phi * m.basis();
    if c.first_non_integral(l.p()).is_some() {
        return Err(Error::BasisMismatch);
    }
    let image = Sublattice::new(l, c.clone())?;
    if &image != n {
        return Err(Error::BasisMismatch);
    }

    let killing = l.killing_matrix()?;
    let semisimple = !killing.vp_det.is_infinite();
    let gram_identity = if semisimple {
        let ok = m.gram_with(&killing.matrix) == image.gram_with(&killing.matrix);
        if !ok {
            return Err(Error::Internal(
                "Gram identity fails for a verified isomorphism of a semisimple lattice".into(),
            ));
        }
        Some(true)
    } else {
        None
    };
    let (index_m, index_n) = (m.index(), n.index());
    Ok(IsoIndexReport {
        index_m,
        index_n,
        equal: index_m == index_n,
        semisimple,
        gram_identity,
    })
}

/// `[L : M] / [L : N] = p^ratio_valuation` for isomorphic `M`, `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRatio {
    pub numerator_exponent: u64,
    pub denominator_exponent: u64,
    pub ratio_valuation: i64,
}

impl IndexRatio {
    pub fn ratio(&self, p: padic::Prime) -> Rational {
        p.rational_pow(self.ratio_valuation)
    }
}

pub fn index_ratio(l: &LieLattice, m: &Sublattice<'_>, n: &Sublattice<'_>, phi: &QMatrix) -> Result<IndexRatio> {
    let r = iso_index_check(l, m, n, phi)?;
    Ok(IndexRatio {
        numerator_exponent: r.index_m,
        denominator_exponent: r.index_n,
        ratio_valuation: r.index_m as i64 - r.index_n as i64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub witness: Option<AutoMap>,
    pub candidates_tried: u64,
    pub budget_exhausted: bool,
}

/// Largest per-vector weight used for graded scalings.
const MAX_WEIGHT: u32 = 2;

/// Basis adapted to the lower central series. The standard basis is kept
/// when every term is a coordinate subspace; otherwise each term is
/// completed from the next one down and the deepest layer comes last.
fn adapted_basis(l: &LieLattice) -> QMatrix {
    let d = l.dim();
    let series = l.lower_central_series();
    let units: Vec<Vec<Rational>> = (0..d).map(|i| l.unit(i)).collect();
    let coordinate = series
        .iter()
        .all(|t| units.iter().filter(|u| t.contains(u)).count() == t.rank());
    if coordinate {
        return QMatrix::identity(d);
    }
    let mut layers: Vec<Vec<Vec<Rational>>> = Vec::new();
    let mut below = Subspace::new(d);
    for term in series.iter().rev().chain(std::iter::once(&Subspace::full(d))) {
        let layer: Vec<_> = term
            .basis()
            .iter()
            .filter(|v| below.insert((*v).clone()))
            .cloned()
            .collect();
        layers.push(layer);
    }
    let cols: Vec<Vec<Rational>> = layers.into_iter().rev().flatten().collect();
    QMatrix::from_columns(&cols).expect("rank d")
}

/// Weight vectors in `0..=max` of length `d`, excluding zero, ordered by
/// total weight and then lexicographically descending.
fn weight_vectors(d: usize, max: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..d {
        all = all
            .into_iter()
            .flat_map(|w| {
                (0..=max).map(move |x| {
                    let mut w = w.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    all.retain(|w| w.iter().any(|&x| x > 0));
    all.sort_by(|a, b| {
        let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
        sa.cmp(&sb).then_with(|| b.cmp(a))
    });
    all
}

/// Deterministic search for an automorphism with `v_p(det) != 0`. Order:
/// `p·I`, then `T diag(p^w) T⁻¹` over weight vectors `w` for a basis `T`
/// adapted to the lower central series, then `extra` as given. Each
/// candidate counts once against `budget`.
pub fn search_unstable_witness(l: &LieLattice, extra: &[QMatrix], budget: u64) -> WitnessSearch {
    let p = l.p();
    let d = l.dim();
    let mut tried = 0u64;
    let attempt = |s: QMatrix, tried: &mut u64| -> Option<Option<AutoMap>> {
        if *tried >= budget {
            return None;
        }
        *tried += 1;
        let map = automorphism_check(l, &s).ok()?;
        let hit = map.verified && map.det_valuation != PValuation::Finite(0);
        Some(hit.then_some(map))
    };

    let mut candidates: Vec<QMatrix> = vec![QMatrix::identity(d).scale(&p.as_rational())];
    let t = adapted_basis(l);
    let tinv = t.inverse().expect("adapted basis is invertible");
    for w in weight_vectors(d, MAX_WEIGHT) {
        let diag: Vec<Rational> = w.iter().map(|&x| p.rational_pow(x as i64)).collect();
        let s = &(&t * &QMatrix::diag(&diag)) * &tinv;
        if w.iter().all(|&x| x == 1) {
            continue; // already tried as p·I
        }
        candidates.push(s);
    }
    candidates.extend(extra.iter().cloned());

    for s in candidates {
        match attempt(s, &mut tried) {
            None => {
                return WitnessSearch {
                    witness: None,
                    candidates_tried: tried,
                    budget_exhausted: true,
                }
            }
            Some(Some(map)) => {
                return WitnessSearch {
                    witness: Some(map),
                    candidates_tried: tried,
                    budget_exhausted: false,
                }
            }
            Some(None) => {}
        }
    }
    WitnessSearch {
        witness: None,
        candidates_tried: tried,
        budget_exhausted: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Stable,
    Unstable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Semisimple {
        #[serde(with = "padic::serde_rational")]
        det_killing: Rational,
    },
    DerNilpotent {
        chain_length: usize,
    },
    Witness {
        det_valuation: i64,
        /// `[L : L] / [L : s(L)] = |det s|_p = p^ratio_valuation`.
        ratio_valuation: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub status: Status,
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<AutoMap>,
    pub notes: String,
}

/// Semisimple first, then a nilpotent derivation algebra, then the witness
/// search; `Unknown` when none applies.
pub fn stability_certificate(l: &LieLattice, extra: &[QMatrix], budget: u64) -> StabilityVerdict {
    let killing = l.killing_matrix().expect("square Killing matrix");
    if !killing.vp_det.is_infinite() {
        return StabilityVerdict {
            status: Status::Stable,
            certificate: Some(Certificate::Semisimple {
                det_killing: killing.det,
            }),
            witness: None,
            notes: "Killing form is non-degenerate; automorphisms preserve it, so det(s) = ±1".into(),
        };
    }
    let der = l.derivations();
    if der.forces_unit_determinants() {
        return StabilityVerdict {
            status: Status::Stable,
            certificate: Some(Certificate::DerNilpotent {
                chain_length: der.chain_length,
            }),
            witness: None,
            notes: "derivations are nilpotent; automorphism eigenvalues are roots of unity".into(),
        };
    }
    let search = search_unstable_witness(l, extra, budget);
    match search.witness {
        Some(w) => {
            let v = w.det_valuation.finite().expect("verified map is invertible");
            StabilityVerdict {
                status: Status::Unstable,
                certificate: Some(Certificate::Witness {
                    det_valuation: v,
                    ratio_valuation: -v,
                }),
                witness: Some(w),
                notes: format!("automorphism with |det|_p = p^{}", -v),
            }
        }
        None => StabilityVerdict {
            status: Status::Unknown,
            certificate: None,
            witness: None,
            notes: format!(
                "no certificate; {} witness candidates tried{}",
                search.candidates_tried,
                if search.budget_exhausted {
                    ", budget exhausted"
                } else {
                    ""
                }
            ),
        },
    }
}

/// `exp(N) = Σ N^k / k!` for nilpotent `N`; `None` otherwise.
pub fn exp_nilpotent(n: &QMatrix) -> Option<QMatrix> {
    if !n.is_square() || !n.is_nilpotent() {
        return None;
    }
    let mut term = QMatrix::identity(n.rows());
    let mut sum = term.clone();
    for k in 1..=n.rows() {
        term = (&term * n).scale(&Rational::new(One::one(), (k as i64).into()));
        sum = &sum + &term;
    }
    Some(sum)
}
