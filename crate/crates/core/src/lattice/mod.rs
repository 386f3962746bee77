//! Z_p-Lie lattices given by structure constants.
//!
//! A lattice of rank `d` has basis `a_0, ..., a_{d-1}` and brackets
//! `[a_i, a_j] = sum_k c(i, j, k) a_k`, stored only for `i < j`. Vectors are
//! coordinate lists in that basis.

pub mod catalog;
mod killing;
mod structure;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{is_p_integral, vp, Prime, QMatrix, Rational};

pub use killing::{KillingData, SemisimpleCertificate};
pub use structure::{DerivationAlgebra, SeriesProfile, SimplicityReport, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieLattice {
    name: String,
    p: Prime,
    dim: usize,
    labels: Option<Vec<String>>,
    /// `(i, j) -> [a_i, a_j]` for `i < j`; absent pairs bracket to zero.
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl LieLattice {
    /// Builds a lattice from brackets `(i, j, coords)` with `i < j`. Only
    /// the shape is checked here; call [`LieLattice::validate`] for
    /// integrality and the Jacobi identity.
    pub fn new(
        name: impl Into<String>,
        p: Prime,
        dim: usize,
        brackets: impl IntoIterator<Item = (usize, usize, Vec<Rational>)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (i, j, coeffs) in brackets {
            if !(i < j && j < dim) {
                return Err(Error::InvalidInput(format!(
                    "bracket index pair ({i}, {j}) must satisfy i < j < {dim}"
                )));
            }
            if coeffs.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "bracket ({i}, {j}) has {} coefficients, expected {dim}",
                    coeffs.len()
                )));
            }
            if map.contains_key(&(i, j)) {
                return Err(Error::InvalidInput(format!("bracket ({i}, {j}) given twice")));
            }
            if coeffs.iter().any(|c| !c.is_zero()) {
                map.insert((i, j), coeffs);
            }
        }
        Ok(LieLattice {
            name: name.into(),
            p,
            dim,
            labels: None,
            brackets: map,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "{} basis labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Nonzero brackets `(i, j) -> [a_i, a_j]`, `i < j`, in index order.
    pub fn brackets(&self) -> impl Iterator<Item = (usize, usize, &[Rational])> {
        self.brackets.iter().map(|(&(i, j), c)| (i, j, c.as_slice()))
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// `[a_i, a_j]` with antisymmetry applied.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_else(|| self.zero()),
            Greater => match self.brackets.get(&(j, i)) {
                Some(c) => c.iter().map(|x| -x).collect(),
                None => self.zero(),
            },
            Equal => self.zero(),
        }
    }

    pub fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.dim]
    }

    pub fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = self.zero();
        v[i] = num_traits::One::one();
        v
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        assert_eq!(y.len(), self.dim, "dimension mismatch");
        let mut out = self.zero();
        for (&(i, j), c) in &self.brackets {
            // x_i y_j - x_j y_i
            let w = &x[i] * &y[j] - &x[j] * &y[i];
            if w.is_zero() {
                continue;
            }
            for (o, ck) in out.iter_mut().zip(c) {
                if !ck.is_zero() {
                    *o += &w * ck;
                }
            }
        }
        out
    }

    /// Checks p-integrality of every structure constant, then the Jacobi
    /// identity on every basis triple `i < j < k`.
    pub fn validate(&self) -> Result<()> {
        for (&(i, j), c) in &self.brackets {
            if let Some(k) = c.iter().position(|x| !is_p_integral(x, self.p)) {
                return Err(Error::NotALattice { i, j, k });
            }
        }
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let jac = self.jacobiator(i, j, k);
                    if jac.iter().any(|x| !x.is_zero()) {
                        return Err(Error::NotALieAlgebra {
                            triple: (i, j, k),
                            jacobiator: jac,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `[[a_i,a_j],a_k] + [[a_j,a_k],a_i] + [[a_k,a_i],a_j]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let (ai, aj, ak) = (self.unit(i), self.unit(j), self.unit(k));
        let t1 = self.bracket(&self.basis_bracket(i, j), &ak);
        let t2 = self.bracket(&self.basis_bracket(j, k), &ai);
        let t3 = self.bracket(&self.basis_bracket(k, i), &aj);
        t1.iter().zip(&t2).zip(&t3).map(|((a, b), c)| a + b + c).collect()
    }

    /// Matrix of `y -> [x, y]`; column `j` holds `[x, a_j]`.
    pub fn ad_matrix(&self, x: &[Rational]) -> Result<QMatrix> {
        if x.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "vector of length {} in a rank-{} lattice",
                x.len(),
                self.dim
            )));
        }
        let cols: Vec<Vec<Rational>> = (0..self.dim).map(|j| self.bracket(x, &self.unit(j))).collect();
        QMatrix::from_columns(&cols)
    }

    /// `[L, L] ⊆ pL` for odd `p`, `⊆ 4L` for `p = 2`.
    pub fn is_powerful(&self) -> bool {
        let need = if self.p.get() == 2 { 2 } else { 1 };
        self.brackets
            .values()
            .flatten()
            .all(|c| vp(c, self.p) >= crate::padic::PValuation::Finite(need))
    }

    /// The same lattice read in the basis given by the columns of `t`:
    /// new basis vector `b_j = sum_i t_ij a_i`. `t` must be invertible;
    /// integrality of the result is not checked.
    pub fn change_basis(&self, t: &QMatrix, name: impl Into<String>) -> Result<LieLattice> {
        if t.rows() != self.dim || !t.is_square() {
            return Err(Error::InvalidInput("basis change has the wrong shape".into()));
        }
        let tinv = t.inverse()?;
        let cols = t.columns();
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let b = self.bracket(&cols[i], &cols[j]);
                brackets.push((i, j, tinv.mul_vec(&b)));
            }
        }
        LieLattice::new(name, self.p, self.dim, brackets)
    }

    /// The same structure constants over a different prime.
    pub fn with_prime(&self, p: Prime) -> LieLattice {
        LieLattice { p, ..self.clone() }
    }

    /// Structure-constant tensor `c[i][j][k]` for all `i, j` (dense, with
    /// antisymmetry filled in).
    pub fn structure_tensor(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.basis_bracket(i, j)).collect())
            .collect()
    }
}
