use serde::{Deserialize, Serialize};

use super::LieLattice;
use crate::error::Result;
use crate::padic::{self, vp, PValuation, QMatrix, Rational};

/// Gram matrix of the Killing form in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillingData {
    pub matrix: QMatrix,
    #[serde(with = "padic::serde_rational")]
    pub det: Rational,
    pub vp_det: PValuation,
}

/// Cartan's criterion: semisimple iff the Killing form is non-degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimpleCertificate {
    pub semisimple: bool,
    #[serde(with = "padic::serde_rational")]
    pub det_killing: Rational,
    pub vp_det_killing: PValuation,
}

impl LieLattice {
    pub fn ad_matrices(&self) -> Vec<QMatrix> {
        (0..self.dim)
            .map(|i| {
                self.ad_matrix(&self.unit(i))
                    .expect("basis vector has the right length")
            })
            .collect()
    }

    /// `A_ij = tr(ad(a_i) ad(a_j))`.
    pub fn killing_matrix(&self) -> Result<KillingData> {
        let ads = self.ad_matrices();
        let d = self.dim;
        let mut a = QMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let t = (&ads[i] * &ads[j]).trace();
                a[(j, i)] = t.clone();
                a[(i, j)] = t;
            }
        }
        let det = a.det()?;
        let vp_det = vp(&det, self.p);
        Ok(KillingData { matrix: a, det, vp_det })
    }

    /// `κ(x, y)` for coordinate vectors.
    pub fn killing_form(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        Ok((&self.ad_matrix(x)? * &self.ad_matrix(y)?).trace())
    }

    /// Semisimplicity over `Q_p` decided by `det(A) != 0`; the valuation is
    /// reported but plays no part in the verdict.
    pub fn is_semisimple(&self) -> Result<SemisimpleCertificate> {
        let k = self.killing_matrix()?;
        Ok(SemisimpleCertificate {
            semisimple: !k.vp_det.is_infinite(),
            det_killing: k.det,
            vp_det_killing: k.vp_det,
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::lattice::catalog;
    use crate::padic::{rat, PValuation, Prime, QMatrix};
    use num_traits::Zero;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    /// `A_ij = sum_{k,l} c(i,l,k) c(j,k,l)`, straight from the constants.
    fn killing_from_constants(l: &crate::lattice::LieLattice) -> QMatrix {
        let c = l.structure_tensor();
        let d = l.dim();
        let mut a = QMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut s = rat(0);
                for k in 0..d {
                    for m in 0..d {
                        s += &c[i][m][k] * &c[j][k][m];
                    }
                }
                a[(i, j)] = s;
            }
        }
        a
    }

    #[test]
    fn sl2_killing() {
        for q in [2, 3, 5, 7] {
            let k = catalog::sl2(p(q)).killing_matrix().unwrap();
            assert_eq!(k.matrix, QMatrix::from_i64(&[&[0, 0, 4], &[0, 8, 0], &[4, 0, 0]]));
            assert_eq!(k.det, rat(-128));
            let cert = catalog::sl2(p(q)).is_semisimple().unwrap();
            assert!(cert.semisimple);
        }
        assert_eq!(
            catalog::sl2(p(2)).killing_matrix().unwrap().vp_det,
            PValuation::Finite(7)
        );
        assert_eq!(
            catalog::sl2(p(3)).killing_matrix().unwrap().vp_det,
            PValuation::Finite(0)
        );
    }

    #[test]
    fn degenerate_forms() {
        for l in [
            catalog::heisenberg(p(5)),
            catalog::abelian(p(3), 2),
            catalog::abelian(p(3), 1),
        ] {
            let k = l.killing_matrix().unwrap();
            assert!(k.matrix.is_zero());
            assert!(k.det.is_zero());
            assert!(k.vp_det.is_infinite());
            assert!(!l.is_semisimple().unwrap().semisimple);
        }
    }

    #[test]
    fn two_routes_agree_on_catalog() {
        for l in catalog::all(p(3)) {
            let k = l.killing_matrix().unwrap().matrix;
            assert_eq!(k, killing_from_constants(&l), "{}", l.name());
            assert_eq!(k, k.transpose());
        }
    }

    #[test]
    fn so3_and_product() {
        let k = catalog::so3(p(5)).killing_matrix().unwrap();
        assert_eq!(k.matrix, QMatrix::diag(&[rat(-2), rat(-2), rat(-2)]));
        let k = catalog::sl2_plus_sl2(p(5)).killing_matrix().unwrap();
        assert_eq!(k.det, rat(128 * 128));
    }
}
