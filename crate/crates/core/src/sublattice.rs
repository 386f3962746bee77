//! Full-rank sublattices `M ⊆ L`, given by a basis matrix whose columns are
//! the generators in parent coordinates.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::LieLattice;
use crate::padic::{hermite_p, is_p_integral, smith_p, vp, QMatrix, Rational};

#[derive(Clone)]
pub struct Sublattice<'a> {
    parent: &'a LieLattice,
    basis: QMatrix,
    hnf: QMatrix,
}

impl fmt::Debug for Sublattice<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sublattice")
            .field("parent", &self.parent.name())
            .field("hnf", &format_args!("{}", self.hnf))
            .finish()
    }
}

/// Equal iff the Hermite forms agree.
impl PartialEq for Sublattice<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.parent.dim() == other.parent.dim() && self.hnf == other.hnf
    }
}

impl Eq for Sublattice<'_> {}

impl<'a> Sublattice<'a> {
    pub fn new(parent: &'a LieLattice, basis: QMatrix) -> Result<Self> {
        let d = parent.dim();
        if basis.rows() != d || basis.cols() != d {
            return Err(Error::InvalidInput(format!(
                "sublattice basis is {}x{}, expected {d}x{d}",
                basis.rows(),
                basis.cols()
            )));
        }
        if let Some((r, c)) = basis.first_non_integral(parent.p()) {
            return Err(Error::NotASublattice(format!("entry ({r}, {c}) is not p-integral")));
        }
        let hnf = hermite_p(&basis, parent.p())?;
        Ok(Sublattice { parent, basis, hnf })
    }

    /// Trusted constructor for matrices already in canonical form.
    pub(crate) fn from_hnf(parent: &'a LieLattice, hnf: QMatrix) -> Self {
        Sublattice {
            parent,
            basis: hnf.clone(),
            hnf,
        }
    }

    pub fn full(parent: &'a LieLattice) -> Self {
        Self::from_hnf(parent, QMatrix::identity(parent.dim()))
    }

    /// `p^m L`.
    pub fn scaled_full(parent: &'a LieLattice, m: u32) -> Self {
        Self::full(parent).scale_power(m)
    }

    pub fn parent(&self) -> &'a LieLattice {
        self.parent
    }

    /// Generators as given.
    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    /// Canonical generators.
    pub fn hnf(&self) -> &QMatrix {
        &self.hnf
    }

    /// Re-express with the canonical basis.
    pub fn canonical(&self) -> Self {
        Self::from_hnf(self.parent, self.hnf.clone())
    }

    /// `[L : M] = p^index()`, read from `v_p(det B)`.
    pub fn index(&self) -> u64 {
        let det = self.basis.det().expect("square basis");
        vp(&det, self.parent.p()).finite().expect("full-rank basis") as u64
    }

    /// Index recomputed from the elementary divisors of the basis.
    pub fn smith_index(&self) -> u64 {
        smith_p(&self.basis, self.parent.p())
            .expect("valid sublattice basis")
            .total
    }

    /// Coordinates of `v` in this sublattice's basis, if `v ∈ M ⊗ Q`.
    fn coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        self.basis.inverse().expect("full-rank basis").mul_vec(v)
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        let p = self.parent.p();
        self.coordinates(v).iter().all(|x| is_p_integral(x, p))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Sublattice<'_>) -> bool {
        let inv = self.basis.inverse().expect("full-rank basis");
        (&inv * &other.basis).is_p_integral(self.parent.p())
    }

    /// `[self : sub]` as an exponent; `sub` must lie in `self`.
    pub fn relative_index(&self, sub: &Sublattice<'_>) -> Result<u64> {
        if !self.contains(sub) {
            return Err(Error::NotASublattice("not contained in the larger lattice".into()));
        }
        Ok(sub.index() - self.index())
    }

    /// Whether `[m_i, m_j] ∈ M` for all generator pairs.
    pub fn is_subalgebra(&self) -> bool {
        let inv = self.basis.inverse().expect("full-rank basis");
        let p = self.parent.p();
        let cols = self.basis.columns();
        let d = cols.len();
        (0..d).all(|i| {
            (i + 1..d).all(|j| {
                let br = self.parent.bracket(&cols[i], &cols[j]);
                br.iter().all(Zero::is_zero) || inv.mul_vec(&br).iter().all(|x| is_p_integral(x, p))
            })
        })
    }

    /// `Bᵀ A B`: the Killing form in this sublattice's basis.
    pub fn gram(&self) -> Result<QMatrix> {
        let a = self.parent.killing_matrix()?.matrix;
        Ok(self.gram_with(&a))
    }

    /// `Bᵀ A B` for a precomputed parent Killing matrix.
    pub fn gram_with(&self, killing: &QMatrix) -> QMatrix {
        &(&self.basis.transpose() * killing) * &self.basis
    }

    /// Image `s(M)` with basis `s·B`.
    pub fn transform(&self, s: &QMatrix) -> Result<Sublattice<'a>> {
        let d = self.parent.dim();
        if s.rows() != d || s.cols() != d {
            return Err(Error::InvalidInput(format!("map must be {d}x{d}")));
        }
        if s.det()?.is_zero() {
            return Err(Error::InvalidMap("map is singular".into()));
        }
        let image = s * &self.basis;
        if let Some((r, c)) = image.first_non_integral(self.parent.p()) {
            return Err(Error::NotASublattice(format!(
                "image entry ({r}, {c}) is not p-integral"
            )));
        }
        Sublattice::new(self.parent, image)
    }

    /// `p^m M`.
    pub fn scale_power(&self, m: u32) -> Sublattice<'a> {
        let k = Rational::from_integer(self.parent.p().pow(m));
        Sublattice {
            parent: self.parent,
            basis: self.basis.scale(&k),
            hnf: hermite_p(&self.hnf.scale(&k), self.parent.p()).expect("scaled lattice is valid"),
        }
    }

    /// `M + N`.
    pub fn sum(&self, other: &Sublattice<'_>) -> Result<Sublattice<'a>> {
        let both = self.hnf.hconcat(&other.hnf)?;
        Ok(Self::from_hnf(self.parent, hermite_p(&both, self.parent.p())?))
    }

    /// `M ∩ N`, as the dual of `M* + N*` for the standard pairing.
    pub fn intersection(&self, other: &Sublattice<'_>) -> Result<Sublattice<'a>> {
        let p = self.parent.p();
        let dual_m = self.hnf.inverse()?.transpose();
        let dual_n = other.hnf.inverse()?.transpose();
        let both = dual_m.hconcat(&dual_n)?;
        // clear p from the denominators, take the Hermite form, undo
        let t = both
            .entries()
            .iter()
            .filter_map(|x| vp(x, p).finite())
            .map(|v| (-v).max(0))
            .max()
            .unwrap_or(0);
        let up = Rational::from_integer(p.pow(t as u32));
        let h = hermite_p(&both.scale(&up), p)?.scale(&up.recip());
        let meet = h.inverse()?.transpose();
        Sublattice::new(self.parent, meet).map(|s| s.canonical())
    }

    /// This sublattice as a Lie lattice in its own basis.
    pub fn transported(&self) -> Result<LieLattice> {
        self.parent
            .change_basis(&self.basis, format!("{}-sublattice", self.parent.name()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use crate::padic::{rat, Prime};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn diag(xs: &[i64]) -> QMatrix {
        QMatrix::diag(&xs.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn subalgebra_examples() {
        let sl2 = catalog::sl2(p(5));
        assert!(Sublattice::scaled_full(&sl2, 1).is_subalgebra());
        assert!(Sublattice::new(&sl2, diag(&[1, 1, 5])).unwrap().is_subalgebra());
        assert!(!Sublattice::new(&sl2, diag(&[1, 5, 1])).unwrap().is_subalgebra());
        let heis = catalog::heisenberg(p(3));
        assert!(Sublattice::scaled_full(&heis, 1).is_subalgebra());
    }

    #[test]
    fn index_examples() {
        for q in [2u64, 3, 5] {
            let qi = q as i64;
            let ab = catalog::abelian(p(q), 2);
            assert_eq!(Sublattice::new(&ab, diag(&[qi, qi * qi])).unwrap().index(), 3);
            for d in 1..=3 {
                let l = catalog::abelian(p(q), d);
                assert_eq!(Sublattice::scaled_full(&l, 1).index(), d as u64);
            }
            let sl2 = catalog::sl2(p(q));
            assert_eq!(Sublattice::new(&sl2, diag(&[1, 1, qi])).unwrap().index(), 1);
        }
    }

    #[test]
    fn gram_examples() {
        let sl2 = catalog::sl2(p(5));
        let a = sl2.killing_matrix().unwrap().matrix;
        assert_eq!(Sublattice::full(&sl2).gram().unwrap(), a);
        assert_eq!(Sublattice::scaled_full(&sl2, 1).gram().unwrap(), a.scale(&rat(25)));
        let m = Sublattice::new(&sl2, diag(&[1, 1, 5])).unwrap();
        assert_eq!(
            m.gram().unwrap(),
            QMatrix::from_i64(&[&[0, 0, 20], &[0, 8, 0], &[20, 0, 0]])
        );
    }

    #[test]
    fn transform_examples() {
        let ab = catalog::abelian(p(3), 2);
        let pl = Sublattice::scaled_full(&ab, 1);
        assert_eq!(pl.transform(&QMatrix::identity(2)).unwrap(), pl);
        let img = Sublattice::full(&ab).transform(&diag(&[3, 3])).unwrap();
        assert_eq!(img, pl);
        assert_eq!(img.index(), 2);

        let sl2 = catalog::sl2(p(5));
        let inv = QMatrix::from_i64(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]);
        let m = Sublattice::new(&sl2, diag(&[1, 1, 5])).unwrap();
        let n = m.transform(&inv).unwrap();
        assert_eq!(n, Sublattice::new(&sl2, diag(&[5, 1, 1])).unwrap());
        assert_eq!(n.index(), 1);
    }

    #[test]
    fn transform_errors() {
        let ab = catalog::abelian(p(3), 2);
        let l = Sublattice::full(&ab);
        let mut s = QMatrix::identity(2);
        s[(0, 0)] = crate::padic::frac(1, 3);
        assert!(matches!(l.transform(&s), Err(Error::NotASublattice(_))));
        assert!(matches!(l.transform(&diag(&[1, 0])), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn scale_power_examples() {
        let sl2 = catalog::sl2(p(3));
        let l = Sublattice::full(&sl2);
        assert_eq!(l.scale_power(0), l);
        assert_eq!(l.scale_power(1).index(), 3);
        let m = Sublattice::new(&sl2, diag(&[1, 1, 3])).unwrap();
        assert_eq!(m.scale_power(1).index(), 4);
    }

    #[test]
    fn canonical_equality_ignores_presentation() {
        let ab = catalog::abelian(p(5), 2);
        let a = Sublattice::new(&ab, QMatrix::from_i64(&[&[1, 0], &[2, 5]])).unwrap();
        let b = Sublattice::new(&ab, QMatrix::from_i64(&[&[1, 1], &[7, 12]])).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Sublattice::new(&ab, QMatrix::from_i64(&[&[1, 0], &[1, 5]])).unwrap());
    }

    #[test]
    fn sum_and_intersection() {
        let ab = catalog::abelian(p(3), 2);
        let a = Sublattice::new(&ab, diag(&[3, 1])).unwrap();
        let b = Sublattice::new(&ab, diag(&[1, 3])).unwrap();
        assert_eq!(a.sum(&b).unwrap(), Sublattice::full(&ab));
        assert_eq!(a.intersection(&b).unwrap(), Sublattice::scaled_full(&ab, 1));
        // index(M) + index(N) = index(M + N) + index(M ∩ N)
        let c = Sublattice::new(&ab, QMatrix::from_i64(&[&[1, 0], &[1, 9]])).unwrap();
        let s = a.sum(&c).unwrap();
        let i = a.intersection(&c).unwrap();
        assert_eq!(a.index() + c.index(), s.index() + i.index());
        assert!(a.contains(&i) && c.contains(&i) && s.contains(&a) && s.contains(&c));
    }

    #[test]
    fn rejects_bad_bases() {
        let ab = catalog::abelian(p(3), 2);
        assert!(Sublattice::new(&ab, diag(&[1, 0])).is_err());
        assert!(Sublattice::new(&ab, QMatrix::identity(3)).is_err());
        let mut m = QMatrix::identity(2);
        m[(0, 0)] = crate::padic::frac(1, 3);
        assert!(matches!(Sublattice::new(&ab, m), Err(Error::NotASublattice(_))));
    }
}
