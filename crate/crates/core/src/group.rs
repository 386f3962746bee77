//! The group attached to a powerful nilpotent lattice through the
//! Campbell–Hausdorff series, computed at finite precision.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LieLattice;
use crate::padic::{self, frac, is_p_integral, residue, smith_p, Prime, Rational};
use crate::sublattice::Sublattice;

/// A point of `L`, meaningful mod `p^precision`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "padic::serde_rational::vec")]
    pub coords: Vec<Rational>,
    pub precision: u32,
}

impl GroupElement {
    pub fn new(coords: Vec<Rational>, precision: u32, p: Prime) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        if let Some(x) = coords.iter().find(|x| !is_p_integral(x, p)) {
            return Err(Error::InvalidInput(format!("coordinate {x} is not p-integral")));
        }
        Ok(GroupElement { coords, precision })
    }

    pub fn identity(dim: usize, precision: u32) -> Self {
        GroupElement {
            coords: vec![Rational::zero(); dim],
            precision,
        }
    }

    /// Coordinates reduced into `[0, p^precision)`.
    pub fn residues(&self, p: Prime) -> Vec<BigInt> {
        self.coords
            .iter()
            .map(|x| residue(x, p, self.precision).expect("p-integral coordinates"))
            .collect()
    }

    /// Same point with reduced integer coordinates.
    pub fn reduced(&self, p: Prime) -> Self {
        GroupElement {
            coords: self.residues(p).into_iter().map(Rational::from_integer).collect(),
            precision: self.precision,
        }
    }

    pub fn is_identity(&self, p: Prime) -> bool {
        self.residues(p).iter().all(|x| x.is_zero())
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            coords: self.coords.iter().map(|x| -x).collect(),
            precision: self.precision,
        }
    }

    /// Equality mod `p^precision`.
    pub fn same_as(&self, other: &GroupElement, p: Prime) -> bool {
        self.precision == other.precision && self.residues(p) == other.residues(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BchConfig {
    pub p: Prime,
    pub class: usize,
    /// Terms above this degree vanish on the lattice.
    pub max_degree: usize,
}

/// Degree of the hard-coded series.
pub const MAX_SUPPORTED_DEGREE: usize = 4;

impl BchConfig {
    pub fn for_lattice(l: &LieLattice) -> Result<Self> {
        let p = l.p();
        if p.get() == 2 {
            return Err(Error::UnsupportedClass("p = 2 is not supported".into()));
        }
        if !l.is_powerful() {
            return Err(Error::NotPowerful);
        }
        let class = l
            .series_profile()
            .nilpotency_class
            .ok_or_else(|| Error::UnsupportedClass("lattice is not nilpotent".into()))?;
        if class as u64 >= p.get() {
            return Err(Error::UnsupportedClass(format!("class {class} is not below p = {p}")));
        }
        if class > MAX_SUPPORTED_DEGREE {
            return Err(Error::UnsupportedClass(format!(
                "class {class} exceeds the supported degree {MAX_SUPPORTED_DEGREE}"
            )));
        }
        Ok(BchConfig {
            p,
            class,
            max_degree: class.max(1),
        })
    }
}

fn axpy(acc: &mut [Rational], k: &Rational, x: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += k * b;
    }
}

/// `log(exp x exp y)` through degree `max_degree` (at most 4), exactly.
pub fn bch_series(l: &LieLattice, x: &[Rational], y: &[Rational], max_degree: usize) -> Vec<Rational> {
    let mut z: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    if max_degree < 2 {
        return z;
    }
    let xy = l.bracket(x, y);
    axpy(&mut z, &frac(1, 2), &xy);
    if max_degree < 3 {
        return z;
    }
    // [x,[x,y]] + [y,[y,x]] = [x,[x,y]] - [y,[x,y]]
    let x_xy = l.bracket(x, &xy);
    axpy(&mut z, &frac(1, 12), &x_xy);
    axpy(&mut z, &frac(-1, 12), &l.bracket(y, &xy));
    if max_degree < 4 {
        return z;
    }
    axpy(&mut z, &frac(-1, 24), &l.bracket(y, &x_xy));
    z
}

/// The group law on a powerful lattice of class below `p`.
#[derive(Debug, Clone)]
pub struct BchGroup<'a> {
    lattice: &'a LieLattice,
    config: BchConfig,
}

impl<'a> BchGroup<'a> {
    pub fn new(l: &'a LieLattice) -> Result<Self> {
        Ok(BchGroup {
            lattice: l,
            config: BchConfig::for_lattice(l)?,
        })
    }

    pub fn config(&self) -> BchConfig {
        self.config
    }

    /// `d(G)`, the rank of the lattice.
    pub fn dimension(&self) -> usize {
        self.lattice.dim()
    }

    pub fn mul_exact(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        bch_series(self.lattice, x, y, self.config.max_degree)
    }

    /// `g·h`, reduced mod `p^e`.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let d = self.dimension();
        if g.precision != h.precision {
            return Err(Error::InvalidInput(format!(
                "precision mismatch: {} vs {}",
                g.precision, h.precision
            )));
        }
        if g.coords.len() != d || h.coords.len() != d {
            return Err(Error::InvalidInput(format!("elements must have {d} coordinates")));
        }
        let z = self.mul_exact(&g.coords, &h.coords);
        GroupElement::new(z, g.precision, self.config.p).map(|z| z.reduced(self.config.p))
    }
}

pub fn bch_mul(l: &LieLattice, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    BchGroup::new(l)?.mul(g, h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupIndexReport {
    pub precision: u32,
    pub lattice_index_exponent: u64,
    /// `p^lattice_index_exponent`, as a decimal string.
    pub lattice_index: String,
    pub cosets: u64,
    pub agrees: bool,
}

/// Counts the cosets of `M/p^eL` in `L/p^eL` under the group law by a
/// breadth-first search over left translates by basis elements. Requires
/// `p^e L ⊆ M`. Each coset found counts against `budget`.
pub fn group_index_check(l: &LieLattice, m: &Sublattice<'_>, e: u32, budget: u64) -> Result<GroupIndexReport> {
    let group = BchGroup::new(l)?;
    let p = l.p();
    let d = l.dim();
    if e == 0 {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    let profile = smith_p(m.basis(), p)?;
    let deepest = profile.exponents.iter().copied().max().unwrap_or(0);
    if (e as u64) < deepest {
        return Err(Error::InvalidInput(format!(
            "precision {e} is below the largest elementary divisor exponent {deepest}"
        )));
    }
    if !m.is_subalgebra() {
        return Err(Error::NotASubgroup("sublattice is not a subalgebra".into()));
    }
    let gens: Vec<GroupElement> = (0..d)
        .map(|i| GroupElement {
            coords: l.unit(i),
            precision: e,
        })
        .collect();
    let sub_gens: Vec<GroupElement> = m
        .basis()
        .columns()
        .into_iter()
        .map(|c| GroupElement {
            coords: c,
            precision: e,
        })
        .collect();
    for a in &sub_gens {
        for b in &sub_gens {
            if !m.contains_vector(&group.mul(a, b)?.coords) {
                return Err(Error::NotASubgroup(format!("not closed under the group law mod p^{e}")));
            }
        }
    }

    let mut reps = vec![GroupElement::identity(d, e)];
    let mut next = 0;
    while next < reps.len() {
        let g = reps[next].clone();
        next += 1;
        for a in &gens {
            let x = group.mul(a, &g)?;
            let known = reps
                .iter()
                .any(|r| m.contains_vector(&group.mul(&r.inverse(), &x).expect("same precision").coords));
            if !known {
                if reps.len() as u64 >= budget {
                    return Err(Error::Budget {
                        partial: reps.len() as u64,
                    });
                }
                reps.push(x);
            }
        }
    }
    let index = m.index();
    let cosets = reps.len() as u64;
    let expected = p.pow(index as u32);
    Ok(GroupIndexReport {
        precision: e,
        lattice_index_exponent: index,
        lattice_index: expected.to_string(),
        cosets,
        agrees: BigInt::from(cosets) == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;
    use crate::padic::{rat, QMatrix};
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn el(xs: &[i64], e: u32) -> GroupElement {
        GroupElement {
            coords: xs.iter().map(|&x| rat(x)).collect(),
            precision: e,
        }
    }

    #[test]
    fn heisenberg_product() {
        let h = catalog::heisenberg_powerful(p(5));
        let g = BchGroup::new(&h).unwrap();
        let exact = g.mul_exact(&h.unit(0), &h.unit(1));
        assert_eq!(exact, vec![rat(1), rat(1), frac(5, 2)]);
        let z = g.mul(&el(&[1, 0, 0], 2), &el(&[0, 1, 0], 2)).unwrap();
        assert_eq!(
            z.residues(p(5)),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(15)]
        );
    }

    #[test]
    fn abelian_product_is_addition() {
        let ab = catalog::abelian(p(3), 2);
        let z = bch_mul(&ab, &el(&[4, 7], 2), &el(&[8, 5], 2)).unwrap();
        assert!(z.same_as(&el(&[12, 12], 2), p(3)));
    }

    #[test]
    fn errors() {
        let h = catalog::heisenberg(p(5));
        assert_eq!(
            bch_mul(&h, &el(&[1, 0, 0], 1), &el(&[0, 1, 0], 1)).unwrap_err(),
            Error::NotPowerful
        );
        let hp = catalog::heisenberg_powerful(p(5));
        assert!(matches!(
            bch_mul(&hp, &el(&[1, 0, 0], 1), &el(&[0, 1, 0], 2)),
            Err(Error::InvalidInput(_))
        ));
        let two = catalog::heisenberg_powerful(p(2));
        assert!(matches!(BchGroup::new(&two), Err(Error::UnsupportedClass(_))));
        // powerful but not nilpotent: sl2 scaled by p
        let sl2 = catalog::sl2(p(5));
        let scaled = sl2.change_basis(&QMatrix::identity(3).scale(&rat(5)), "5sl2").unwrap();
        assert!(scaled.is_powerful());
        assert!(matches!(BchGroup::new(&scaled), Err(Error::UnsupportedClass(_))));
        // class 3 is not below p = 3
        let filiform = LieLattice::new(
            "filiform",
            p(3),
            4,
            vec![
                (0, 1, vec![rat(0), rat(0), rat(3), rat(0)]),
                (0, 2, vec![rat(0), rat(0), rat(0), rat(3)]),
            ],
        )
        .unwrap();
        assert!(matches!(BchGroup::new(&filiform), Err(Error::UnsupportedClass(_))));
    }

    #[test]
    fn group_index_examples() {
        let h = catalog::heisenberg_powerful(p(5));
        let r = group_index_check(&h, &Sublattice::scaled_full(&h, 1), 2, 10_000).unwrap();
        assert_eq!((r.cosets, r.lattice_index_exponent, r.agrees), (125, 3, true));

        let ab = catalog::abelian(p(3), 2);
        let m = Sublattice::new(&ab, QMatrix::from_i64(&[&[3, 0], &[0, 9]])).unwrap();
        let r = group_index_check(&ab, &m, 2, 10_000).unwrap();
        assert_eq!((r.cosets, r.lattice_index.as_str()), (27, "27"));

        let plain = catalog::heisenberg(p(5));
        assert_eq!(
            group_index_check(&plain, &Sublattice::full(&plain), 1, 100).unwrap_err(),
            Error::NotPowerful
        );
        assert!(matches!(
            group_index_check(&ab, &m, 1, 100),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            group_index_check(&h, &Sublattice::scaled_full(&h, 1), 2, 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn group_index_on_non_characteristic_sublattice() {
        // span(x, p y, z): index p, a subalgebra of the powerful Heisenberg
        let h = catalog::heisenberg_powerful(p(3));
        let m = Sublattice::new(&h, QMatrix::from_i64(&[&[1, 0, 0], &[0, 3, 0], &[0, 0, 1]])).unwrap();
        let r = group_index_check(&h, &m, 1, 10_000).unwrap();
        assert_eq!(r.cosets, 3);
        assert!(r.agrees);
    }

    fn coords(d: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-bound..=bound, d)
    }

    proptest! {
        #[test]
        fn inverse_and_identity(x in coords(3, 200), e in 1u32..=3) {
            let h = catalog::heisenberg_powerful(p(5));
            let g = BchGroup::new(&h).unwrap();
            let a = el(&x, e);
            prop_assert!(g.mul(&a, &a.inverse()).unwrap().is_identity(p(5)));
            let id = GroupElement::identity(3, e);
            prop_assert!(g.mul(&a, &id).unwrap().same_as(&a, p(5)));
            prop_assert!(g.mul(&id, &a).unwrap().same_as(&a, p(5)));
        }

        #[test]
        fn scaling_carries_law_to_pl(x in coords(3, 50), y in coords(3, 50)) {
            // p·(x ∘_{pL} y) = (p x) ∘_L (p y), with pL in its own basis
            let q = p(5);
            let h = catalog::heisenberg_powerful(q);
            let pl = Sublattice::scaled_full(&h, 1).transported().unwrap();
            let big = BchGroup::new(&h).unwrap();
            let small = BchGroup::new(&pl).unwrap();
            let xr: Vec<Rational> = x.iter().map(|&v| rat(v)).collect();
            let yr: Vec<Rational> = y.iter().map(|&v| rat(v)).collect();
            let five = rat(5);
            let lhs: Vec<Rational> = small.mul_exact(&xr, &yr).iter().map(|v| v * &five).collect();
            let px: Vec<Rational> = xr.iter().map(|v| v * &five).collect();
            let py: Vec<Rational> = yr.iter().map(|v| v * &five).collect();
            prop_assert_eq!(lhs, big.mul_exact(&px, &py));
        }
    }
}
