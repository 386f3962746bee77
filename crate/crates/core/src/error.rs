use thiserror::Error;

use crate::padic::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("entry ({row}, {col}) is not p-integral")]
    NotPIntegral { row: usize, col: usize },

    /// Jacobi identity fails on the basis triple; `jacobiator` is
    /// `[[a_i,a_j],a_k] + [[a_j,a_k],a_i] + [[a_k,a_i],a_j]` in coordinates.
    #[error("not a Lie algebra: Jacobi identity fails on basis triple {triple:?}")]
    NotALieAlgebra {
        triple: (usize, usize, usize),
        jacobiator: Vec<Rational>,
    },

    /// Structure constant `c(i, j, k)` has negative valuation.
    #[error("not a lattice: structure constant c({i},{j},{k}) is not p-integral")]
    NotALattice { i: usize, j: usize, k: usize },

    #[error("not a sublattice: {0}")]
    NotASublattice(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("matrix is not a verified automorphism")]
    NotAnAutomorphism,

    #[error("invalid isomorphism: {0}")]
    InvalidIso(String),

    #[error("target basis does not span the image of the source sublattice")]
    BasisMismatch,

    #[error("budget exceeded after {partial} units of work")]
    Budget { partial: u64 },

    #[error("lattice is not powerful")]
    NotPowerful,

    #[error("unsupported nilpotency class: {0}")]
    UnsupportedClass(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    /// An identity that the mathematics guarantees has failed. Always a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Budget exhaustion is inconclusive rather than invalid.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }

    /// Stable machine-readable name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::SingularMatrix => "singular-matrix",
            Error::NotPIntegral { .. } => "not-p-integral",
            Error::NotALieAlgebra { .. } => "not-a-lie-algebra",
            Error::NotALattice { .. } => "not-a-lattice",
            Error::NotASublattice(_) => "not-a-sublattice",
            Error::InvalidMap(_) => "invalid-map",
            Error::NotAnAutomorphism => "not-an-automorphism",
            Error::InvalidIso(_) => "invalid-iso",
            Error::BasisMismatch => "basis-mismatch",
            Error::Budget { .. } => "budget-error",
            Error::NotPowerful => "not-powerful",
            Error::UnsupportedClass(_) => "unsupported-class",
            Error::NotASubgroup(_) => "not-a-subgroup",
            Error::Internal(_) => "internal-error",
        }
    }
}
