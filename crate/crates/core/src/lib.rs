//! Exact computations with `Z_p`-Lie lattices: Killing forms, sublattice
//! indices, automorphism determinants, brute-force isomorphism checks and
//! the Campbell–Hausdorff group law on powerful lattices.

pub mod error;
pub mod format;
pub mod group;
pub mod lattice;
pub mod oracle;
pub mod padic;
pub mod stability;
pub mod sublattice;

pub use error::{Error, Result};
pub use group::{bch_mul, group_index_check, BchConfig, BchGroup, GroupElement, GroupIndexReport};
pub use lattice::{catalog, LieLattice};
pub use oracle::{classify_mod_pk, enum_subalgebras, exhaustive_stability_check, EnumReport, IsoClassReport};
pub use padic::{hermite_p, smith_p, PValuation, Prime, QMatrix, Rational, SmithProfile};
pub use stability::{
    automorphism_check, index_ratio, iso_index_check, search_unstable_witness, serre_verdict, stability_certificate,
    AutoMap, IndexRatio, StabilityVerdict, Status,
};
pub use sublattice::Sublattice;
