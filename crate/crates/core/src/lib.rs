//! Exact invariants of Bott towers.
//!
//! A tower of height k is a triangular integer list a(i,j); this crate
//! computes its integral cohomology ring, complex K-theory over Z[z,z⁻¹],
//! the mod-2 Steenrod Sq² structure with the sphere/CP² summand counts,
//! KO-theory presentations for the totally even and terminally odd
//! families, and the classification of the 2^{2k} stably complex structures
//! induced by omniorientations. Everything is exact: coefficients are big
//! integers, big rationals, or normal forms in the KO coefficient ring.

pub mod coeffs;
pub mod cohom;
pub mod error;
pub mod kotheory;
pub mod ktheory;
pub mod steenrod;
pub mod structures;
pub mod towers;

pub use coeffs::{
    IntegerScalar, KOScalar, KoToken, LaurentScalar, RationalLaurentScalar, Scalar, F2,
};
pub use cohom::{
    chern_numbers, euler_characteristic, evaluate_fundamental, h_algebra, partitions, total_chern,
    GradedClass, Partition, QuotientAlgebra,
};
pub use error::BottError;
pub use kotheory::{ko_minus2_basis, KoMinus2, NIndex, TeRing, ToClass, ToGenerator, ToRing};
pub use ktheory::{KClass, KTheory};
pub use steenrod::{bb_profile, ko_groups_from_bb, sq2, BBProfile, GroupDescriptor};
pub use structures::verify::{verify_all, verify_family, verify_random_lists, Check, Family};
pub use structures::{
    almost_complex_count, enumerate_structures, szczarba_check, EnumOptions, EnumerationReport,
    UStructureRecord, DEFAULT_CAP,
};
pub use towers::{BottList, LineBundleWord, Omniorientation, Parity};
