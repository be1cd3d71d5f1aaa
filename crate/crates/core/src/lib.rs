//! Exact arithmetic for complex Hadamard matrices with root-of-unity
//! entries: constructions from spectral sets, Dita block detection,
//! equivalence invariants and affine families.
//!
//! Matrices are stored in log form. An entry `p` stands for `exp(2πi p)`
//! and is a fraction of a full turn reduced to `[0, 1)`.

pub mod catalog;
pub mod classification;
pub mod constructions;
pub mod cyclotomic;
pub mod equivalence;
pub mod error;
pub mod families;
pub mod io;
pub mod matrix;
pub mod phase;

pub use catalog::{catalog_load, catalog_save, CatalogEntry, Provenance};
pub use classification::{
    detect_dita_pattern, dn_equivalent, f12_orbit_exclusion_check, i_equivalent, is_dita_type, DitaDetector,
    DitaPattern, DitaReport, DitaSearch,
};
pub use constructions::{
    build_dita, dita_as_spectral_pair, grid_spectrum, is_spectrum, spectral_product, szabo_base_set,
    szabo_matrix, szabo_modified_spectrum, ElementSet, GroupSpec, SpectrumSet,
};
pub use equivalence::{brute_force_equivalent, EquivalenceOutcome};
pub use error::{Error, Result};
pub use families::{builtin_family, family_instantiate, family_verify, AffineExpression, AffineFamily, FamilyReport};
pub use matrix::{
    apply_equivalence, dephase, fourier_matrix, haagerup_invariant, is_hadamard, transpose, EquivalenceTransform,
    HaagerupInvariant, LogHadamardMatrix, PhaseMatrix,
};
pub use phase::{phase_add, phase_neg, sum_is_zero, PhaseRational, RootOfUnitySum};
