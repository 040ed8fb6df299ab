//! The universal formal group law over `ℤ[b_1, b_2, …]`, the image of the
//! Lazard ring, typicality tests and adequate generators.

pub mod fgl;
pub mod generators;
pub mod lattice;

pub use fgl::{b, b_table, c_table, ell_series, FglModel};
pub use generators::{
    find_adequate_generators, hl_basis_mod_ell, is_ell_power_minus_one, retraction_pi, CertificateEntry,
    GeneratorSet, Retraction,
};
pub use lattice::{
    canonical_typical, index_rule_holds, is_ell_typical, lazard_index_coefficient, partitions, prime_power,
    LazardElement, LazardLattice, TypicalityReport, WeightCoordinates,
};
