//! The mod-`ℓ` homology of `MGL` as a comodule: the coaction on the `b_n`,
//! the map `g̃`, regular-quotient bases, the Bockstein kernel, and bidegree
//! bookkeeping.

pub mod bockstein;
pub mod coaction;
pub mod gtilde;
pub mod psf;

pub use bockstein::{ker_bockstein_basis, pr_tau_duality_check, q0_contraction, KerBocksteinReport, PrTauReport};
pub use coaction::{
    act_on_projective_space, b_monomials, b_weight, coaction_generator, multinomial, q_on_projective_space,
    xi_projection, xi_sequences, xi_weight, CoactionReport, CoactionTensor, ComoduleMap, ComoduleMapReport, MglComodule,
    MglElement,
};
pub use gtilde::{g_tilde_matrix, quotient_homology_basis, GTildeMatrix, QuotientBasis};
pub use psf::BidegreeFamily;
