//! The Hopf algebroid `(A, Γ)`: Milnor-basis arithmetic in `Γ`, the structure
//! maps `η_L, η_R, ε, Δ, ι`, and an axiom checker.

pub mod context;
pub mod element;
pub mod milnor;
pub mod verify;

pub use context::{a_table, gamma_table, is_prime, Mode, SteenrodContext};
pub use element::{GammaElement, TensorGamma};
pub use milnor::{Generator, MilnorMonomial};
pub use verify::{verify_hopf_axioms, AxiomFailure, HopfReport};
