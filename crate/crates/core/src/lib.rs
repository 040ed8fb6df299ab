pub mod algebra;
pub mod cli;
pub mod emit;
pub mod error;
pub mod expr;
pub mod lazard;
pub mod mgl;
pub mod ops;
pub mod steenrod;
pub mod verify;

pub use error::{Error, Result};
