//! Exact sparse bigraded polynomial arithmetic and truncated power series.

pub mod coeff;
pub mod generator;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod series;

pub use coeff::CoeffRing;
pub use generator::{Cap, GeneratorSpec, GeneratorTable, GeneratorTableBuilder};
pub use monomial::{Bidegree, Monomial};
pub use poly::{GradedPoly, TermRecord};
pub use series::TruncatedSeries;
