//! Analysis over finite-dimensional real unital associative algebras.

pub mod algebra;
pub mod calculus;
pub mod error;
pub mod power_series;
pub mod registry;
pub mod series;
pub mod transcendental;

pub use algebra::{preset, Algebra, AlgebraSpec, Classification, Element};
pub use error::{Error, Result};
