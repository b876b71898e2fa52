//! Cosine propagators `cos(t√(A₁² + … + Aₙ²))` assembled from one-dimensional
//! cosines `cos(tωᵢAᵢ)`.

pub mod commutative;
pub mod error;
pub mod fixtures;
pub mod operator;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod sum;
pub mod trotter;

pub use error::{Error, Result};
pub use operator::*;
