//! Exact arithmetic substrate: rationals, matrices, polynomials,
//! finite-dimensional algebras and bound quiver algebras.

pub mod algebra;
pub mod matrix;
pub mod poly;
pub mod quiver;
pub mod scalar;
pub mod snf;

pub use algebra::{FinDimAlgebra, Vector};
pub use matrix::{solve, Matrix, SolutionSpace};
pub use quiver::{Arrow, BoundQuiverAlgebra, Path};
pub use scalar::Scalar;
