//! Covariant symbolic calculus on `X = SL(n,ℝ)/GL(n−1,ℝ)` realized in a truncated
//! basis of even spherical harmonics.
//!
//! Symbols live in `L²(S̃ × S̃)` and are stored as graded block matrices over
//! pairs of even degrees. The star product, the involution and the idempotents
//! reduce to exact block linear algebra once the intertwiner eigenvalues
//! `e_ℓ(σ)` and the normalization `d(σ)` are known, see [`intertwining`] and
//! [`star_algebra`].

pub mod cli;
pub mod error;
pub mod harmonics;
pub mod intertwining;
pub mod io;
pub mod quadrature;
pub mod random;
pub mod specfun;
pub mod star_algebra;
pub mod verify;

pub use error::{Error, Result};
pub use harmonics::HarmonicBasis;
pub use intertwining::CalculusConstants;
pub use quadrature::SphericalGrid;
pub use star_algebra::{KInvariantSymbol, OperatorMatrix, Symbol};

pub use num_complex::Complex64;
