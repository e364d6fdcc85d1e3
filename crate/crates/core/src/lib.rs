//! Exact spectral theory of the Kohn Laplacian `□_b` and the complex Green
//! operator `G` on the unit sphere `S^{2n−1} ⊂ C^n`.
//!
//! The crate is organized bottom-up:
//!
//! - [`scalar`] and [`polynomial`]: Gaussian-rational polynomial algebra in
//!   `z, z̄`, the ambient Laplacian, and exact sphere integrals.
//! - [`spectrum`]: closed-form eigenvalues and multiplicities.
//! - [`harmonic`]: brute-force harmonic bases by exact elimination, used as
//!   the independent oracle.
//! - [`operators`]: harmonic decomposition and the spectral action of
//!   `□_b`, `G`, `(I+Δ_S)^t` and Sobolev norms on polynomials.
//! - [`schatten`]: Schatten norms of `G` with certified brackets.
//! - [`sobolev`]: the ratio sequence and best constants for `G: H^s → H^{s+1}`.

pub mod error;
pub mod harmonic;
pub mod json;
mod linalg;
pub mod operators;
pub mod polynomial;
pub mod random;
pub mod scalar;
pub mod schatten;
pub mod sobolev;
pub mod spectrum;

pub use error::{Error, Result};
pub use polynomial::{sphere_inner_product, Bidegree, Monomial, Multiindex, Polynomial};
pub use scalar::ExactScalar;
