//! Sobolev-orthonormal function systems on the real line.
//!
//! Systems `φ_n(x) = i^n/√(2π) ∫ p_n(ξ) g(ξ) e^{ixξ} dξ` built from orthonormal
//! polynomials `p_n` of a weight `w` and a mollifier `g` with `v|g|² = w` are
//! orthonormal in the Sobolev inner product defined by `v`, and their
//! derivatives obey a tridiagonal skew-Hermitian law `φ' = Dφ`.

pub mod basis;
pub mod cascade;
pub mod coeffs;
pub mod diffmat;
pub mod error;
pub mod fastmt;
pub mod orthopoly;
pub mod ou;
pub mod sobolev;
pub mod weights;

pub use coeffs::CoefficientVector;
pub use error::{Error, Result};
