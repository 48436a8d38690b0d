//! Families of separated infinity-harmonic functions.
//!
//! The library builds product-form solutions u = Π fᵢ of the ∞-Laplace
//! equation in polar, spherical and Cartesian coordinates, evaluates them,
//! and verifies them against coordinate-native finite-difference operators.
//!
//! * [`profiles`] — the per-factor ODEs for logarithmic derivatives, their
//!   implicit antiderivative relations, adaptive integration into tables,
//!   and closed forms.
//! * [`solutions`] — assembled solution families, the closed-form catalogue,
//!   and point evaluation.
//! * [`verify`] — finite-difference ∞-Laplacian residuals, normalization and
//!   convergence-order estimation.
//! * [`gridio`] — coordinate transforms, lattice sampling and bit-stable
//!   CSV/JSON export.

pub mod error;
pub mod gridio;
pub mod profiles;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
