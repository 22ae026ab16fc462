//! Quantum dilogarithm family, classical and quantum ax+b intertwiners, and
//! numerical checks of their identities and classical limits.
//!
//! Everything is double precision. Integrals go through the adaptive contour
//! engine in [`numerics`], which reports an error estimate with every value.

pub mod axb;
pub mod cli;
pub mod corep;
pub mod error;
pub mod gamma;
pub mod numerics;
pub mod dilog;
pub mod qintertwiner;
pub mod verify;

pub type Complex = num_complex::Complex64;

pub use error::{Error, Result};
pub use numerics::contour::{integrate_contour, Contour, Detour, QuadResult, Side};
pub use dilog::param::{ModularParam, Regime};
pub use dilog::{Backend, QDValue};
