//! The quantum dilogarithm `G_b` and its variants, with numerical checks of
//! its identities, integral theorems and classical limits.

pub mod fb;
pub mod gb;
pub mod identities;
pub mod limits;
pub mod param;
pub mod product;
pub mod ruijsenaars;
pub mod variants;

use crate::Complex;
use serde::{Deserialize, Serialize};

pub use gb::{gb, gbv};
pub use product::gb_product;
pub use ruijsenaars::ruijsenaars_g;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Product,
    Integral,
    FunctionalContinuation,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Product => "product",
            Backend::Integral => "integral",
            Backend::FunctionalContinuation => "functional-continuation",
        }
    }
}

/// A `G_b`-family value with the backend that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDValue {
    pub value: Complex,
    pub backend: Backend,
    pub err_estimate: f64,
}
