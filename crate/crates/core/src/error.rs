use crate::Complex;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("quadrature budget exhausted: estimate {value} has error {err:.3e} > tol {tol:.3e}")]
    BudgetExhausted { value: Complex, err: f64, tol: f64 },
    #[error("pole at {0}")]
    Pole(Complex),
    #[error("zero at {0}")]
    Zero(Complex),
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("residue estimates disagree across radii: {a} vs {b}")]
    ResidueMismatch { a: Complex, b: Complex },
    #[error("integrand does not decay: {0}")]
    Decay(String),
    #[error("argument on branch cut: {0}")]
    Branch(String),
    #[error("divergent integral: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that come from the mathematics (poles, cuts, strips)
    /// rather than from the quadrature engine giving up.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::BudgetExhausted { .. } | Error::ResidueMismatch { .. })
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BudgetExhausted { .. } => "budget_exhausted",
            Error::Pole(_) => "pole",
            Error::Zero(_) => "zero",
            Error::NonFinite => "non_finite",
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::ResidueMismatch { .. } => "residue_mismatch",
            Error::Decay(_) => "decay",
            Error::Branch(_) => "branch",
            Error::Divergent(_) => "divergent",
        }
    }
}
