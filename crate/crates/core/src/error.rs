use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("element code {code} out of range for F_{q}")]
    InvalidElement { code: u32, q: u32 },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("{0}: zero polynomial not allowed")]
    ZeroPolynomial(&'static str),

    #[error("{0}: constant polynomial not allowed")]
    ConstantPolynomial(&'static str),

    #[error("{0}: polynomial must be monic")]
    NotMonic(&'static str),

    #[error("{0}: polynomial must be irreducible")]
    NotIrreducible(&'static str),

    #[error("invalid Drinfeld module: {0}")]
    InvalidModule(String),

    #[error("degree guard exceeded: predicted degree {predicted} > limit {limit}")]
    DegreeGuard { predicted: u64, limit: u64 },

    #[error("equal-degree splitting failed after {attempts} attempts")]
    SplitBudgetExhausted { attempts: u32 },

    #[error("base 1 is a torsion point; the degree threshold is undefined")]
    TorsionBase,

    #[error("invalid degree range {min}..={max}")]
    EmptyRange { min: i64, max: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("annihilator chain law violated at k = {k}: {detail}")]
    ChainLaw { k: usize, detail: String },

    /// An identity that holds by theorem failed: an internal bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that indicate a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ChainLaw { .. } | Error::Invariant(_))
    }
}
