use thiserror::Error;

/// Errors produced by the estimation engine.
///
/// Variants are grouped by how a caller should react: data problems
/// (bad input, unknown names, short samples) are user-fixable, while the
/// numerical variants signal that a regression or solver could not run on
/// the given configuration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("design matrix is rank deficient (rank {rank} < {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("unknown variable `{name}`; available: {available}")]
    UnknownVariable { name: String, available: String },

    #[error("sample too short: {0}")]
    TooShortSample(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("coordinate descent failed to converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error(
        "every penalty grid point selects more than {bound} variables (c = {c}); \
         tighten the selection bound"
    )]
    AllViolateBound { c: f64, bound: usize },

    #[error("insufficient degrees of freedom: {0}")]
    InsufficientDof(String),

    #[error("explosive coefficient matrix: spectral radius {rho:.6} >= 1")]
    ExplosiveDgp { rho: f64 },

    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("non-positive value under log transform in column `{column}`")]
    NonPositiveUnderLog { column: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Coarse classification used by the CLI to pick exit codes:
    /// data problems versus numerical failures.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::UnknownVariable { .. }
                | Error::TooShortSample(_)
                | Error::ParseError { .. }
                | Error::MissingData(_)
                | Error::NonPositiveUnderLog { .. }
                | Error::Io(_)
        )
    }

    /// Flag-level misuse (bad values or combinations) rather than a data or
    /// numerical problem.
    pub fn is_usage_error(&self) -> bool {
        matches!(self, Error::InvalidConfig(_) | Error::DomainError(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
