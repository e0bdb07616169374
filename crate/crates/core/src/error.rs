use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin: twice_s = {0} (must be in 1..={max})", max = crate::spin_algebra::MAX_TWICE_S)]
    InvalidSpin(u32),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not Hermitian (max |M - M†| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("Hermitian eigendecomposition did not converge")]
    EigenFailure,

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("degenerate superposition: the two components cancel (2 + 2Re<1|2> = {denominator:e})")]
    DegenerateSuperposition { denominator: f64 },

    #[error("z-parametrization is singular at theta = {theta} (pole guard)")]
    PoleSingularity { theta: f64 },

    #[error("angle {name} = {value} is out of range")]
    InvalidAngle { name: &'static str, value: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("density matrix has a negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("invalid spectrum: weights sum to {total}")]
    InvalidSpectrum { total: f64 },

    #[error("finite-difference step {0} outside [1e-6, 1e-2]")]
    InvalidStep(f64),

    #[error("likelihood has no unique maximum in the search window")]
    FlatLikelihood,

    #[error("invalid search window [{lo}, {hi}]: {reason}")]
    InvalidWindow { lo: f64, hi: f64, reason: String },

    #[error("no closed form for generator {generator} at this phase case")]
    UnsupportedSpecialCase { generator: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dataset is not a rectangular grid: {0}")]
    NotAGrid(String),

    #[error("degenerate statistics: {0}")]
    DegenerateStatistics(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by bad input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpin(_)
                | Error::InvalidAngle { .. }
                | Error::InvalidConfig(_)
                | Error::InvalidStep(_)
                | Error::InvalidWindow { .. }
                | Error::UnsupportedSpecialCase { .. }
                | Error::NotAGrid(_)
                | Error::DegenerateStatistics(_)
                | Error::Parse(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
