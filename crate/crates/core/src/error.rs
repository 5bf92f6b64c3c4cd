use thiserror::Error;

/// Errors raised by geometry evaluation, fitting and I/O.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid signature {0:?}: exactly one entry must be -1 and the rest +1")]
    InvalidSignature([i8; 3]),

    #[error("zero vector has no causal character")]
    ZeroVector,

    #[error("cannot normalize a lightlike vector (<v,v> = {0:e})")]
    LightlikeNormalize(f64),

    #[error("division by a jet whose value {0:e} is too close to zero")]
    DivisionNearZero(f64),

    #[error("{op} is undefined at {value:e}")]
    DomainError { op: &'static str, value: f64 },

    #[error("partial derivative order ({0}, {1}) exceeds the jet truncation order")]
    OrderOutOfRange(usize, usize),

    #[error("point (s={s}, theta={theta}) is outside the domain: {locus}")]
    OutOfDomain { s: f64, theta: f64, locus: String },

    #[error("profile degenerates at s={s}: {reason}")]
    ProfileDegenerate { s: f64, reason: String },

    #[error("first fundamental form is degenerate (EG-F^2 = {0:e})")]
    DegenerateMetric(f64),

    #[error("surface normal is lightlike (<N,N> = {0:e})")]
    LightlikeNormal(f64),

    #[error("parabolic point (LN-M^2 = {0:e}), third fundamental form is unusable")]
    ParabolicPoint(f64),

    #[error("flat point (K = {0:e})")]
    FlatPoint(f64),

    #[error("shape operator has no real principal curvatures (H^2-K = {0:e})")]
    NonRealPrincipal(f64),

    #[error("only {accepted} samples accepted, need at least {required}")]
    TooFewSamples { accepted: usize, required: usize },

    #[error("design matrix is rank deficient (condition estimate {0:e})")]
    RankDeficient(f64),

    #[error("k'' = {0:e} is too close to zero")]
    DegenerateK(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that only disqualify a single chart point. Grid
    /// sampling skips such points instead of aborting.
    pub fn is_point_local(&self) -> bool {
        matches!(
            self,
            Error::LightlikeNormalize(_)
                | Error::DivisionNearZero(_)
                | Error::DomainError { .. }
                | Error::OutOfDomain { .. }
                | Error::DegenerateMetric(_)
                | Error::LightlikeNormal(_)
                | Error::ParabolicPoint(_)
                | Error::FlatPoint(_)
                | Error::NonRealPrincipal(_)
                | Error::DegenerateK(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
