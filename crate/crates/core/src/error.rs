use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension too large: {dim} exceeds the maximum of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("not Hermitian: asymmetry {0:e} exceeds tolerance")]
    NotHermitian(f64),

    #[error("eigensolver stalled after {0} sweeps")]
    EigensolverStalled(usize),

    #[error("not positive semidefinite: eigenvalue {0:e}")]
    NotPositiveSemidefinite(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parameter out of domain: {name} = {value}")]
    ParameterOutOfDomain { name: &'static str, value: f64 },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("no threshold in domain: g({lo}) = {g_lo:e}, g({hi}) = {g_hi:e}")]
    NoThreshold { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("region map inconsistent at p = {0}")]
    InconsistentRegion(f64),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigensolverStalled(_) | Error::NoThreshold { .. } | Error::InconsistentRegion(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
