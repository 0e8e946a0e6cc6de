use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("odd cat state with zero amplitude has no normalization")]
    OddScsAtZero,

    #[error("Fock cutoff {n_max} too small (tail mass {tail:.3e})")]
    CutoffTooSmall { n_max: usize, tail: f64 },

    #[error("state is not normalized (norm squared {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator sequence annihilates the state")]
    ZeroNorm,

    #[error("no closed form for sequence {0}")]
    NoClosedForm(String),

    #[error("output parity of {seq} cannot overlap the {target} target family")]
    ParityMismatch { seq: String, target: String },

    #[error("quadrature mean vanishes at lambda = {lambda}")]
    SingularQuadrature { lambda: f64 },

    #[error("state has zero Fisher information")]
    ZeroFisher,

    #[error("objective is not finite at x = {x}")]
    NonFinite { x: f64 },

    #[error("no sign change of the curve difference on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("unknown operator sequence {0:?}")]
    UnknownSequence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Numerical failures (as opposed to bad input) map to a distinct CLI exit status.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::CutoffTooSmall { .. }
                | Error::NoSignChange { .. }
                | Error::NonFinite { .. }
                | Error::ZeroNorm
                | Error::ZeroFisher
                | Error::SingularQuadrature { .. }
        )
    }
}
