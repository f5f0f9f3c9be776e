use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("polynomial is not bounded by one: |P({at})| = {value}")]
    Unbounded { at: f64, value: f64 },

    #[error("polynomial parity violated: coefficient {index} = {value:e}")]
    Parity { index: usize, value: f64 },

    #[error("erf approximation for k = {k}, eta = {eta}: degree cap {cap} reached with sup error {achieved:e}")]
    DegreeCap {
        k: f64,
        eta: f64,
        cap: usize,
        achieved: f64,
    },

    #[error("gap certificate failed on the {segment} segment: {value} vs required {required}")]
    GapViolation {
        segment: &'static str,
        value: f64,
        required: f64,
    },

    #[error("step precondition violated: {0}")]
    StepPrecondition(String),

    #[error("angle {angle} is not on the arc from {start} to {end}")]
    OffArc { angle: f64, start: f64, end: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}

/// Fails with [`Error::InvalidParameter`] unless `ok` holds.
pub(crate) fn ensure(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(name, value, reason))
    }
}
