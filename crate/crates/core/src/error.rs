use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures of the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("cancellation rotation is undefined at zero magnetic field")]
    UndefinedCancellation,

    #[error(
        "spectrum truncation failed: window of {levels} levels exceeds the cap \
         with edge occupancy {edge_occupancy:e}"
    )]
    Truncation { levels: usize, edge_occupancy: f64 },

    #[error(
        "cannot place {electrons} electrons in a window of {capacity} levels \
         (deficit {deficit})"
    )]
    Capacity {
        electrons: f64,
        capacity: usize,
        deficit: f64,
    },

    #[error("chemical potential bisection ended with occupation residual {residual:e}")]
    NoConvergence { residual: f64 },

    #[error(
        "thermal state window [{state_lo}, {state_hi}] does not match spectrum \
         window [{spectrum_lo}, {spectrum_hi}]"
    )]
    WindowMismatch {
        state_lo: i64,
        state_hi: i64,
        spectrum_lo: i64,
        spectrum_hi: i64,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
