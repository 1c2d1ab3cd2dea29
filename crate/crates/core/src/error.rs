use thiserror::Error;

use crate::geometry::GeodesicPath;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates a documented window or precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The adaptive integrator could not make progress; the trajectory
    /// integrated so far is attached.
    #[error("step size underflow at arc length {at_length}")]
    StepUnderflow {
        at_length: f64,
        partial: Box<GeodesicPath>,
    },

    /// No geodesic from the fan reached the target point.
    #[error("no connecting geodesic found at sweep resolution {directions} (best miss {best_miss:e})")]
    NoConnectingGeodesic { directions: usize, best_miss: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
