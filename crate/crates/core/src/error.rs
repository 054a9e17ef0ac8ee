use thiserror::Error;

/// Errors raised by the scattering routines.
///
/// Numerical payloads are stored as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wave number k = {k} is at or below the threshold {threshold} for this formula")]
    BelowThreshold { k: f64, threshold: f64 },

    #[error("spectral density is not normalized: integral = {norm} (tolerance {tolerance})")]
    Unnormalized { norm: f64, tolerance: f64 },

    #[error(
        "quadrature did not converge: estimated error {estimate} exceeds tolerance {tolerance}"
    )]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("grid under-resolves the packet: dx = {dx} but at most {max_dx} is required")]
    UnderResolved { dx: f64, max_dx: f64 },

    #[error("packet is clipped by the grid: edge density {density} exceeds {limit}")]
    PacketClipped { density: f64, limit: f64 },

    #[error("probability mass {mass} reached the grid boundary (limit {limit}); enlarge the grid")]
    BoundaryMass { mass: f64, limit: f64 },

    #[error("scattering has not finished: {reason}")]
    InteractionIncomplete { reason: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
