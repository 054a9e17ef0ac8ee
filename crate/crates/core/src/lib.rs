//! Reflection and transmission of 1-D wave packets from piecewise-constant
//! potentials.
//!
//! Three independent routes to `R` and `T` are provided:
//!
//! * [`planewave`]: stationary plane-wave amplitudes at a single wave number,
//!   in closed form for the step and rectangular barrier and by transfer
//!   matrices for any piecewise-constant potential.
//! * [`exact`]: the packet's probabilities as averages of the plane-wave
//!   probabilities over its wave-number density `P(k)`, plus the `1/sigma^2`
//!   expansion for the step and the bounce-counting estimate for wide
//!   barriers.
//! * [`tdse`]: direct split-step propagation of the packet on a grid, used
//!   as an oracle that shares no code with the other two.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`. Natural units `hbar = m = 1`.

// NaN must fail these guards, so `!(a < b)` is intended throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exact;
pub mod planewave;
pub mod potentials;
pub mod quadrature;
pub mod result;
pub mod scalar;
pub mod tdse;
pub mod wavepacket;

pub use error::{Error, Result};
pub use potentials::{make_barrier, make_step, PotentialRecord};
pub use result::Method;
pub use scalar::Real;

pub type PiecewisePotential = potentials::PiecewisePotential<f64>;
pub type PlaneWaveSolution = planewave::PlaneWaveSolution<f64>;
pub type TransferMatrix = planewave::TransferMatrix<f64>;
pub type GaussianPacket = wavepacket::GaussianPacket<f64>;
pub type SeriesExpansion = exact::SeriesExpansion<f64>;
pub type SimGrid = tdse::SimGrid<f64>;
pub type ScatteringResult = result::ScatteringResult<f64>;
