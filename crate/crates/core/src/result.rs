use core::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// How a [`ScatteringResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Stationary plane wave at the central wave number.
    PlaneWave,
    /// Spectral average of plane-wave probabilities over the packet's `P(k)`.
    ExactIntegral,
    /// Truncated `1/sigma^2` expansion.
    Series,
    /// Incoherent sum over successive bounces inside a barrier.
    Kinematic,
    /// Direct time-dependent propagation on a grid.
    Tdse,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PlaneWave => "plane-wave",
            Method::ExactIntegral => "exact-integral",
            Method::Series => "series",
            Method::Kinematic => "kinematic",
            Method::Tdse => "tdse",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reflection and transmission probabilities with provenance and an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringResult<T> {
    #[serde(rename = "R")]
    pub reflection: T,
    #[serde(rename = "T")]
    pub transmission: T,
    pub method: Method,
    pub err_estimate: T,
}

impl<T: Real> ScatteringResult<T> {
    pub fn new(reflection: T, transmission: T, method: Method, err_estimate: T) -> Self {
        Self {
            reflection,
            transmission,
            method,
            err_estimate,
        }
    }

    /// `|R + T - 1|`.
    pub fn conservation_defect(&self) -> T {
        (self.reflection + self.transmission - T::one()).abs()
    }
}
