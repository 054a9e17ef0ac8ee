//! Piecewise-constant 1-D potentials with constant asymptotic tails.

use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Potential made of `n + 1` constant regions separated by `n` boundaries.
///
/// Region `i` covers `[x_i, x_{i+1})`, so a boundary point belongs to the
/// region on its right. The leftmost region is the incident side and is
/// always normalized to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "PotentialRecord<T>",
    into = "PotentialRecord<T>",
    bound = "T: Real + Serialize + for<'a> Deserialize<'a>"
)]
pub struct PiecewisePotential<T> {
    boundaries: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> PiecewisePotential<T> {
    /// Builds a potential from boundaries and region values.
    ///
    /// Values are shifted so the left tail sits at zero.
    pub fn new(boundaries: Vec<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != boundaries.len() + 1 {
            return Err(Error::invalid(
                "values",
                format!(
                    "expected {} region values for {} boundaries, got {}",
                    boundaries.len() + 1,
                    boundaries.len(),
                    values.len()
                ),
            ));
        }
        if boundaries
            .iter()
            .chain(values.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::invalid("potential", "non-finite boundary or value"));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("boundaries", "must be strictly increasing"));
        }
        let shift = values[0];
        let values = values.into_iter().map(|v| v - shift).collect();
        Ok(Self { boundaries, values })
    }

    /// Zero potential everywhere.
    pub fn free() -> Self {
        Self {
            boundaries: Vec::new(),
            values: vec![T::zero()],
        }
    }

    /// Step of height `v0` at the origin.
    pub fn step(v0: T) -> Self {
        Self {
            boundaries: vec![T::zero()],
            values: vec![T::zero(), v0],
        }
    }

    /// Rectangular barrier (or well, for `v0 < 0`) on `[0, width)`.
    pub fn barrier(v0: T, width: T) -> Result<Self> {
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::invalid(
                "a",
                format!("barrier width must be positive, got {width}"),
            ));
        }
        Ok(Self {
            boundaries: vec![T::zero(), width],
            values: vec![T::zero(), v0, T::zero()],
        })
    }

    /// Value of the potential at `x`.
    pub fn evaluate(&self, x: T) -> T {
        // number of boundaries <= x selects the region
        let idx = self.boundaries.partition_point(|&b| b <= x);
        self.values[idx]
    }

    pub fn boundaries(&self) -> &[T] {
        &self.boundaries
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn region_count(&self) -> usize {
        self.values.len()
    }

    /// Asymptotic value on the incident side (always zero).
    pub fn left_value(&self) -> T {
        self.values[0]
    }

    /// Asymptotic value on the transmitted side.
    pub fn right_value(&self) -> T {
        *self.values.last().expect("at least one region")
    }

    /// First boundary, or `None` for a free particle.
    pub fn first_boundary(&self) -> Option<T> {
        self.boundaries.first().copied()
    }

    pub fn last_boundary(&self) -> Option<T> {
        self.boundaries.last().copied()
    }

    /// Extent `x_n - x_1` of the scattering region; zero for a step or free particle.
    pub fn scatterer_width(&self) -> T {
        match (self.first_boundary(), self.last_boundary()) {
            (Some(a), Some(b)) => b - a,
            _ => T::zero(),
        }
    }

    /// True when every region has the same value.
    pub fn is_free(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }

    /// Interior regions as `(start, end, value)`.
    pub fn interior_regions(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.boundaries
            .windows(2)
            .zip(self.values[1..].iter())
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// Smallest incident wave number whose energy exceeds the right tail;
    /// zero when the right tail is not above the left one.
    pub fn transmission_threshold(&self) -> T {
        let v = self.right_value();
        if v > T::zero() {
            (crate::scalar::two_m_over_hbar2::<T>() * v).sqrt()
        } else {
            T::zero()
        }
    }

    /// Casts the potential to another scalar type.
    pub fn cast<U: Real>(&self) -> PiecewisePotential<U> {
        let conv = |v: &T| U::lit(v.to_f64_lossy());
        PiecewisePotential {
            boundaries: self.boundaries.iter().map(conv).collect(),
            values: self.values.iter().map(conv).collect(),
        }
    }
}

/// Free-standing constructor mirroring [`PiecewisePotential::step`].
pub fn make_step<T: Real>(v0: T) -> PiecewisePotential<T> {
    PiecewisePotential::step(v0)
}

/// Free-standing constructor mirroring [`PiecewisePotential::barrier`].
pub fn make_barrier<T: Real>(v0: T, a: T) -> Result<PiecewisePotential<T>> {
    PiecewisePotential::barrier(v0, a)
}

/// Plain record form of a potential: the leading (left-tail) value followed
/// by `(boundary, value-to-the-right)` pairs.
///
/// The text form is `leading;x1:v1;x2:v2;...`, e.g. `0;0:1;100:0` for a
/// barrier of height 1 and width 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialRecord<T> {
    pub leading: T,
    #[serde(default = "Vec::new")]
    pub pieces: Vec<(T, T)>,
}

impl<T: Real> TryFrom<PotentialRecord<T>> for PiecewisePotential<T> {
    type Error = Error;

    fn try_from(rec: PotentialRecord<T>) -> Result<Self> {
        let (boundaries, mut rest): (Vec<T>, Vec<T>) = rec.pieces.into_iter().unzip();
        let mut values = Vec::with_capacity(rest.len() + 1);
        values.push(rec.leading);
        values.append(&mut rest);
        PiecewisePotential::new(boundaries, values)
    }
}

impl<T: Real> From<PiecewisePotential<T>> for PotentialRecord<T> {
    fn from(p: PiecewisePotential<T>) -> Self {
        PotentialRecord {
            leading: p.values[0],
            pieces: p
                .boundaries
                .iter()
                .copied()
                .zip(p.values[1..].iter().copied())
                .collect(),
        }
    }
}

impl<T: Real> fmt::Display for PotentialRecord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.leading)?;
        for (x, v) in &self.pieces {
            write!(f, ";{x}:{v}")?;
        }
        Ok(())
    }
}

impl<T: Real + FromStr> FromStr for PotentialRecord<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |tok: &str| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| Error::invalid("potential", format!("cannot parse number `{tok}`")))
        };
        let mut parts = s.split(';');
        let leading = parse(parts.next().unwrap_or(""))?;
        let mut pieces = Vec::new();
        for part in parts.filter(|p| !p.trim().is_empty()) {
            let (x, v) = part.split_once(':').ok_or_else(|| {
                Error::invalid("potential", format!("expected `x:v`, got `{part}`"))
            })?;
            pieces.push((parse(x)?, parse(v)?));
        }
        Ok(Self { leading, pieces })
    }
}

impl<T: Real + FromStr> FromStr for PiecewisePotential<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<PotentialRecord<T>>()?.try_into()
    }
}
