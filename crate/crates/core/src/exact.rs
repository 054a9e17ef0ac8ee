//! Packet-level reflection and transmission probabilities.
//!
//! For any incident packet with wave-number density `P(k)` and any potential
//! that is constant on both sides of the scattering region,
//!
//! ```text
//! R = ∫ P(k) R_k dk,    T = ∫ P(k) T_k dk,
//! ```
//!
//! where `R_k`, `T_k` are the plane-wave probabilities. This module evaluates
//! those integrals by adaptive quadrature and also provides the
//! approximations they are compared against: the `1/sigma^2` expansion for a
//! step and the bounce-counting estimate `2R/(1+R)` for a barrier that is
//! wide compared to the packet.
//!
//! Components with `k` below the transmission threshold are totally
//! reflected (`R_k = 1`, `T_k = 0`). Components with `k <= 0` already move
//! away from the scatterer and are counted as reflected as well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planewave::{local_wave_number, step_coefficients, transfer_matrix_solve};
use crate::potentials::PiecewisePotential;
use crate::quadrature::{integrate, QuadratureOptions};
use crate::result::{Method, ScatteringResult};
use crate::scalar::{two_m_over_hbar2, Real};
use crate::wavepacket::SpectralDensity;

/// Tolerance on `∫P(k) dk = 1` accepted by the exact integrals.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

/// Resonance nodes beyond this count are not used to pre-split the support.
pub const MAX_RESONANCE_NODES: usize = 100_000;

fn plane_wave_probabilities<T: Real>(pot: &PiecewisePotential<T>, k: T) -> (T, T) {
    if k <= T::zero() {
        return (T::one(), T::zero());
    }
    match transfer_matrix_solve(pot, k) {
        Ok(s) => (s.reflection, s.transmission),
        Err(_) => (T::nan(), T::nan()),
    }
}

/// Initial quadrature partition: support ends, density kinks, every region's
/// threshold, and every resonance node `q_j(k) d_j = n pi` of the interior regions.
fn partition<T: Real>(
    (lo, hi): (T, T),
    density_kinks: &[T],
    pot: &PiecewisePotential<T>,
) -> Vec<T> {
    let mut pts = vec![lo, hi, T::zero()];
    pts.extend_from_slice(density_kinks);
    let two_m = two_m_over_hbar2::<T>();
    for &v in pot.values() {
        if v > T::zero() {
            pts.push((two_m * v).sqrt());
        }
    }

    let k_lo = lo.max(T::zero());
    let mut budget = MAX_RESONANCE_NODES;
    for (start, end, v) in pot.interior_regions() {
        let d = end - start;
        // q(k)^2 = k^2 - 2 m v; nodes at q = n pi / d
        let q_of = |k: T| {
            let q2 = k * k - two_m * v;
            if q2 > T::zero() {
                q2.sqrt()
            } else {
                T::zero()
            }
        };
        let step = T::PI() / d;
        let n_lo = (q_of(k_lo) / step).ceil();
        let n_hi = (q_of(hi) / step).floor();
        if n_hi < n_lo {
            continue;
        }
        let count = (n_hi - n_lo)
            .to_usize()
            .unwrap_or(usize::MAX)
            .saturating_add(1);
        if count > budget {
            log::warn!("{count} resonance nodes in one region; not pre-splitting the quadrature");
            continue;
        }
        budget -= count;
        let mut n = n_lo;
        while n <= n_hi {
            let q = n * step;
            pts.push((q * q + two_m * v).sqrt());
            n = n + T::one();
        }
    }

    let mut pts: Vec<T> = pts
        .into_iter()
        .filter(|&k| k >= lo && k <= hi && k.is_finite())
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup();
    pts
}

fn check_normalized<T: Real, P: SpectralDensity<T> + ?Sized>(
    density: &P,
    pts: &[T],
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    let norm = integrate(|k| density.density(k), pts, opts)?;
    let tol = T::lit(NORMALIZATION_TOLERANCE);
    if (norm.value - T::one()).abs() > tol {
        return Err(Error::Unnormalized {
            norm: norm.value.to_f64_lossy(),
            tolerance: tol.to_f64_lossy(),
        });
    }
    Ok(norm.error)
}

fn spectral_average<T: Real, P: SpectralDensity<T> + ?Sized>(
    density: &P,
    pot: &PiecewisePotential<T>,
    opts: &QuadratureOptions<T>,
    pick: fn((T, T)) -> T,
) -> Result<(T, T)> {
    let (lo, hi) = density.support();
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(
            "density",
            "support must be a finite, non-empty interval",
        ));
    }
    let pts = partition((lo, hi), &density.breakpoints(), pot);
    let norm_err = check_normalized(density, &pts, opts)?;
    let integral = integrate(
        |k| density.density(k) * pick(plane_wave_probabilities(pot, k)),
        &pts,
        opts,
    )?;
    if !integral.value.is_finite() {
        return Err(Error::invalid(
            "potential",
            "plane-wave solver produced a non-finite value",
        ));
    }
    Ok((integral.value, integral.error + norm_err))
}

/// `R = ∫ P(k) R_k dk` with `R_k` from the transfer-matrix solver.
///
/// The reported transmission is `1 - R`; use [`exact_rt`] to integrate both.
pub fn exact_r<T: Real, P: SpectralDensity<T> + ?Sized>(
    density: &P,
    pot: &PiecewisePotential<T>,
) -> Result<ScatteringResult<T>> {
    let (r, err) = spectral_average(density, pot, &QuadratureOptions::default(), |(r, _)| r)?;
    Ok(ScatteringResult::new(
        r,
        T::one() - r,
        Method::ExactIntegral,
        err,
    ))
}

/// `T = ∫ P(k) T_k dk`, where `T_k` includes the flux factor `kappa/k`.
///
/// The reported reflection is `1 - T`.
pub fn exact_t<T: Real, P: SpectralDensity<T> + ?Sized>(
    density: &P,
    pot: &PiecewisePotential<T>,
) -> Result<ScatteringResult<T>> {
    let (t, err) = spectral_average(density, pot, &QuadratureOptions::default(), |(_, t)| t)?;
    Ok(ScatteringResult::new(
        T::one() - t,
        t,
        Method::ExactIntegral,
        err,
    ))
}

/// Both integrals evaluated independently. The error estimate is the sum
/// of the two quadrature estimates, so `|R + T - 1|` should not exceed it.
pub fn exact_rt<T: Real, P: SpectralDensity<T> + ?Sized>(
    density: &P,
    pot: &PiecewisePotential<T>,
) -> Result<ScatteringResult<T>> {
    let opts = QuadratureOptions::default();
    let (r, er) = spectral_average(density, pot, &opts, |(r, _)| r)?;
    let (t, et) = spectral_average(density, pot, &opts, |(_, t)| t)?;
    Ok(ScatteringResult::new(r, t, Method::ExactIntegral, er + et))
}

/// Truncated expansion of the step's packet probabilities in powers of `1/sigma^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesExpansion<T> {
    /// `(power of 1/sigma^2, coefficient)` pairs for `R`.
    pub terms: Vec<(u32, T)>,
    pub center: T,
    pub kappa0: T,
}

impl<T: Real> SeriesExpansion<T> {
    /// Terms of the `T` series: one minus the `R` series.
    pub fn transmission_terms(&self) -> Vec<(u32, T)> {
        self.terms
            .iter()
            .map(|&(p, c)| if p == 0 { (p, T::one() - c) } else { (p, -c) })
            .collect()
    }

    fn sum(terms: &[(u32, T)], sigma: T) -> T {
        let x = (sigma * sigma).recip();
        terms
            .iter()
            .fold(T::zero(), |acc, &(p, c)| acc + c * x.powi(p as i32))
    }

    pub fn reflection(&self, sigma: T) -> T {
        Self::sum(&self.terms, sigma)
    }

    pub fn transmission(&self, sigma: T) -> T {
        Self::sum(&self.transmission_terms(), sigma)
    }

    /// Heuristic truncation bound: `|first-order term| (10/(sigma k0))^2`.
    /// Not a rigorous bound.
    pub fn heuristic_error(&self, sigma: T) -> T {
        let first = self
            .terms
            .iter()
            .find(|(p, _)| *p == 1)
            .map_or(T::zero(), |&(_, c)| c / (sigma * sigma));
        let s = T::lit(10.0) / (sigma * self.center);
        first.abs() * s * s
    }

    pub fn to_result(&self, sigma: T) -> ScatteringResult<T> {
        ScatteringResult::new(
            self.reflection(sigma),
            self.transmission(sigma),
            Method::Series,
            self.heuristic_error(sigma),
        )
    }
}

/// Zeroth and first-order terms of `R(sigma)` for a Gaussian packet on a step:
///
/// `R = ((k0-kappa0)/(k0+kappa0))^2 + (2k0/kappa0^3 + 8/kappa0^2)((k0-kappa0)/(k0+kappa0))^2 / sigma^2`.
pub fn step_series<T: Real>(k0: T, v0: T, sigma: T) -> Result<SeriesExpansion<T>> {
    if !(k0 > T::zero()) {
        return Err(Error::invalid("k0", format!("must be positive, got {k0}")));
    }
    if !(sigma > T::zero()) {
        return Err(Error::invalid(
            "sigma",
            format!("must be positive, got {sigma}"),
        ));
    }
    let kappa = local_wave_number(k0, v0);
    if kappa.im != T::zero() || kappa.re == T::zero() {
        return Err(Error::BelowThreshold {
            k: k0.to_f64_lossy(),
            threshold: (two_m_over_hbar2::<T>() * v0).sqrt().to_f64_lossy(),
        });
    }
    let kappa0 = kappa.re;
    let ratio = (k0 - kappa0) / (k0 + kappa0);
    let r0 = ratio * ratio;
    let c1 = (T::lit(2.0) * k0 / kappa0.powi(3) + T::lit(8.0) / (kappa0 * kappa0)) * r0;
    let correction = c1 / (sigma * sigma);
    if r0 > T::zero() && correction.abs() > T::lit(0.1) * r0 {
        log::warn!(
            "sigma k0 = {} is small: the 1/sigma^2 term is {} of the plane-wave value",
            sigma * k0,
            correction / r0
        );
    }
    Ok(SeriesExpansion {
        terms: vec![(0, r0), (1, c1)],
        center: k0,
        kappa0,
    })
}

/// Least-squares fit of `values[i] - zeroth ≈ c / sigmas[i]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSquareFit<T> {
    pub coefficient: T,
    /// Largest residual `|y - c x|` over the fitted points; the part of the
    /// data not explained by the `1/sigma^2` term.
    pub max_residual: T,
}

pub fn fit_inverse_square<T: Real>(
    sigmas: &[T],
    values: &[T],
    zeroth: T,
) -> Result<InverseSquareFit<T>> {
    if sigmas.len() != values.len() || sigmas.is_empty() {
        return Err(Error::invalid(
            "fit",
            "need matching, non-empty sigma and value lists",
        ));
    }
    let xs: Vec<T> = sigmas.iter().map(|&s| (s * s).recip()).collect();
    let (sxy, sxx) = xs
        .iter()
        .zip(values)
        .fold((T::zero(), T::zero()), |(sxy, sxx), (&x, &y)| {
            (sxy + x * (y - zeroth), sxx + x * x)
        });
    let coefficient = sxy / sxx;
    let max_residual = xs
        .iter()
        .zip(values)
        .map(|(&x, &y)| (y - zeroth - coefficient * x).abs())
        .fold(T::zero(), T::max);
    Ok(InverseSquareFit {
        coefficient,
        max_residual,
    })
}

/// Total reflection from summing incoherent bounces inside a barrier:
/// `R + T R T + T R^3 T + ... = 2R/(1+R)` for step reflection `R`.
pub fn kinematic_barrier_r<T: Real>(r_step: T) -> Result<T> {
    if !(r_step >= T::zero() && r_step < T::one()) {
        return Err(Error::invalid(
            "R_step",
            format!("must lie in [0, 1), got {r_step}"),
        ));
    }
    Ok(T::lit(2.0) * r_step / (T::one() + r_step))
}

/// Bounce-counting estimate for a barrier of height `v0` at wave number `k0`.
pub fn kinematic_barrier<T: Real>(k0: T, v0: T) -> Result<ScatteringResult<T>> {
    let step = step_coefficients(k0, v0)?;
    let r = kinematic_barrier_r(step.reflection)?;
    Ok(ScatteringResult::new(
        r,
        T::one() - r,
        Method::Kinematic,
        T::zero(),
    ))
}

/// `∫ P(k) R_barrier(k) dk` for a rectangular barrier with all of `P` above the
/// barrier top. Approaches `2 R_step(k0)` when `Delta k a >> 1`.
pub fn averaged_barrier_r<T: Real, P: SpectralDensity<T> + ?Sized>(
    density: &P,
    v0: T,
    a: T,
) -> Result<ScatteringResult<T>> {
    let pot = PiecewisePotential::barrier(v0, a)?;
    let (lo, hi) = density.support();
    let threshold = if v0 > T::zero() {
        (two_m_over_hbar2::<T>() * v0).sqrt()
    } else {
        T::zero()
    };
    if lo <= threshold {
        return Err(Error::BelowThreshold {
            k: lo.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
        });
    }
    let opts = QuadratureOptions::default();
    let pts = [lo, hi];
    let mean = integrate(|k| k * density.density(k), &pts, &opts)?.value;
    let var = integrate(
        |k| (k - mean) * (k - mean) * density.density(k),
        &pts,
        &opts,
    )?
    .value;
    if var.sqrt() * a < T::lit(crate::wavepacket::MUCH_LARGER) {
        log::warn!(
            "Delta k a = {} is not large; the average will still track the plane-wave oscillation",
            var.sqrt() * a
        );
    }
    exact_r(density, &pot)
}

/// Predicted transmitted-to-incident width ratio `kappa0/k0` for a step,
/// equal to the ratio of group velocities.
pub fn width_ratio_prediction<T: Real>(k0: T, v0: T) -> Result<T> {
    if !(k0 > T::zero()) {
        return Err(Error::invalid("k0", format!("must be positive, got {k0}")));
    }
    let kappa = local_wave_number(k0, v0);
    if kappa.im != T::zero() {
        return Err(Error::BelowThreshold {
            k: k0.to_f64_lossy(),
            threshold: (two_m_over_hbar2::<T>() * v0).sqrt().to_f64_lossy(),
        });
    }
    Ok(kappa.re / k0)
}
