//! Gaussian incident packets and generic wave-number densities.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planewave::transfer_matrix_solve;
use crate::potentials::PiecewisePotential;
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::Real;

/// Half-width of the k-space support, in units of `1/sigma`.
pub const K_SUPPORT_HALF_WIDTH: f64 = 8.0;

/// Packet centers closer than this many widths to the origin are rejected.
pub const MIN_SEPARATION: f64 = 3.0;
/// Packet centers closer than this many widths to the origin log a warning.
pub const SAFE_SEPARATION: f64 = 5.0;

/// A normalized probability density over incident wave numbers.
pub trait SpectralDensity<T: Real> {
    fn density(&self, k: T) -> T;

    /// Interval outside of which the density is treated as zero.
    fn support(&self) -> (T, T);

    /// Points where the density is not smooth (kinks of a tabulation).
    fn breakpoints(&self) -> Vec<T> {
        Vec::new()
    }
}

/// Incident Gaussian packet centered at `x = -a`:
/// `psi(x, 0) = (pi sigma^2)^{-1/4} exp(i k0 (x + a)) exp(-(x + a)^2 / 2 sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket<T> {
    pub k0: T,
    pub sigma: T,
    pub a: T,
}

impl<T: Real> GaussianPacket<T> {
    /// Validates `k0, sigma, a > 0` and `a >= 3 sigma`, warning below `5 sigma`.
    pub fn new(k0: T, sigma: T, a: T) -> Result<Self> {
        for (name, v) in [("k0", k0), ("sigma", sigma), ("a", a)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        if a < T::lit(MIN_SEPARATION) * sigma {
            return Err(Error::invalid(
                "a",
                format!("packet center {a} lies within {MIN_SEPARATION} widths (sigma = {sigma}) of the origin"),
            ));
        }
        if a < T::lit(SAFE_SEPARATION) * sigma {
            log::warn!(
                "packet center a = {a} is closer than {SAFE_SEPARATION} sigma to the scatterer; \
                 the initial packet overlaps x > 0"
            );
        }
        Ok(Self { k0, sigma, a })
    }

    /// Packet in the spatial representation at `t = 0`.
    pub fn position_amplitude(&self, x: T) -> Complex<T> {
        let u = x + self.a;
        let norm = (T::PI() * self.sigma * self.sigma).powf(T::lit(-0.25));
        let env = norm * (-(u * u) / (T::lit(2.0) * self.sigma * self.sigma)).exp();
        Complex::from_polar(env, self.k0 * u)
    }

    /// Fourier transform `(sigma^2/pi)^{1/4} exp(-(k - k0)^2 sigma^2 / 2) exp(i k a)`.
    pub fn spectral_amplitude(&self, k: T) -> Complex<T> {
        let u = (k - self.k0) * self.sigma;
        let norm = (self.sigma * self.sigma / T::PI()).powf(T::lit(0.25));
        Complex::from_polar(norm * (-(u * u) / T::lit(2.0)).exp(), k * self.a)
    }

    /// `P(k) = |phi(k, 0)|^2`.
    pub fn spectral_density(&self, k: T) -> T {
        let u = (k - self.k0) * self.sigma;
        self.sigma / T::PI().sqrt() * (-(u * u)).exp()
    }

    /// Standard deviation of `P(k)`: `1 / (sigma sqrt 2)`.
    pub fn k_std(&self) -> T {
        T::one() / (self.sigma * T::SQRT_2())
    }

    /// RMS width of `|psi(x, 0)|^2`: `sigma / sqrt 2`.
    pub fn position_rms(&self) -> T {
        self.sigma / T::SQRT_2()
    }

    /// Truncated support `[k0 - 8/sigma, k0 + 8/sigma]`.
    pub fn k_support(&self) -> (T, T) {
        let h = T::lit(K_SUPPORT_HALF_WIDTH) / self.sigma;
        (self.k0 - h, self.k0 + h)
    }

    /// Largest wave number the packet carries, `k0 + 8/sigma`.
    pub fn k_max(&self) -> T {
        self.k_support().1
    }

    pub fn cast<U: Real>(&self) -> GaussianPacket<U> {
        GaussianPacket {
            k0: U::lit(self.k0.to_f64_lossy()),
            sigma: U::lit(self.sigma.to_f64_lossy()),
            a: U::lit(self.a.to_f64_lossy()),
        }
    }
}

impl<T: Real> SpectralDensity<T> for GaussianPacket<T> {
    fn density(&self, k: T) -> T {
        self.spectral_density(k)
    }

    fn support(&self) -> (T, T) {
        self.k_support()
    }
}

/// Piecewise-linear density through tabulated `(k, P(k))` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity<T> {
    ks: Vec<T>,
    ps: Vec<T>,
}

impl<T: Real> TabulatedDensity<T> {
    /// Requires at least two strictly increasing `k` samples and non-negative values.
    pub fn new(ks: Vec<T>, ps: Vec<T>) -> Result<Self> {
        if ks.len() != ps.len() || ks.len() < 2 {
            return Err(Error::invalid(
                "table",
                "need at least two (k, P) samples of equal length",
            ));
        }
        if ks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(
                "table",
                "k samples must be strictly increasing",
            ));
        }
        if ps.iter().any(|&p| !(p >= T::zero()) || !p.is_finite()) {
            return Err(Error::invalid(
                "table",
                "densities must be finite and non-negative",
            ));
        }
        Ok(Self { ks, ps })
    }

    /// Samples `f` at `n` equally spaced points on `[lo, hi]`.
    pub fn sample<F: Fn(T) -> T>(f: F, lo: T, hi: T, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", "need at least two samples"));
        }
        let step = (hi - lo) / T::from_count(n - 1);
        let ks: Vec<T> = (0..n).map(|i| lo + step * T::from_count(i)).collect();
        let ps = ks.iter().map(|&k| f(k)).collect();
        Self::new(ks, ps)
    }

    /// Rescales the table so its piecewise-linear integral is one.
    pub fn normalized(mut self) -> Self {
        let area = self
            .ks
            .windows(2)
            .zip(self.ps.windows(2))
            .fold(T::zero(), |acc, (k, p)| {
                acc + (k[1] - k[0]) * (p[0] + p[1]) * T::lit(0.5)
            });
        if area > T::zero() {
            for p in &mut self.ps {
                *p = *p / area;
            }
        }
        self
    }
}

impl<T: Real> SpectralDensity<T> for TabulatedDensity<T> {
    fn density(&self, k: T) -> T {
        let n = self.ks.len();
        if k < self.ks[0] || k > self.ks[n - 1] {
            return T::zero();
        }
        let i = self.ks.partition_point(|&x| x <= k).clamp(1, n - 1);
        let (k0, k1) = (self.ks[i - 1], self.ks[i]);
        let w = (k - k0) / (k1 - k0);
        self.ps[i - 1] * (T::one() - w) + self.ps[i] * w
    }

    fn support(&self) -> (T, T) {
        (self.ks[0], self.ks[self.ks.len() - 1])
    }

    fn breakpoints(&self) -> Vec<T> {
        self.ks.clone()
    }
}

/// Density given by a closure on an explicit support.
pub struct FnDensity<T, F> {
    pub f: F,
    pub lo: T,
    pub hi: T,
}

impl<T: Real, F: Fn(T) -> T> SpectralDensity<T> for FnDensity<T, F> {
    fn density(&self, k: T) -> T {
        if k < self.lo || k > self.hi {
            T::zero()
        } else {
            (self.f)(k)
        }
    }

    fn support(&self) -> (T, T) {
        (self.lo, self.hi)
    }
}

/// Which approximation a packet/potential pair supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Packet much wider than the wavelength and than the scatterer.
    PlaneWave,
    /// Packet narrow compared to the barrier but wide compared to the wavelength.
    BarrierAveraging,
    /// Wavelength-resolved packet comparable in size to the scatterer.
    Mixed,
    /// Packet too narrow to be treated as a plane wave anywhere.
    Unresolved,
}

/// Factor standing in for "much larger than" in the regime checks.
pub const MUCH_LARGER: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport<T> {
    /// `sigma k0`: packet width over de Broglie wavelength, times `2 pi`.
    pub sigma_k0: T,
    /// `sigma / (x_n - x_1)` for finite-width scatterers.
    pub sigma_over_width: Option<T>,
    /// `Delta k (x_n - x_1)` with `Delta k = 1/(sigma sqrt 2)`.
    pub dk_times_width: Option<T>,
    /// `k0 / Delta k`.
    pub k0_over_dk: T,
    /// Probability mass of `P(k)` below the transmission threshold.
    pub below_threshold_fraction: T,
    /// `1 / |dT_k/dk|` at `k0`: wave-number scale over which `T_k` changes
    /// by order one. `None` when `T_k` is flat there.
    pub velocity_scale: Option<T>,
    pub plane_wave_valid: bool,
    pub barrier_averaging: bool,
    pub regime: Regime,
}

/// Dimensionless diagnostics deciding which approximations apply.
pub fn validity_report<T: Real>(
    p: &GaussianPacket<T>,
    pot: &PiecewisePotential<T>,
) -> Result<ValidityReport<T>> {
    let big = T::lit(MUCH_LARGER);
    let sigma_k0 = p.sigma * p.k0;
    let dk = p.k_std();
    let width = pot.scatterer_width();
    let finite = width > T::zero();
    let sigma_over_width = finite.then(|| p.sigma / width);
    let dk_times_width = finite.then(|| dk * width);
    let k0_over_dk = p.k0 / dk;

    let (lo, hi) = p.k_support();
    let threshold = pot.transmission_threshold();
    let below_threshold_fraction = if threshold <= lo {
        T::zero()
    } else {
        integrate(
            |k| p.spectral_density(k),
            &[lo, threshold.min(hi)],
            &QuadratureOptions::default(),
        )?
        .value
    };

    let velocity_scale = {
        let h = p.k0 * T::lit(1e-5);
        let tk = |k: T| transfer_matrix_solve(pot, k).map(|s| s.transmission);
        if p.k0 - h > T::zero() {
            let slope = (tk(p.k0 + h)? - tk(p.k0 - h)?) / (T::lit(2.0) * h);
            (slope.abs() > T::epsilon().sqrt()).then(|| slope.abs().recip())
        } else {
            None
        }
    };

    // sigma >> lambda0 = 2 pi / k0
    let resolved = sigma_k0 >= big * T::TAU();
    let plane_wave_valid = resolved && sigma_over_width.is_none_or(|r| r >= big);
    let barrier_averaging = dk_times_width.is_some_and(|x| x >= big) && k0_over_dk >= big;
    let regime = if plane_wave_valid {
        Regime::PlaneWave
    } else if barrier_averaging {
        Regime::BarrierAveraging
    } else if finite && resolved {
        Regime::Mixed
    } else {
        Regime::Unresolved
    };

    Ok(ValidityReport {
        sigma_k0,
        sigma_over_width,
        dk_times_width,
        k0_over_dk,
        below_threshold_fraction,
        velocity_scale,
        plane_wave_valid,
        barrier_averaging,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn packet() -> GaussianPacket<f64> {
        GaussianPacket::new(2.0, 1.5, 10.0).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(GaussianPacket::new(0.0, 1.0, 10.0).is_err());
        assert!(GaussianPacket::new(1.0, -1.0, 10.0).is_err());
        assert!(GaussianPacket::new(1.0, 1.0, 0.0).is_err());
        assert!(GaussianPacket::new(1.0, 1.0, 2.9).is_err());
        // warns only
        assert!(GaussianPacket::new(1.0, 1.0, 4.0).is_ok());
    }

    #[test]
    fn position_peak_and_width() {
        let p = packet();
        let peak = (core::f64::consts::PI * p.sigma * p.sigma).powf(-0.25);
        assert_relative_eq!(p.position_amplitude(-p.a).norm(), peak, epsilon = 1e-15);
        for x in [-p.a - p.sigma, -p.a + p.sigma] {
            assert_relative_eq!(
                p.position_amplitude(x).norm() / peak,
                (-0.5_f64).exp(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn position_norm_by_quadrature() {
        let p = packet();
        let lo = -p.a - 10.0 * p.sigma;
        let hi = -p.a + 10.0 * p.sigma;
        let r = integrate(
            |x| p.position_amplitude(x).norm_sqr(),
            &[lo, -p.a, hi],
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn spectral_peak_and_norm() {
        let p = packet();
        let peak = (p.sigma * p.sigma / core::f64::consts::PI).powf(0.25);
        assert_relative_eq!(p.spectral_amplitude(p.k0).norm(), peak, epsilon = 1e-15);
        let (lo, hi) = p.k_support();
        let r = integrate(
            |k| p.spectral_amplitude(k).norm_sqr(),
            &[lo, hi],
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn spectral_amplitude_is_fourier_transform_of_position() {
        // phi(k) = (2 pi)^{-1/2} int psi(x) e^{-ikx} dx, by a Riemann sum on
        // a fine grid (spectrally accurate for a Gaussian)
        let p = packet();
        let n = 4096;
        let lo = -p.a - 20.0 * p.sigma;
        let dx = 40.0 * p.sigma / n as f64;
        let samples: Vec<(f64, Complex<f64>)> = (0..n)
            .map(|j| {
                let x = lo + dx * j as f64;
                (x, p.position_amplitude(x))
            })
            .collect();
        for i in 0..40 {
            let k = p.k0 - 3.0 + 0.15 * i as f64;
            let sum: Complex<f64> = samples
                .iter()
                .map(|&(x, psi)| psi * Complex::from_polar(1.0, -k * x))
                .sum();
            let ft = sum * dx / (2.0 * core::f64::consts::PI).sqrt();
            assert!((ft - p.spectral_amplitude(k)).norm() < 1e-8, "k = {k}");
        }
    }

    #[test]
    fn density_moments() {
        let p = packet();
        let (lo, hi) = p.k_support();
        let o = QuadratureOptions::default();
        let m0 = integrate(|k| p.spectral_density(k), &[lo, hi], &o)
            .unwrap()
            .value;
        let m2 = integrate(
            |k| (k - p.k0).powi(2) * p.spectral_density(k),
            &[lo, hi],
            &o,
        )
        .unwrap()
        .value;
        assert_relative_eq!(m0, 1.0, epsilon = 1e-12);
        assert_relative_eq!(m2.sqrt(), p.k_std(), max_relative = 1e-10);
        assert_relative_eq!(
            p.spectral_density(p.k0) / p.spectral_density(p.k0 + 1.0 / p.sigma),
            core::f64::consts::E,
            max_relative = 1e-14
        );
    }

    #[test]
    fn tabulated_density_interpolates() {
        let t = TabulatedDensity::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(t.density(0.5), 0.5);
        assert_eq!(t.density(1.0), 1.0);
        assert_eq!(t.density(1.75), 0.25);
        assert_eq!(t.density(2.5), 0.0);
        assert_eq!(t.support(), (0.0, 2.0));
        assert!(TabulatedDensity::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(TabulatedDensity::new(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn validity_examples() {
        let step = PiecewisePotential::<f64>::step(0.5);
        let wide = GaussianPacket::new(2.0, 5000.0, 30000.0).unwrap();
        let r = validity_report(&wide, &step).unwrap();
        assert_relative_eq!(r.sigma_k0, 1e4);
        assert!(r.plane_wave_valid);
        assert_eq!(r.regime, Regime::PlaneWave);
        assert_eq!(r.below_threshold_fraction, 0.0);

        let barrier = PiecewisePotential::<f64>::barrier(1.0, 100.0).unwrap();
        let narrow = GaussianPacket::new(10.0, 1.0, 20.0).unwrap();
        let r = validity_report(&narrow, &barrier).unwrap();
        assert!(r.barrier_averaging);
        assert!(!r.plane_wave_valid);
        assert_eq!(r.regime, Regime::BarrierAveraging);
        assert_relative_eq!(
            r.dk_times_width.unwrap(),
            100.0 / 2.0_f64.sqrt(),
            max_relative = 1e-14
        );

        let tiny = GaussianPacket::new(2.0, 1.0, 10.0).unwrap();
        let r = validity_report(&tiny, &step).unwrap();
        assert!(!r.plane_wave_valid && !r.barrier_averaging);
        assert_eq!(r.regime, Regime::Unresolved);

        let comparable = GaussianPacket::new(10.0, 100.0, 600.0).unwrap();
        let r = validity_report(&comparable, &barrier).unwrap();
        assert_eq!(r.regime, Regime::Mixed);
    }

    #[test]
    fn threshold_fraction_half_at_center() {
        // threshold sqrt(2 V0) placed exactly at k0
        let p = GaussianPacket::new(2.0, 3.0, 20.0).unwrap();
        let r = validity_report(&p, &PiecewisePotential::<f64>::step(2.0)).unwrap();
        assert_relative_eq!(r.below_threshold_fraction, 0.5, epsilon = 1e-10);
        // T_k has a square-root edge here; the slope is huge
        assert!(r.velocity_scale.unwrap() < 1e-2);
    }

    proptest! {
        #[test]
        fn parseval(k0 in 0.5f64..20.0, sigma in 0.3f64..30.0) {
            let p = GaussianPacket::new(k0, sigma, 6.0 * sigma).unwrap();
            let o = QuadratureOptions::default();
            let xs = [-p.a - 12.0 * sigma, -p.a, -p.a + 12.0 * sigma];
            let xn = integrate(|x| p.position_amplitude(x).norm_sqr(), &xs, &o).unwrap().value;
            let (lo, hi) = p.k_support();
            let kn = integrate(|k| p.spectral_amplitude(k).norm_sqr(), &[lo, p.k0, hi], &o).unwrap().value;
            prop_assert!((xn - kn).abs() < 1e-10);
        }

        #[test]
        fn translation_phase(k in -5.0f64..25.0, d in 0.0f64..50.0) {
            let p = GaussianPacket::new(10.0, 1.0, 10.0).unwrap();
            let q = GaussianPacket::new(10.0, 1.0, 10.0 + d).unwrap();
            let expect = p.spectral_amplitude(k) * Complex::from_polar(1.0, k * d);
            prop_assert!((q.spectral_amplitude(k) - expect).norm() < 1e-12);
            prop_assert_eq!(q.spectral_density(k), p.spectral_density(k));
        }

        #[test]
        fn density_peaks_at_k0(k0 in 0.5f64..20.0, sigma in 0.3f64..30.0, dk in 1e-6f64..5.0) {
            let p = GaussianPacket::new(k0, sigma, 6.0 * sigma).unwrap();
            prop_assert!(p.spectral_density(k0) > p.spectral_density(k0 + dk));
            prop_assert!(p.spectral_density(k0) > p.spectral_density(k0 - dk));
        }
    }
}
