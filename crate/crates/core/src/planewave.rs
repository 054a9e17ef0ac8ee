//! Stationary scattering of a single plane wave `e^{ikx}` incident from the left.
//!
//! Closed forms cover the step and the rectangular barrier; arbitrary
//! piecewise-constant potentials go through [`transfer_matrix_solve`].
//! Transmission probabilities always carry the flux factor
//! `Re(kappa_right)/k`: `|t|^2` alone is only correct when both asymptotic
//! regions have the same wave number.

use core::ops::Mul;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::potentials::PiecewisePotential;
use crate::result::{Method, ScatteringResult};
use crate::scalar::{energy_of, wave_number_sq, Real};

/// Wave number in a region of constant potential `v` for incident wave number `k`.
///
/// Returns `sqrt(k^2 - 2mV/hbar^2)` on the real axis when the energy is above
/// `v`, and on the positive imaginary axis otherwise (decaying to the right).
pub fn local_wave_number<T: Real>(k: T, v: T) -> Complex<T> {
    let q2 = wave_number_sq(energy_of(k), v);
    if q2 >= T::zero() {
        Complex::new(q2.sqrt(), T::zero())
    } else {
        Complex::new(T::zero(), (-q2).sqrt())
    }
}

fn check_k<T: Real>(k: T) -> Result<()> {
    if k > T::zero() && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "k",
            format!("incident wave number must be positive, got {k}"),
        ))
    }
}

/// Amplitudes and probabilities for one incident wave number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSolution<T> {
    /// Incident wave number (left region).
    pub k: T,
    /// Wave number in the right asymptotic region; imaginary below its threshold.
    pub kappa: Complex<T>,
    /// Reflection amplitude `B/A`.
    pub r: Complex<T>,
    /// Transmission amplitude `C/A`.
    pub t: Complex<T>,
    pub reflection: T,
    pub transmission: T,
}

impl<T: Real> PlaneWaveSolution<T> {
    /// True when nothing propagates on the right (`kappa` not real and positive).
    pub fn is_total_reflection(&self) -> bool {
        !(self.kappa.im == T::zero() && self.kappa.re > T::zero())
    }

    fn from_amplitudes(k: T, kappa: Complex<T>, r: Complex<T>, t: Complex<T>) -> Self {
        let mut sol = Self {
            k,
            kappa,
            r,
            t,
            reflection: r.norm_sqr(),
            transmission: kappa.re / k * t.norm_sqr(),
        };
        if sol.is_total_reflection() {
            sol.reflection = T::one();
            sol.transmission = T::zero();
        }
        sol
    }

    pub fn to_result(&self) -> ScatteringResult<T> {
        ScatteringResult::new(
            self.reflection,
            self.transmission,
            Method::PlaneWave,
            T::zero(),
        )
    }
}

/// Amplitudes `r = (k - kappa)/(k + kappa)`, `t = 2k/(k + kappa)` for a step of height `v0`.
pub fn step_amplitudes<T: Real>(k: T, v0: T) -> Result<PlaneWaveSolution<T>> {
    check_k(k)?;
    let kappa = local_wave_number(k, v0);
    let kc = Complex::new(k, T::zero());
    let r = (kc - kappa) / (kc + kappa);
    let t = kc * T::lit(2.0) / (kc + kappa);
    Ok(PlaneWaveSolution::from_amplitudes(k, kappa, r, t))
}

/// Closed-form step probabilities `R = ((k-kappa)/(k+kappa))^2`, `T = 4 k kappa/(k+kappa)^2`.
pub fn step_coefficients<T: Real>(k: T, v0: T) -> Result<ScatteringResult<T>> {
    check_k(k)?;
    let kappa = local_wave_number(k, v0);
    if kappa.im != T::zero() || kappa.re == T::zero() {
        return Ok(ScatteringResult::new(
            T::one(),
            T::zero(),
            Method::PlaneWave,
            T::zero(),
        ));
    }
    let kappa = kappa.re;
    let sum = k + kappa;
    let ratio = (k - kappa) / sum;
    Ok(ScatteringResult::new(
        ratio * ratio,
        T::lit(4.0) * k * kappa / (sum * sum),
        Method::PlaneWave,
        T::zero(),
    ))
}

/// Probability current `(hbar k / m) |amplitude|^2` of a plane wave.
pub fn plane_wave_current<T: Real>(amplitude: Complex<T>, k: T) -> T {
    group_velocity(k) * amplitude.norm_sqr()
}

/// `R` and `T` as ratios of reflected and transmitted currents to the incident one.
pub fn current_ratios<T: Real>(sol: &PlaneWaveSolution<T>) -> ScatteringResult<T> {
    let one = Complex::new(T::one(), T::zero());
    let incident = plane_wave_current(one, sol.k);
    let reflected = plane_wave_current(sol.r, sol.k).abs();
    let transmitted = if sol.is_total_reflection() {
        T::zero()
    } else {
        plane_wave_current(sol.t, sol.kappa.re)
    };
    let (r, t) = if sol.is_total_reflection() {
        (T::one(), T::zero())
    } else {
        (reflected / incident, transmitted / incident)
    };
    ScatteringResult::new(r, t, Method::PlaneWave, T::zero())
}

/// Group velocity `hbar k / m`.
#[inline]
pub fn group_velocity<T: Real>(k: T) -> T {
    k
}

/// Plane-wave reflection from a rectangular barrier of height `v0` and width `a`,
/// for incident energy above the barrier top:
///
/// `R = (k^2 - kappa^2)^2 sin^2(kappa a) / [4 k^2 kappa^2 + (k^2 - kappa^2)^2 sin^2(kappa a)]`.
pub fn barrier_reflection<T: Real>(k: T, v0: T, a: T) -> Result<ScatteringResult<T>> {
    check_k(k)?;
    if !(a >= T::zero()) || !a.is_finite() {
        return Err(Error::invalid(
            "a",
            format!("barrier width must be non-negative, got {a}"),
        ));
    }
    let kappa = local_wave_number(k, v0);
    if kappa.im != T::zero() || kappa.re == T::zero() {
        return Err(Error::BelowThreshold {
            k: k.to_f64_lossy(),
            threshold: (T::lit(2.0) * v0).sqrt().to_f64_lossy(),
        });
    }
    let kappa = kappa.re;
    let diff = k * k - kappa * kappa;
    let s = (kappa * a).sin();
    let num = diff * diff * s * s;
    let den = T::lit(4.0) * k * k * kappa * kappa + num;
    let r = num / den;
    Ok(ScatteringResult::new(
        r,
        T::lit(4.0) * k * k * kappa * kappa / den,
        Method::PlaneWave,
        T::zero(),
    ))
}

/// 2x2 complex matrix acting on `(rightward, leftward)` amplitude pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> TransferMatrix<T> {
    pub fn identity() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Self {
            m: [[o, z], [z, o]],
        }
    }

    /// Matching across a boundary from wave number `q_left` to `q_right`
    /// (continuity of `psi` and `psi'`). Determinant is `q_left / q_right`.
    pub fn interface(q_left: Complex<T>, q_right: Complex<T>) -> Self {
        let half = T::lit(0.5);
        let rho = q_left / q_right;
        let one = Complex::new(T::one(), T::zero());
        let p = (one + rho) * half;
        let m = (one - rho) * half;
        Self {
            m: [[p, m], [m, p]],
        }
    }

    /// Propagation across a region of length `d` with wave number `q`,
    /// factored as `exp(log_scale) * matrix` so evanescent growth never overflows.
    pub fn propagation_scaled(q: Complex<T>, d: T) -> (Self, T) {
        // e^{iqd} = e^{i Re(q) d} e^{-Im(q) d}; pull out e^{|Im(q)| d}
        let growth = q.im.abs() * d;
        let phase = q.re * d;
        let fwd = Complex::from_polar(T::one(), phase) * (-q.im * d - growth).exp();
        let bwd = Complex::from_polar(T::one(), -phase) * (q.im * d - growth).exp();
        let z = Complex::new(T::zero(), T::zero());
        (
            Self {
                m: [[fwd, z], [z, bwd]],
            },
            growth,
        )
    }

    /// Unscaled propagation matrix `diag(e^{iqd}, e^{-iqd})`.
    pub fn propagation(q: Complex<T>, d: T) -> Self {
        let (m, log_scale) = Self::propagation_scaled(q, d);
        m.scale(log_scale.exp())
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    fn scale(mut self, s: T) -> Self {
        for row in self.m.iter_mut() {
            for e in row.iter_mut() {
                *e = *e * s;
            }
        }
        self
    }

    fn max_norm(&self) -> T {
        self.m
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> Mul for TransferMatrix<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        Self {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

/// Product of transfer matrices held as `exp(log_scale) * matrix`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledTransfer<T> {
    pub matrix: TransferMatrix<T>,
    pub log_scale: T,
}

impl<T: Real> ScaledTransfer<T> {
    pub fn identity() -> Self {
        Self {
            matrix: TransferMatrix::identity(),
            log_scale: T::zero(),
        }
    }

    /// Left-multiplies by `next` (applied after everything composed so far).
    pub fn then(self, next: TransferMatrix<T>, next_log_scale: T) -> Self {
        let matrix = next * self.matrix;
        let norm = matrix.max_norm();
        if norm > T::zero() && norm.is_finite() {
            Self {
                matrix: matrix.scale(norm.recip()),
                log_scale: self.log_scale + next_log_scale + norm.ln(),
            }
        } else {
            Self {
                matrix,
                log_scale: self.log_scale + next_log_scale,
            }
        }
    }
}

fn nudge_from_zero<T: Real>(q: Complex<T>, k: T) -> Complex<T> {
    // a region exactly at its threshold has a linear (not exponential)
    // solution; a tiny real wave number reproduces it to roundoff
    if q.norm() <= T::epsilon() * k {
        Complex::new(T::epsilon().sqrt() * k, T::zero())
    } else {
        q
    }
}

/// Solves plane-wave scattering through an arbitrary piecewise-constant
/// potential by composing interface and propagation matrices left to right,
/// with no wave incoming from the right.
///
/// Energies below the right tail are reported as total reflection.
pub fn transfer_matrix_solve<T: Real>(
    pot: &PiecewisePotential<T>,
    k: T,
) -> Result<PlaneWaveSolution<T>> {
    check_k(k)?;
    let values = pot.values();
    let bounds = pot.boundaries();
    let kappa = local_wave_number(k, pot.right_value());
    if bounds.is_empty() {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        return Ok(PlaneWaveSolution::from_amplitudes(k, kappa, zero, one));
    }

    // amplitudes in region j are referenced to its left boundary
    // (the first boundary for the leftmost region)
    let qs: Vec<Complex<T>> = values
        .iter()
        .map(|&v| nudge_from_zero(local_wave_number(k, v), k))
        .collect();
    let mut acc = ScaledTransfer::identity();
    acc = acc.then(TransferMatrix::interface(qs[0], qs[1]), T::zero());
    for j in 1..bounds.len() {
        let (prop, growth) = TransferMatrix::propagation_scaled(qs[j], bounds[j] - bounds[j - 1]);
        acc = acc.then(prop, growth);
        acc = acc.then(TransferMatrix::interface(qs[j], qs[j + 1]), T::zero());
    }

    let m = acc.matrix.m;
    let r = -m[1][0] / m[1][1];
    // det of the full product is q_0 / q_N
    let det = qs[0] / qs[qs.len() - 1];
    let t = det / m[1][1] * (-acc.log_scale).exp();

    // reference the amplitudes to x = 0 for both asymptotic plane waves
    let x1 = bounds[0];
    let xn = bounds[bounds.len() - 1];
    let i = Complex::new(T::zero(), T::one());
    let r = r * (i * Complex::new(T::lit(2.0) * k * x1, T::zero())).exp();
    let t = t * (i * (Complex::new(k * x1, T::zero()) - qs[qs.len() - 1] * xn)).exp();

    Ok(PlaneWaveSolution::from_amplitudes(k, kappa, r, t))
}
