//! Direct time-dependent propagation of a packet on a periodic grid.
//!
//! Symmetric split-step spectral scheme: half a potential phase, a full
//! kinetic phase in the transform domain, half a potential phase. Each step
//! is a product of unitary operators, so the discrete norm is conserved to
//! roundoff. There are no absorbing layers; instead every run checks that no
//! probability reaches the outer parts of the grid.
//!
//! Nothing here calls into [`crate::planewave`] or [`crate::exact`]; the
//! measured `R` and `T` are an independent check on both.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::PiecewisePotential;
use crate::result::{Method, ScatteringResult};
use crate::scalar::Real;
use crate::wavepacket::GaussianPacket;

/// Points per shortest packet wavelength required by [`initialize`].
pub const POINTS_PER_WAVELENGTH: f64 = 10.0;
/// Largest `|psi|^2` allowed at the grid edges when initializing.
pub const EDGE_DENSITY_LIMIT: f64 = 1e-12;
/// Largest probability allowed in the boundary zones during a run.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;
/// Fraction of the grid, on each side, that forms a boundary zone.
pub const BOUNDARY_ZONE_FRACTION: f64 = 0.05;
/// Largest probability current through the scatterer edges for a finished collision.
pub const FLUX_LIMIT: f64 = 1e-8;
/// Outgoing packets must be this many RMS widths clear of the scatterer.
pub const SEPARATION_WIDTHS: f64 = 5.0;
/// Stop-criterion and boundary checks run every this many steps.
pub const CHECK_INTERVAL: usize = 100;
/// Largest kinetic phase per step at the packet's highest wave number.
pub const MAX_KINETIC_PHASE: f64 = core::f64::consts::FRAC_PI_4;

/// Largest probability left between the first and last boundaries for a finished collision.
pub const INSIDE_MASS_LIMIT: f64 = 1e-7;

/// Parts below this mass are ignored by the separation test.
const NEGLIGIBLE_MASS: f64 = 1e-10;

/// Grid extent, resolution and time step. `dt = None` selects [`default_dt`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub n: usize,
    pub dt: Option<T>,
}

impl<T: Real> GridSpec<T> {
    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_count(self.n)
    }

    /// Sizes a grid that holds the whole collision for `p` on `pot`: the
    /// incident packet, and the outgoing packets until they are well
    /// separated, with every wavelength resolved by at least
    /// [`POINTS_PER_WAVELENGTH`] points. Fails when an outgoing packet
    /// spreads too fast to ever clear the scatterer.
    pub fn suggest(p: &GaussianPacket<T>, pot: &PiecewisePotential<T>) -> Result<Self> {
        let two = T::lit(2.0);
        let margin = T::lit(SEPARATION_WIDTHS + 2.0);
        let (x1, xn) = match (pot.first_boundary(), pot.last_boundary()) {
            (Some(a), Some(b)) => (a, b),
            _ => (T::zero(), T::zero()),
        };
        let w0 = p.sigma / two.sqrt();
        let sv = p.k_std();
        // arrival at the scatterer, then one pass and one round trip inside it
        let mut inside = T::zero();
        for (lo, hi, v) in pot.interior_regions() {
            let q2 = p.k0 * p.k0 - two * v;
            if q2 > T::zero() {
                inside = inside + T::lit(3.0) * (hi - lo) / q2.sqrt();
            }
        }
        let t_cross = (p.a + x1) / p.k0 + inside;

        // outgoing packet of speed v, velocity spread s, width w at t_cross
        let reach = |v: T, s: T, w: T| -> Result<(T, T)> {
            if margin * s >= v {
                return Err(Error::invalid(
                    "sigma",
                    format!("outgoing packet spreads ({s}) too fast to separate at speed {v}"),
                ));
            }
            let width_at = |t: T| (w * w + (s * t).powi(2)).sqrt();
            let clear = |t: T| v * (t - t_cross) >= margin * width_at(t);
            let mut hi = t_cross.max(T::one()) * two;
            while !clear(hi) {
                hi = hi * two;
            }
            let mut lo = t_cross;
            for _ in 0..60 {
                let mid = (lo + hi) / two;
                if clear(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok((hi, v * (hi - t_cross) + T::lit(8.0) * width_at(hi)))
        };

        let (mut t_end, _) = reach(p.k0, sv, w0)?;
        let kappa2 = p.k0 * p.k0 - two * pot.right_value();
        if pot.first_boundary().is_some() && kappa2 > T::zero() {
            let kappa = kappa2.sqrt();
            let (t, _) = reach(kappa, sv * p.k0 / kappa, w0 * kappa / p.k0)?;
            t_end = t_end.max(t);
        }
        let width_at = |s: T, w: T| (w * w + (s * t_end).powi(2)).sqrt();
        let left_reach = p.k0 * (t_end - t_cross) + T::lit(8.0) * width_at(sv, w0);
        let mut right_reach = p.k0 * (t_end - t_cross) + T::lit(8.0) * width_at(sv, w0);
        if kappa2 > T::zero() {
            let kappa = kappa2.sqrt();
            right_reach = right_reach
                .max(kappa * (t_end - t_cross) + T::lit(8.0) * width_at(sv * p.k0 / kappa, w0));
        }
        let tail = T::lit(8.0) * p.sigma;
        let inflate = T::one() - T::lit(2.0 * BOUNDARY_ZONE_FRACTION);
        let x_min = (x1 - left_reach).min(-p.a - tail) / inflate;
        let x_max = (xn + right_reach).max(-p.a + tail) / inflate;
        let lambda_min = T::TAU() / p.k_max();
        let needed = ((x_max - x_min) / (lambda_min / T::lit(POINTS_PER_WAVELENGTH)))
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX);
        Ok(Self {
            x_min,
            x_max,
            n: needed.max(64).next_power_of_two(),
            dt: None,
        })
    }
}

/// Default time step for spacing `dx`: starts at `0.2 dx^2 (2m/hbar)` and is
/// halved until the kinetic phase per step at `k_max` is below
/// [`MAX_KINETIC_PHASE`].
pub fn default_dt<T: Real>(dx: T, k_max: T) -> T {
    let mut dt = T::lit(0.2) * dx * dx * T::lit(2.0);
    while k_max * k_max / T::lit(2.0) * dt >= T::lit(MAX_KINETIC_PHASE) {
        dt = dt / T::lit(2.0);
    }
    dt
}

/// Wave function samples on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimGrid<T> {
    pub x_min: T,
    pub x_max: T,
    pub n: usize,
    pub dt: T,
    pub samples: Vec<Complex<T>>,
    pub t: T,
}

/// Mass, centroid, spread and mean wave number of part of a wave function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketStats<T> {
    pub mass: T,
    pub centroid: T,
    pub rms_width: T,
    /// Integrated current over mass: positive for a packet moving right.
    pub mean_velocity: T,
}

impl<T: Real> SimGrid<T> {
    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_count(self.n)
    }

    pub fn x(&self, i: usize) -> T {
        self.x_min + self.dx() * T::from_count(i)
    }

    pub fn positions(&self) -> Vec<T> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// `sum |psi_i|^2 dx`.
    pub fn norm(&self) -> T {
        self.samples.iter().fold(T::zero(), |s, z| s + z.norm_sqr()) * self.dx()
    }

    /// Grid wave numbers in FFT order.
    pub fn wave_numbers(&self) -> Vec<T> {
        let dk = T::TAU() / (self.x_max - self.x_min);
        let n = self.n;
        (0..n)
            .map(|j| {
                if j < n / 2 {
                    dk * T::from_count(j)
                } else {
                    -dk * T::from_count(n - j)
                }
            })
            .collect()
    }

    /// Spectral derivative `d psi / dx` (Nyquist mode dropped).
    pub fn derivative(&self) -> Vec<Complex<T>> {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(self.n);
        let inv = planner.plan_fft_inverse(self.n);
        let mut buf = self.samples.clone();
        fwd.process(&mut buf);
        let scale = T::from_count(self.n).recip();
        for (j, (z, k)) in buf.iter_mut().zip(self.wave_numbers()).enumerate() {
            *z = if j == self.n / 2 {
                Complex::new(T::zero(), T::zero())
            } else {
                *z * Complex::new(T::zero(), k * scale)
            };
        }
        inv.process(&mut buf);
        buf
    }

    /// Probability current `(hbar/m) Im(psi* psi')` at every grid point.
    pub fn current(&self) -> Vec<T> {
        self.samples
            .iter()
            .zip(self.derivative())
            .map(|(p, d)| (p.conj() * d).im)
            .collect()
    }

    /// Statistics of the samples whose position satisfies `keep`.
    pub fn stats_where<F: Fn(T) -> bool>(&self, keep: F) -> PacketStats<T> {
        let current = self.current();
        self.stats_with_current(&current, keep)
    }

    fn stats_with_current<F: Fn(T) -> bool>(&self, current: &[T], keep: F) -> PacketStats<T> {
        let dx = self.dx();
        let (mut m, mut m1, mut j) = (T::zero(), T::zero(), T::zero());
        for (i, (psi, &ji)) in self.samples.iter().zip(current).enumerate() {
            let x = self.x(i);
            if keep(x) {
                let w = psi.norm_sqr();
                m = m + w;
                m1 = m1 + w * x;
                j = j + ji;
            }
        }
        if m == T::zero() {
            return PacketStats {
                mass: T::zero(),
                centroid: T::nan(),
                rms_width: T::nan(),
                mean_velocity: T::nan(),
            };
        }
        let c = m1 / m;
        let mut m2 = T::zero();
        for i in 0..self.n {
            let x = self.x(i);
            if keep(x) {
                m2 = m2 + self.samples[i].norm_sqr() * (x - c) * (x - c);
            }
        }
        PacketStats {
            mass: m * dx,
            centroid: c,
            rms_width: (m2 / m).sqrt(),
            mean_velocity: j / m,
        }
    }

    /// Probability in the outer [`BOUNDARY_ZONE_FRACTION`] of the grid on each side.
    pub fn boundary_mass(&self) -> T {
        let zone = ((self.n as f64) * BOUNDARY_ZONE_FRACTION).ceil() as usize;
        let zone = zone.max(1).min(self.n / 2);
        let edge = self.samples[..zone]
            .iter()
            .chain(self.samples[self.n - zone..].iter())
            .fold(T::zero(), |s, z| s + z.norm_sqr());
        edge * self.dx()
    }

    fn check_boundary(&self) -> Result<()> {
        let mass = self.boundary_mass();
        if mass > T::lit(BOUNDARY_MASS_LIMIT) || !mass.is_finite() {
            return Err(Error::BoundaryMass {
                mass: mass.to_f64_lossy(),
                limit: BOUNDARY_MASS_LIMIT,
            });
        }
        Ok(())
    }
}

/// Samples the packet on the grid and renormalizes to unit discrete norm.
pub fn initialize<T: Real>(p: &GaussianPacket<T>, spec: &GridSpec<T>) -> Result<SimGrid<T>> {
    if spec.n < 2 || !spec.n.is_power_of_two() {
        return Err(Error::invalid(
            "n",
            format!("grid size must be a power of two, got {}", spec.n),
        ));
    }
    if !(spec.x_max > spec.x_min) {
        return Err(Error::invalid("grid", "x_max must exceed x_min"));
    }
    let dx = spec.dx();
    let max_dx = T::TAU() / p.k_max() / T::lit(POINTS_PER_WAVELENGTH);
    if dx > max_dx {
        return Err(Error::UnderResolved {
            dx: dx.to_f64_lossy(),
            max_dx: max_dx.to_f64_lossy(),
        });
    }
    let dt = match spec.dt {
        Some(dt) if dt > T::zero() && dt.is_finite() => dt,
        Some(dt) => return Err(Error::invalid("dt", format!("must be positive, got {dt}"))),
        None => default_dt(dx, p.k_max()),
    };
    for edge in [spec.x_min, spec.x_max] {
        let density = p.position_amplitude(edge).norm_sqr();
        if density > T::lit(EDGE_DENSITY_LIMIT) {
            return Err(Error::PacketClipped {
                density: density.to_f64_lossy(),
                limit: EDGE_DENSITY_LIMIT,
            });
        }
    }

    let mut grid = SimGrid {
        x_min: spec.x_min,
        x_max: spec.x_max,
        n: spec.n,
        dt,
        samples: Vec::with_capacity(spec.n),
        t: T::zero(),
    };
    grid.samples = (0..spec.n)
        .map(|i| p.position_amplitude(grid.x(i)))
        .collect();
    let scale = grid.norm().sqrt().recip();
    for z in &mut grid.samples {
        *z = *z * scale;
    }
    let zone_mass = grid.boundary_mass();
    if zone_mass > T::lit(BOUNDARY_MASS_LIMIT) {
        return Err(Error::PacketClipped {
            density: zone_mass.to_f64_lossy(),
            limit: BOUNDARY_MASS_LIMIT,
        });
    }
    Ok(grid)
}

/// Precomputed phases and FFT plans for stepping one grid through one potential.
pub struct Propagator<T: Real> {
    half_potential: Vec<Complex<T>>,
    kinetic: Vec<Complex<T>>,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> Propagator<T> {
    pub fn new(grid: &SimGrid<T>, pot: &PiecewisePotential<T>) -> Self {
        let dt = grid.dt;
        let half = T::lit(0.5);
        let half_potential = (0..grid.n)
            .map(|i| Complex::from_polar(T::one(), -pot.evaluate(grid.x(i)) * dt * half))
            .collect();
        // 1/n normalization of the inverse transform folded into the kinetic phase
        let inv_n = T::from_count(grid.n).recip();
        let kinetic = grid
            .wave_numbers()
            .into_iter()
            .map(|k| Complex::from_polar(inv_n, -k * k * half * dt))
            .collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n);
        let inv = planner.plan_fft_inverse(grid.n);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            half_potential,
            kinetic,
            fwd,
            inv,
            scratch: vec![Complex::new(T::zero(), T::zero()); scratch_len],
        }
    }

    fn apply(&mut self, psi: &mut [Complex<T>], phases: &[Complex<T>]) {
        for (z, p) in psi.iter_mut().zip(phases) {
            *z = *z * *p;
        }
    }

    /// Advances `grid` by `n_steps` without boundary checks.
    pub fn step_unchecked(&mut self, grid: &mut SimGrid<T>, n_steps: usize) {
        if n_steps == 0 {
            return;
        }
        let psi = &mut grid.samples;
        let half_v = std::mem::take(&mut self.half_potential);
        let kinetic = std::mem::take(&mut self.kinetic);
        // consecutive half potential phases merge into one full phase
        let full_v: Vec<Complex<T>> = half_v.iter().map(|z| *z * *z).collect();
        self.apply(psi, &half_v);
        for s in 0..n_steps {
            self.fwd.process_with_scratch(psi, &mut self.scratch);
            self.apply(psi, &kinetic);
            self.inv.process_with_scratch(psi, &mut self.scratch);
            let last = s + 1 == n_steps;
            self.apply(psi, if last { &half_v } else { &full_v });
        }
        self.half_potential = half_v;
        self.kinetic = kinetic;
        grid.t = grid.t + grid.dt * T::from_count(n_steps);
    }

    /// Advances `grid` by `n_steps`, checking the boundary zones every
    /// [`CHECK_INTERVAL`] steps.
    pub fn step(&mut self, grid: &mut SimGrid<T>, n_steps: usize) -> Result<()> {
        let mut left = n_steps;
        while left > 0 {
            let chunk = left.min(CHECK_INTERVAL);
            self.step_unchecked(grid, chunk);
            grid.check_boundary()?;
            left -= chunk;
        }
        Ok(())
    }
}

/// Advances `s` by `n_steps` time steps through `pot`.
pub fn propagate<T: Real>(
    mut s: SimGrid<T>,
    pot: &PiecewisePotential<T>,
    n_steps: usize,
) -> Result<SimGrid<T>> {
    Propagator::new(&s, pot).step(&mut s, n_steps)?;
    Ok(s)
}

/// Where the collision stands, in terms of the stop criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionStatus<T> {
    /// Largest `|j|` at the first and last boundaries.
    pub edge_flux: T,
    pub reflected: PacketStats<T>,
    pub transmitted: PacketStats<T>,
    /// Probability between the first and last boundaries.
    pub inside: T,
    pub complete: bool,
    pub reason: Option<&'static str>,
}

fn nearest_index<T: Real>(grid: &SimGrid<T>, x: T) -> usize {
    let i = ((x - grid.x_min) / grid.dx())
        .round()
        .to_isize()
        .unwrap_or(0);
    i.clamp(0, grid.n as isize - 1) as usize
}

/// Thresholds for a finished collision. The default uses the module constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopCriterion<T> {
    pub flux_limit: T,
    pub inside_mass_limit: T,
    /// Required gap between each outgoing centroid and the scatterer, in RMS widths.
    pub separation_widths: T,
}

impl<T: Real> Default for StopCriterion<T> {
    fn default() -> Self {
        Self {
            flux_limit: T::lit(FLUX_LIMIT),
            inside_mass_limit: T::lit(INSIDE_MASS_LIMIT),
            separation_widths: T::lit(SEPARATION_WIDTHS),
        }
    }
}

/// Evaluates the default stop criterion: negligible current through the
/// scatterer and negligible probability inside it, both outgoing parts
/// moving away from it, and each at least [`SEPARATION_WIDTHS`] RMS widths
/// clear of it.
pub fn interaction_status<T: Real>(
    grid: &SimGrid<T>,
    pot: &PiecewisePotential<T>,
) -> InteractionStatus<T> {
    interaction_status_with(grid, pot, &StopCriterion::default())
}

pub fn interaction_status_with<T: Real>(
    grid: &SimGrid<T>,
    pot: &PiecewisePotential<T>,
    crit: &StopCriterion<T>,
) -> InteractionStatus<T> {
    let (x1, xn) = match (pot.first_boundary(), pot.last_boundary()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let all = grid.stats_where(|_| true);
            return InteractionStatus {
                edge_flux: T::zero(),
                reflected: grid.stats_where(|_| false),
                transmitted: all,
                inside: T::zero(),
                complete: true,
                reason: None,
            };
        }
    };
    let current = grid.current();
    let edge_flux = current[nearest_index(grid, x1)]
        .abs()
        .max(current[nearest_index(grid, xn)].abs());
    let reflected = grid.stats_with_current(&current, |x| x < x1);
    let transmitted = grid.stats_with_current(&current, |x| x >= xn);
    let inside = grid
        .stats_with_current(&current, |x| x >= x1 && x < xn)
        .mass;

    let negligible = T::lit(NEGLIGIBLE_MASS);
    let sep = crit.separation_widths;
    let reason = if edge_flux >= crit.flux_limit {
        Some("probability current through the scatterer is not negligible")
    } else if inside >= crit.inside_mass_limit {
        Some("probability remains inside the scatterer")
    } else if reflected.mass > negligible && !(reflected.mean_velocity < T::zero()) {
        Some("the left part is not moving away from the scatterer")
    } else if transmitted.mass > negligible && !(transmitted.mean_velocity > T::zero()) {
        Some("the right part is not moving away from the scatterer")
    } else if reflected.mass > negligible && x1 - reflected.centroid < sep * reflected.rms_width {
        Some("reflected packet is not yet separated from the scatterer")
    } else if transmitted.mass > negligible
        && transmitted.centroid - xn < sep * transmitted.rms_width
    {
        Some("transmitted packet is not yet separated from the scatterer")
    } else {
        None
    };
    InteractionStatus {
        edge_flux,
        reflected,
        transmitted,
        inside,
        complete: reason.is_none(),
        reason,
    }
}

/// Propagates until [`interaction_status`] reports a finished collision,
/// checking every [`CHECK_INTERVAL`] steps. Fails if `max_steps` is exhausted.
pub fn run_to_completion<T: Real>(
    s: SimGrid<T>,
    pot: &PiecewisePotential<T>,
    max_steps: usize,
) -> Result<SimGrid<T>> {
    run_to_completion_with(s, pot, max_steps, &StopCriterion::default())
}

pub fn run_to_completion_with<T: Real>(
    mut s: SimGrid<T>,
    pot: &PiecewisePotential<T>,
    max_steps: usize,
    crit: &StopCriterion<T>,
) -> Result<SimGrid<T>> {
    let mut prop = Propagator::new(&s, pot);
    let mut taken = 0;
    // the incident packet itself can look "separated"; wait for it to move
    // into the scatterer first
    let mut started = pot.first_boundary().is_none();
    loop {
        if !started {
            started = !interaction_status_with(&s, pot, crit).complete;
        } else if interaction_status_with(&s, pot, crit).complete {
            return Ok(s);
        }
        if taken >= max_steps {
            return Err(Error::InteractionIncomplete {
                reason: format!("no separation after {taken} steps (t = {})", s.t),
            });
        }
        let chunk = CHECK_INTERVAL.min(max_steps - taken);
        prop.step(&mut s, chunk)?;
        taken += chunk;
    }
}

/// Reflected and transmitted probability after the collision: mass left of
/// the first boundary and right of the last. Anything still inside the
/// scatterer, plus any norm defect, goes into `err_estimate`.
pub fn measure_rt<T: Real>(
    s: &SimGrid<T>,
    pot: &PiecewisePotential<T>,
) -> Result<ScatteringResult<T>> {
    measure_rt_with(s, pot, &StopCriterion::default())
}

pub fn measure_rt_with<T: Real>(
    s: &SimGrid<T>,
    pot: &PiecewisePotential<T>,
    crit: &StopCriterion<T>,
) -> Result<ScatteringResult<T>> {
    let status = interaction_status_with(s, pot, crit);
    if let Some(reason) = status.reason {
        return Err(Error::InteractionIncomplete {
            reason: reason.to_string(),
        });
    }
    let r = status.reflected.mass;
    let t = status.transmitted.mass;
    let err = (T::one() - r - t - status.inside).abs() + status.inside;
    Ok(ScatteringResult::new(r, t, Method::Tdse, err))
}

/// `|psi(x, t)|` sampled on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot<T> {
    pub t: T,
    pub x: Vec<T>,
    pub abs_psi: Vec<T>,
}

pub fn snapshot<T: Real>(s: &SimGrid<T>) -> Snapshot<T> {
    Snapshot {
        t: s.t,
        x: s.positions(),
        abs_psi: s.samples.iter().map(|z| z.norm()).collect(),
    }
}

/// Initializes, runs to completion and measures in one call.
pub fn simulate<T: Real>(
    p: &GaussianPacket<T>,
    pot: &PiecewisePotential<T>,
    spec: &GridSpec<T>,
    max_steps: usize,
) -> Result<(SimGrid<T>, ScatteringResult<T>)> {
    simulate_with(p, pot, spec, max_steps, &StopCriterion::default())
}

pub fn simulate_with<T: Real>(
    p: &GaussianPacket<T>,
    pot: &PiecewisePotential<T>,
    spec: &GridSpec<T>,
    max_steps: usize,
    crit: &StopCriterion<T>,
) -> Result<(SimGrid<T>, ScatteringResult<T>)> {
    let grid = run_to_completion_with(initialize(p, spec)?, pot, max_steps, crit)?;
    let result = measure_rt_with(&grid, pot, crit)?;
    Ok((grid, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_packet() -> GaussianPacket<f64> {
        GaussianPacket::new(2.0, 4.0, 40.0).unwrap()
    }

    fn small_spec() -> GridSpec<f64> {
        GridSpec {
            x_min: -128.0,
            x_max: 128.0,
            n: 2048,
            dt: None,
        }
    }

    #[test]
    fn initialization() {
        let p = small_packet();
        let g = initialize(&p, &small_spec()).unwrap();
        assert_relative_eq!(g.norm(), 1.0, epsilon = 1e-12);
        let peak = g
            .samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap()
            .0;
        assert!((g.x(peak) + p.a).abs() <= g.dx() / 2.0 + 1e-12);
    }

    #[test]
    fn initial_transform_matches_spectral_amplitude() {
        let p = small_packet();
        let g = initialize(&p, &small_spec()).unwrap();
        let mut buf = g.samples.clone();
        FftPlanner::new().plan_fft_forward(g.n).process(&mut buf);
        // phi(k) = dx / sqrt(2 pi) sum psi_j e^{-i k x_j}; the DFT measures x from x_min
        let pre = g.dx() / (2.0 * core::f64::consts::PI).sqrt();
        for (j, k) in g.wave_numbers().into_iter().enumerate() {
            let phi = buf[j] * Complex::from_polar(pre, -k * g.x_min);
            assert!((phi - p.spectral_amplitude(k)).norm() < 1e-6, "k = {k}");
        }
    }

    #[test]
    fn initialize_rejects_bad_grids() {
        let p = small_packet();
        let mut s = small_spec();
        s.n = 1000;
        assert!(initialize(&p, &s).is_err());
        s.n = 256;
        assert!(matches!(
            initialize(&p, &s),
            Err(Error::UnderResolved { .. })
        ));
        let clipped = GridSpec {
            x_min: -60.0,
            x_max: 60.0,
            n: 1024,
            dt: None,
        };
        assert!(matches!(
            initialize(&p, &clipped),
            Err(Error::PacketClipped { .. })
        ));
    }

    #[test]
    fn default_dt_limits_kinetic_phase() {
        let dx = 0.125_f64;
        assert_eq!(default_dt(dx, 2.0), 0.4 * dx * dx);
        let k = 40.0;
        let dt = default_dt(dx, k);
        assert!(k * k / 2.0 * dt < MAX_KINETIC_PHASE);
        assert!(k * k * dt >= MAX_KINETIC_PHASE);
    }

    #[test]
    fn norm_conserved_through_step() {
        let p = small_packet();
        let pot = PiecewisePotential::step(1.5);
        let g = initialize(&p, &small_spec()).unwrap();
        let g = propagate(g, &pot, 3000).unwrap();
        assert_relative_eq!(g.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn boundary_mass_is_an_error() {
        let p = small_packet();
        let g = initialize(&p, &small_spec()).unwrap();
        // free packet at speed 2 reaches the right zone after ~75 time units
        let steps = (150.0 / g.dt) as usize;
        assert!(matches!(
            propagate(g, &PiecewisePotential::free(), steps),
            Err(Error::BoundaryMass { .. })
        ));
    }

    #[test]
    fn derivative_of_plane_wave() {
        let g = SimGrid {
            x_min: 0.0,
            x_max: 2.0 * core::f64::consts::PI,
            n: 64,
            dt: 0.1,
            samples: (0..64)
                .map(|i| {
                    Complex::from_polar(1.0, 3.0 * i as f64 * 2.0 * core::f64::consts::PI / 64.0)
                })
                .collect(),
            t: 0.0,
        };
        for j in g.current() {
            assert_relative_eq!(j, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn free_particle_measures_full_transmission() {
        let p = small_packet();
        let spec = GridSpec {
            x_min: -256.0,
            x_max: 256.0,
            n: 4096,
            dt: None,
        };
        let (_, r) = simulate(&p, &PiecewisePotential::step(0.0), &spec, 1_000_000).unwrap();
        assert!(r.reflection < 1e-10);
        assert_relative_eq!(r.transmission, 1.0, epsilon = 1e-10);

        let (_, r) = simulate(&p, &PiecewisePotential::free(), &spec, 10).unwrap();
        assert_eq!(r.reflection, 0.0);
    }

    #[test]
    fn measure_rejects_unfinished_collision() {
        let p = small_packet();
        let pot = PiecewisePotential::step(1.5);
        let g = initialize(&p, &small_spec()).unwrap();
        // center reaches the step at t = 20
        let steps = (20.0 / g.dt) as usize;
        let g = propagate(g, &pot, steps).unwrap();
        assert!(matches!(
            measure_rt(&g, &pot),
            Err(Error::InteractionIncomplete { .. })
        ));
        assert!(run_to_completion(g, &pot, 100).is_err());
    }

    #[test]
    fn hard_wall_reflects_everything() {
        let p = small_packet();
        let pot = PiecewisePotential::step(50.0);
        let spec = GridSpec {
            x_min: -256.0,
            x_max: 256.0,
            n: 4096,
            dt: None,
        };
        let (_, r) = simulate(&p, &pot, &spec, 1_000_000).unwrap();
        assert_relative_eq!(r.reflection, 1.0, epsilon = 1e-4);
        assert!(r.transmission < 1e-4);
    }

    #[test]
    fn snapshot_at_start_is_single_hump() {
        let p = small_packet();
        let g = initialize(&p, &small_spec()).unwrap();
        let snap = snapshot(&g);
        assert_eq!(snap.t, 0.0);
        assert_eq!(snap.x.len(), g.n);
        // unimodal: increases up to the peak, then decreases
        let peak = snap
            .abs_psi
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(snap.abs_psi[..=peak].windows(2).all(|w| w[0] <= w[1]));
        assert!(snap.abs_psi[peak..].windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn suggested_grid_holds_a_step_collision() {
        let p = GaussianPacket::new(2.0, 16.0, 120.0).unwrap();
        let pot = PiecewisePotential::step(1.5);
        let spec = GridSpec::suggest(&p, &pot).unwrap();
        let (_, r) = simulate(&p, &pot, &spec, 10_000_000).unwrap();
        assert!(r.conservation_defect() < 1e-9);
        // transmitted packet at speed 1 with velocity spread 0.18 never clears by 7 widths
        let narrow = GaussianPacket::new(2.0, 8.0, 80.0).unwrap();
        assert!(GridSpec::suggest(&narrow, &pot).is_err());
    }

    #[test]
    fn runs_in_f32() {
        let p = small_packet().cast::<f32>();
        let spec = GridSpec {
            x_min: -128.0_f32,
            x_max: 128.0,
            n: 2048,
            dt: None,
        };
        let g = propagate(
            initialize(&p, &spec).unwrap(),
            &PiecewisePotential::step(1.5_f32),
            500,
        )
        .unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-4);
    }
}
