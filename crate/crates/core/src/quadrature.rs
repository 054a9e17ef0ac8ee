//! Globally adaptive Gauss-Kronrod (7/15) quadrature on a partitioned interval.
//!
//! The caller supplies the initial partition; panels are then bisected in
//! order of decreasing error estimate. The final sum runs over panels sorted
//! by their left endpoint so results do not depend on refinement history.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7)
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_panels: usize,
}

impl<T: Real> Default for QuadratureOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-10),
            rel_tol: T::zero(),
            max_panels: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .to_f64_lossy()
            .total_cmp(&other.error.to_f64_lossy())
            .then_with(|| other.lo.to_f64_lossy().total_cmp(&self.lo.to_f64_lossy()))
    }
}

fn gauss_kronrod<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Panel<T> {
    let half = (hi - lo) * T::lit(0.5);
    let mid = lo + half;
    let fc = f(mid);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        kronrod = kronrod + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`, starting from the
/// panels delimited by `breakpoints` (sorted, at least two entries).
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    breakpoints: &[T],
    opts: &QuadratureOptions<T>,
) -> Result<Integral<T>> {
    if breakpoints.len() < 2 {
        return Err(Error::invalid("breakpoints", "need at least two"));
    }
    if breakpoints.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::invalid("breakpoints", "must be sorted and finite"));
    }

    let mut heap: BinaryHeap<Panel<T>> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();
    if heap.is_empty() {
        return Ok(Integral {
            value: T::zero(),
            error: T::zero(),
            panels: 0,
        });
    }

    loop {
        let (value, error) = heap.iter().fold((T::zero(), T::zero()), |(v, e), p| {
            (v + p.value, e + p.error)
        });
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            break;
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::QuadratureNotConverged {
                estimate: error.to_f64_lossy(),
                tolerance: target.to_f64_lossy(),
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = worst.lo + (worst.hi - worst.lo) * T::lit(0.5);
        if !(mid > worst.lo && mid < worst.hi) {
            // panel is at floating-point resolution; accept what we have
            heap.push(worst);
            let (_, error) = heap.iter().fold((T::zero(), T::zero()), |(v, e), p| {
                (v + p.value, e + p.error)
            });
            return Err(Error::QuadratureNotConverged {
                estimate: error.to_f64_lossy(),
                tolerance: target.to_f64_lossy(),
            });
        }
        heap.push(gauss_kronrod(&f, worst.lo, mid));
        heap.push(gauss_kronrod(&f, mid, worst.hi));
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.lo.to_f64_lossy().total_cmp(&b.lo.to_f64_lossy()));
    let (value, error) = panels.iter().fold((T::zero(), T::zero()), |(v, e), p| {
        (v + p.value, e + p.error)
    });
    Ok(Integral {
        value,
        error,
        panels: panels.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        // K15 integrates degree 22 exactly
        let r = integrate(
            |x: f64| x.powi(10) - 3.0 * x.powi(3),
            &[0.0, 2.0],
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 2048.0 / 11.0 - 12.0, max_relative = 1e-14);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn gaussian_normalization() {
        let s = 3.0_f64;
        let f = |k: f64| (s * s / core::f64::consts::PI).sqrt() * (-(k * s).powi(2)).exp();
        let r = integrate(f, &[-8.0 / s, 8.0 / s], &QuadratureOptions::default()).unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-12);
        assert!(r.error <= 1e-10);
    }

    #[test]
    fn oscillatory_with_node_partition() {
        // int_0^{100 pi} sin^2(x) dx = 50 pi
        let nodes: Vec<f64> = (0..=100)
            .map(|n| n as f64 * core::f64::consts::PI)
            .collect();
        let r = integrate(
            |x: f64| x.sin().powi(2),
            &nodes,
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 50.0 * core::f64::consts::PI, max_relative = 1e-13);
    }

    #[test]
    fn kink_and_sqrt_endpoint() {
        let r = integrate(
            |x: f64| x.abs(),
            &[-1.0, 0.0, 2.0],
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 2.5, epsilon = 1e-14);
        let r = integrate(
            |x: f64| x.sqrt(),
            &[0.0, 1.0],
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 2.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = QuadratureOptions {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_panels: 4,
        };
        let err = integrate(|x: f64| (1.0 / x.max(1e-300)).sin(), &[1e-6, 1.0], &opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn rejects_bad_breakpoints() {
        let o = QuadratureOptions::default();
        assert!(integrate(|x: f64| x, &[1.0], &o).is_err());
        assert!(integrate(|x: f64| x, &[1.0, 0.0], &o).is_err());
        assert!(integrate(|x: f64| x, &[0.0, f64::NAN], &o).is_err());
        assert_eq!(integrate(|x: f64| x, &[1.0, 1.0], &o).unwrap().value, 0.0);
    }
}
