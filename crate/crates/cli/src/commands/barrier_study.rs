use rayon::prelude::*;

use wavescatter::exact::{exact_r, kinematic_barrier};
use wavescatter::planewave::transfer_matrix_solve;
use wavescatter::{GaussianPacket, PiecewisePotential};

use crate::args::BarrierStudyArgs;
use crate::commands::DEFAULT_OFFSET_SIGMAS;
use crate::error::{config, Result};
use crate::output::{emit, Cell, Table};

/// `count` wave numbers whose inside wave number spans one period of
/// `kappa a`, starting at `k0`.
fn scan_points(k0: f64, v0: f64, a: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![k0];
    }
    let kappa0 = (k0 * k0 - 2.0 * v0).max(0.0).sqrt();
    (0..count)
        .map(|i| {
            let kappa = kappa0 + std::f64::consts::PI / a * i as f64 / (count - 1) as f64;
            (kappa * kappa + 2.0 * v0).sqrt()
        })
        .collect()
}

pub fn run(args: BarrierStudyArgs) -> Result<()> {
    if args.scan == 0 {
        return Err(config("--scan must be at least 1"));
    }
    let pot = PiecewisePotential::barrier(args.v0, args.a)?;
    let rows = scan_points(args.k0, args.v0, args.a, args.scan)
        .par_iter()
        .map(|&k0| {
            let p = GaussianPacket::new(k0, args.sigma, DEFAULT_OFFSET_SIGMAS * args.sigma)?;
            Ok(vec![
                Cell::Grid(k0),
                Cell::Value(transfer_matrix_solve(&pot, k0)?.reflection),
                Cell::Value(exact_r(&p, &pot)?.reflection),
                Cell::Value(kinematic_barrier(k0, args.v0)?.reflection),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["k0", "R_planewave", "R_exact", "R_kinematic"]);
    table.rows = rows;
    emit(args.common.out.as_deref(), args.common.format, &[&table])
}
