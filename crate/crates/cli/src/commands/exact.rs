use clap::ValueEnum;
use rayon::prelude::*;

use wavescatter::exact::{exact_rt, kinematic_barrier, step_series};
use wavescatter::planewave::transfer_matrix_solve;
use wavescatter::{PiecewisePotential, ScatteringResult};

use crate::args::{ExactArgs, MethodChoice, SweepAxis};
use crate::error::{config, CliError, Result};
use crate::output::{emit, Cell, Table};
use crate::range::SweepRange;

/// Height of a lone step starting at 0, if that is what `pot` is.
fn step_height(pot: &PiecewisePotential) -> Option<f64> {
    (pot.boundaries() == [0.0]).then(|| pot.right_value())
}

/// Height of a rectangular barrier with zero tails, if that is what `pot` is.
fn barrier_height(pot: &PiecewisePotential) -> Option<f64> {
    let v = pot.values();
    (v.len() == 3 && v[0] == 0.0 && v[2] == 0.0).then(|| v[1])
}

fn methods(choice: MethodChoice, pot: &PiecewisePotential) -> Result<Vec<MethodChoice>> {
    use MethodChoice::*;
    Ok(match choice {
        All => {
            let mut m = vec![Planewave, Exact];
            if step_height(pot).is_some() {
                m.push(Series);
            }
            if barrier_height(pot).is_some() {
                m.push(Kinematic);
            }
            m
        }
        Series if step_height(pot).is_none() => {
            return Err(config(
                "--method series needs a single step (--step or --V0 without --a)",
            ))
        }
        Kinematic if barrier_height(pot).is_none() => {
            return Err(config(
                "--method kinematic needs a rectangular barrier (--barrier or --V0 with --a)",
            ))
        }
        m => vec![m],
    })
}

fn evaluate(
    m: MethodChoice,
    args: &ExactArgs,
    pot: &PiecewisePotential,
    k0: f64,
    sigma: f64,
) -> Result<ScatteringResult> {
    Ok(match m {
        MethodChoice::Exact => exact_rt(&args.packet.build_with(k0, sigma)?, pot)?,
        MethodChoice::Planewave => transfer_matrix_solve(pot, k0)?.to_result(),
        MethodChoice::Series => {
            let v0 = step_height(pot).expect("checked by methods()");
            step_series(k0, v0, sigma)?.to_result(sigma)
        }
        MethodChoice::Kinematic => {
            let v0 = barrier_height(pot).expect("checked by methods()");
            kinematic_barrier(k0, v0)?
        }
        MethodChoice::All => unreachable!("expanded by methods()"),
    })
}

fn parse_sweep(sweep: &[String]) -> Result<(SweepAxis, SweepRange)> {
    let [param, range] = sweep else {
        return Err(config("--sweep takes a parameter name and a range"));
    };
    let axis = SweepAxis::from_str(param, true).map_err(|_| {
        config(format!(
            "--sweep: unknown parameter `{param}` (sigma or k0)"
        ))
    })?;
    let range: SweepRange = range.parse().map_err(|e| config(format!("--sweep: {e}")))?;
    if range.count < 2 {
        return Err(config("--sweep needs at least 2 points"));
    }
    Ok((axis, range))
}

pub fn run(args: ExactArgs) -> Result<()> {
    let pot = args.potential.build()?;
    let methods = methods(args.method, &pot)?;
    let points: Vec<(f64, f64)> = match &args.sweep {
        None => vec![(args.packet.k0()?, args.packet.sigma()?)],
        Some(sweep) => {
            let (axis, range) = parse_sweep(sweep)?;
            match axis {
                SweepAxis::Sigma => {
                    let k0 = args.packet.k0()?;
                    range.values().into_iter().map(|s| (k0, s)).collect()
                }
                SweepAxis::K0 => {
                    let sigma = args.packet.sigma()?;
                    range.values().into_iter().map(|k| (k, sigma)).collect()
                }
            }
        }
    };

    let rows: Vec<Vec<Vec<Cell>>> = points
        .par_iter()
        .map(|&(k0, sigma)| {
            methods
                .iter()
                .map(|&m| {
                    let r = evaluate(m, &args, &pot, k0, sigma)?;
                    Ok(vec![
                        Cell::Grid(k0),
                        Cell::Grid(sigma),
                        Cell::Value(r.reflection),
                        Cell::Value(r.transmission),
                        Cell::Text(r.method.to_string()),
                        Cell::Value(r.err_estimate),
                    ])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<std::result::Result<_, CliError>>()?;

    let mut table = Table::new(&["k0", "sigma", "R", "T", "method", "err_estimate"]);
    table.rows = rows.into_iter().flatten().collect();
    emit(args.common.out.as_deref(), args.common.format, &[&table])
}
