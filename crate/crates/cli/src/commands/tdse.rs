use std::fs;
use std::io::BufWriter;

use wavescatter::tdse::{
    initialize, measure_rt_with, run_to_completion_with, snapshot, GridSpec, Propagator,
    StopCriterion,
};
use wavescatter::{GaussianPacket, PiecewisePotential, SimGrid};

use crate::args::{Format, TdseArgs};
use crate::error::{config, Result};
use crate::output::{emit, Cell, Table};

fn grid_spec(
    args: &TdseArgs,
    p: &GaussianPacket,
    pot: &PiecewisePotential,
) -> Result<GridSpec<f64>> {
    let mut spec = match (args.x_min, args.x_max, args.n) {
        (Some(x_min), Some(x_max), Some(n)) => GridSpec {
            x_min,
            x_max,
            n,
            dt: None,
        },
        (None, None, None) => GridSpec::suggest(p, pot)?,
        _ => return Err(config("give all of --x-min, --x-max, --n or none of them")),
    };
    spec.dt = args.dt;
    Ok(spec)
}

fn write_frame(args: &TdseArgs, index: usize, grid: &SimGrid) -> Result<()> {
    let snap = snapshot(grid);
    let mut table = Table::new(&["t", "x", "abs_psi"]);
    table.rows = snap
        .x
        .iter()
        .zip(&snap.abs_psi)
        .map(|(&x, &a)| vec![Cell::Grid(snap.t), Cell::Grid(x), Cell::Value(a)])
        .collect();
    let ext = match args.common.format {
        Format::Csv => "csv",
        Format::Record => "jsonl",
    };
    let path = args.frames_dir.join(format!("frame_{index:04}.{ext}"));
    table.write_to(BufWriter::new(fs::File::create(path)?), args.common.format)
}

pub fn run(args: TdseArgs) -> Result<()> {
    let pot = args.potential.build()?;
    let p = args.packet.build()?;
    let spec = grid_spec(&args, &p, &pot)?;
    let crit = StopCriterion {
        separation_widths: args.separation_widths,
        ..StopCriterion::default()
    };

    let start = initialize(&p, &spec)?;
    let done = run_to_completion_with(start.clone(), &pot, args.max_steps, &crit)?;
    let result = measure_rt_with(&done, &pot, &crit)?;
    let total_steps = ((done.t - start.t) / done.dt).round() as usize;

    if let Some(frames) = args.frames {
        if frames == 0 {
            return Err(config("--frames must be at least 1"));
        }
        fs::create_dir_all(&args.frames_dir)?;
        // replay the same run, stopping at equally spaced steps
        let mut grid = start;
        let mut prop = Propagator::new(&grid, &pot);
        let mut taken = 0;
        for j in 0..frames {
            let target = if frames == 1 {
                0
            } else {
                j * total_steps / (frames - 1)
            };
            prop.step(&mut grid, target - taken)?;
            taken = target;
            write_frame(&args, j, &grid)?;
        }
    }

    let mut table = Table::new(&[
        "R",
        "T",
        "method",
        "err_estimate",
        "t",
        "steps",
        "n",
        "dx",
        "dt",
    ]);
    table.rows.push(vec![
        Cell::Value(result.reflection),
        Cell::Value(result.transmission),
        Cell::Text(result.method.to_string()),
        Cell::Value(result.err_estimate),
        Cell::Grid(done.t),
        Cell::Int(total_steps as u64),
        Cell::Int(done.n as u64),
        Cell::Grid(done.dx()),
        Cell::Grid(done.dt),
    ]);
    emit(args.common.out.as_deref(), args.common.format, &[&table])
}
