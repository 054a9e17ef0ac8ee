use wavescatter::wavepacket::validity_report;

use crate::args::{Format, PacketArgs};
use crate::error::{config, Result};
use crate::output::{emit, Cell, Table};

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + step * i as f64 })
}

pub fn run(args: PacketArgs) -> Result<()> {
    if args.points < 2 {
        return Err(config("--points must be at least 2"));
    }
    let p = args.packet.build()?;
    if let Some(pot) = args.potential.build_optional()? {
        let report = validity_report(&p, &pot)?;
        eprintln!(
            "validity: {}",
            serde_json::to_string(&report).expect("report serializes")
        );
    }

    let half = wavescatter::wavepacket::K_SUPPORT_HALF_WIDTH * p.sigma;
    let mut psi = Table::new(&["x", "re_psi", "im_psi", "abs_psi"]);
    for x in linspace(-p.a - half, -p.a + half, args.points) {
        let z = p.position_amplitude(x);
        psi.rows.push(vec![
            Cell::Grid(x),
            Cell::Value(z.re),
            Cell::Value(z.im),
            Cell::Value(z.norm()),
        ]);
    }
    let (lo, hi) = p.k_support();
    let mut density = Table::new(&["k", "P"]);
    for k in linspace(lo, hi, args.points) {
        density
            .rows
            .push(vec![Cell::Grid(k), Cell::Value(p.spectral_density(k))]);
    }

    let format = args.common.format;
    match (args.common.out.as_deref(), args.density_out.as_deref()) {
        (out, Some(dens)) => {
            emit(out, format, &[&psi])?;
            emit(Some(dens), format, &[&density])
        }
        (None, None) => emit(None, format, &[&psi, &density]),
        (Some(out), None) => {
            let ext = match format {
                Format::Csv => "csv",
                Format::Record => "jsonl",
            };
            let ext = out.extension().and_then(|e| e.to_str()).unwrap_or(ext);
            let dens = out.with_extension(format!("density.{ext}"));
            emit(Some(out), format, &[&psi])?;
            emit(Some(&dens), format, &[&density])
        }
    }
}
