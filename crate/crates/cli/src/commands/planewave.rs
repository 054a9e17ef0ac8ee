use rayon::prelude::*;

use wavescatter::planewave::transfer_matrix_solve;

use crate::args::PlanewaveArgs;
use crate::error::Result;
use crate::output::{emit, Cell, Table};

pub fn run(args: PlanewaveArgs) -> Result<()> {
    let pot = args.potential.build()?;
    let rows = args
        .k
        .values()
        .par_iter()
        .map(|&k| {
            let s = transfer_matrix_solve(&pot, k)?;
            Ok(vec![
                Cell::Grid(k),
                Cell::Value(s.reflection),
                Cell::Value(s.transmission),
                Cell::Value(s.r.re),
                Cell::Value(s.r.im),
                Cell::Value(s.t.re),
                Cell::Value(s.t.im),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["k", "R", "T", "re_r", "im_r", "re_t", "im_t"]);
    table.rows = rows;
    emit(args.common.out.as_deref(), args.common.format, &[&table])
}
