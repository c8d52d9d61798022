//! Luxemburg averages for the `L log L` and `exp L` Young functions.
//!
//! `cargo run --example orlicz_luxemburg`

use padic_harmonic::lcfun::{CellGrid, LCFunction};
use padic_harmonic::norms::{orlicz_average, YoungKind};
use padic_harmonic::numeric::{int, Precision};
use padic_harmonic::ultrametric::{BallAddress, FieldParams};

fn main() -> padic_harmonic::Result<()> {
    let prec = Precision::default();
    let params = FieldParams::new(2, 1)?;
    let grid = CellGrid::new(params, 0, -3)?;
    let f = LCFunction::from_cells(grid, int(0), |c| {
        if c.contains_origin() {
            int(16)
        } else {
            int(1)
        }
    });

    for level in -3..=2 {
        let ball = BallAddress::centered(params, level);
        println!(
            "B_{level:>2}: mean |f| = {:<8} ‖f‖_LlogL = {:.8}  ‖f‖_expL = {:.8}",
            padic_harmonic::numeric::format_rational(&f.abs().ball_mean(&ball)),
            orlicz_average(&f, &ball, YoungKind::LlogL, prec)?,
            orlicz_average(&f, &ball, YoungKind::ExpL, prec)?
        );
    }
    Ok(())
}
