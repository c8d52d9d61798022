//! BMO, BMO_q, Lebesgue, weak Lebesgue and Morrey norms with their
//! maximizing balls.
//!
//! `cargo run --example norms_bmo_morrey`

use padic_harmonic::lcfun::{CellGrid, LCFunction};
use padic_harmonic::norms::{
    bmo_norm, bmo_q_norm, level_set_measure, lq_norm_lc, morrey_norm_lc, weak_lq_norm, MorreyParams,
};
use padic_harmonic::numeric::{format_rational, int, rat, Precision};
use padic_harmonic::ultrametric::{BallAddress, FieldParams};

fn main() -> padic_harmonic::Result<()> {
    let prec = Precision::default();
    let params = FieldParams::new(2, 1)?;
    let unit = BallAddress::centered(params, 0);
    let chi = LCFunction::char_fn(&unit);

    let bmo = bmo_norm(&chi)?;
    println!(
        "‖χ_Z2‖_BMO = {:.8} attained on {}",
        bmo.value,
        bmo.witness
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default()
    );
    for q in [rat(3, 2), int(2), int(3)] {
        println!("‖χ_Z2‖_BMO_{q} = {:.8}", bmo_q_norm(&chi, &q, prec)?.value);
    }
    println!("‖χ_Z2‖_L2 = {:.8}", lq_norm_lc(&chi, &int(2), prec)?);

    let grid = CellGrid::new(params, 1, -2)?;
    let f = LCFunction::from_cells(grid, int(0), |c| {
        if c.contains_origin() {
            int(8)
        } else {
            int(1)
        }
    });
    let big = BallAddress::centered(params, 1);
    println!(
        "‖f‖_(L^(2,∞)(B_1)) = {:.8}",
        weak_lq_norm(&f, &int(2), &big, prec)?
    );
    println!(
        "|{{|f| > 1}} ∩ B_1| = {}",
        format_rational(&level_set_measure(&f.abs(), &big, &int(1)))
    );

    for lambda in [rat(0, 1), rat(1, 2), rat(3, 4)] {
        let m = morrey_norm_lc(&f, &MorreyParams::new(int(2), lambda.clone(), 1)?, prec)?;
        println!(
            "‖f‖_(L^(2,{lambda})) = {:.8} on {}",
            m.value,
            m.witness
                .as_ref()
                .map_or("the limit of large balls".to_string(), ToString::to_string)
        );
    }
    Ok(())
}
