//! Locally constant functions: construction, arithmetic, integrals and
//! the JSON document used by the command line.
//!
//! `cargo run --example lc_functions`

use padic_harmonic::lcfun::{BinaryOp, CellGrid, LCFunction};
use padic_harmonic::numeric::{format_rational, int, rat};
use padic_harmonic::ultrametric::{BallAddress, FieldParams};

fn main() -> padic_harmonic::Result<()> {
    let params = FieldParams::new(2, 1)?;
    let grid = CellGrid::new(params, 1, -1)?;
    let f = LCFunction::new(grid, vec![int(1), int(0), rat(-1, 2), int(3)], int(0))?;
    let chi = LCFunction::char_fn(&BallAddress::centered(params, 0));

    println!(
        "f has {} cells of measure {}",
        grid.cell_count(),
        format_rational(&grid.cell_measure())
    );
    for level in -1..=2 {
        let b = BallAddress::centered(params, level);
        println!(
            "  ∫_B f over {b}: {:<5} mean {}",
            format_rational(&f.integrate(&b)),
            format_rational(&f.ball_mean(&b))
        );
    }

    let product = f.combine(&chi, BinaryOp::Mul)?;
    println!(
        "∫ f·χ_Z2 = {}",
        format_rational(&product.integrate_global()?)
    );
    println!(
        "sup |f| = {}, f >= 0: {}",
        format_rational(&f.sup_abs()),
        f.is_nonnegative()
    );

    let fine = f.refine(-2, 2)?;
    println!(
        "refined to {} cells, same integral: {}",
        fine.grid().cell_count(),
        fine.integrate_global()? == f.integrate_global()?
    );

    let text = f.to_json();
    let back = LCFunction::from_json(&text)?;
    println!(
        "JSON round trip is byte-identical: {}",
        back.to_json() == text
    );
    print!("{text}");
    Ok(())
}
