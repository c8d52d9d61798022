//! Hardy-Littlewood and fractional maximal functions with certified
//! interval values, including the far-field power law.
//!
//! `cargo run --example maximal_operators`

use padic_harmonic::lcfun::{CellGrid, LCFunction};
use padic_harmonic::numeric::{format_rational, int, rat, Precision};
use padic_harmonic::operators::{
    frac_maximal_at, frac_maximal_field, llogl_maximal, power_maximal, restricted_frac_maximal,
    Alpha,
};
use padic_harmonic::ultrametric::{BallAddress, FieldParams, PAdicPoint};

fn main() -> padic_harmonic::Result<()> {
    let prec = Precision::default();
    let params = FieldParams::new(2, 1)?;
    let chi = LCFunction::char_fn(&BallAddress::centered(params, 0));
    let m = Alpha::zero(1);
    let half = Alpha::new(rat(1, 2), 1)?;

    println!("M χ_Z2 and M_(1/2) χ_Z2 along the points p^-k:");
    for k in 0..=4 {
        let x = PAdicPoint::from_rationals(params, &[rat(1, 1 << k)])?;
        println!(
            "  |x| = {:<3} M = {:.8}  M_1/2 = {:.8}",
            format_rational(&x.abs()),
            frac_maximal_at(&chi, &m, &x, prec)?,
            frac_maximal_at(&chi, &half, &x, prec)?
        );
    }

    let grid = CellGrid::new(params, 1, -1)?;
    let f = LCFunction::new(grid, vec![int(4), int(0), int(-2), int(1)], int(0))?;
    let field = frac_maximal_field(&f, &m, prec)?;
    println!("M f on the cells of f:");
    for (cell, v) in grid.cells().iter().zip(field.core()) {
        println!("  {cell}: [{v}]");
    }
    println!(
        "far spheres: {:.8}·p^(k·{})",
        field.coeff(),
        format_rational(field.exponent())
    );

    let x = PAdicPoint::origin(params);
    let ball = BallAddress::centered(params, 0);
    println!(
        "M_(B) f(0) for B = {ball}: {:.8}",
        restricted_frac_maximal(&f, &m, &ball, &x, prec)?
    );
    println!(
        "M_ε f(0) with ε = 1/2: {:.8}",
        power_maximal(&f, &rat(1, 2), &x, prec)?
    );
    println!("M_(L log L) f(0): {:.8}", llogl_maximal(&f, &m, &x, prec)?);
    Ok(())
}
