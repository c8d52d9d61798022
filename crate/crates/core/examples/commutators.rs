//! The maximal commutator `M_{α,b}` and the nonlinear commutator `[b, M_α]`.
//!
//! `cargo run --example commutators`

use padic_harmonic::lcfun::{CellGrid, LCFunction};
use padic_harmonic::numeric::{int, rat, Precision};
use padic_harmonic::operators::{
    maximal_commutator, nonlinear_commutator, nonlinear_commutator_field, Alpha,
};
use padic_harmonic::ultrametric::{BallAddress, FieldParams, PAdicPoint};

fn main() -> padic_harmonic::Result<()> {
    let prec = Precision::default();
    let params = FieldParams::new(3, 1)?;
    let grid = CellGrid::new(params, 1, 0)?;
    let b = LCFunction::new(grid, vec![int(2), int(-1), int(0)], int(0))?;
    let f = LCFunction::char_fn(&BallAddress::centered(params, 0));

    for alpha in [rat(0, 1), rat(1, 2)] {
        let a = Alpha::new(alpha.clone(), 1)?;
        println!("alpha = {alpha}");
        for x in [rat(0, 1), rat(1, 1), rat(1, 3), rat(2, 3), rat(1, 9)] {
            let pt = PAdicPoint::from_rationals(params, std::slice::from_ref(&x))?;
            println!(
                "  x = {x:<4} M_b f = {:.8}  [b, M] f = {:.8}",
                maximal_commutator(&b, &f, &a, &pt, prec)?,
                nonlinear_commutator(&b, &f, &a, &pt, prec)?
            );
        }
    }

    let constant = LCFunction::constant(params, int(5));
    let zero = nonlinear_commutator_field(&constant, &f, &Alpha::zero(1), prec)?;
    println!(
        "[5, M] χ vanishes on every cell: {}",
        zero.core().iter().all(|v| v.is_zero())
    );
    Ok(())
}
