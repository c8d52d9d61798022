//! Variable-exponent Luxemburg norms and log-Hölder constants.
//!
//! `cargo run --example variable_exponent`

use padic_harmonic::lcfun::{CellGrid, LCFunction};
use padic_harmonic::norms::{
    conjugate_exponent, log_holder_constants, lq_norm_lc, luxemburg_variable_norm_lc,
    ExponentFunction,
};
use padic_harmonic::numeric::{format_rational, int, rat, Precision};
use padic_harmonic::ultrametric::{BallAddress, FieldParams};

fn main() -> padic_harmonic::Result<()> {
    let prec = Precision::default();
    let params = FieldParams::new(2, 1)?;
    let f = LCFunction::new(
        CellGrid::new(params, 1, -1)?,
        vec![int(3), int(1), int(0), rat(1, 2)],
        int(0),
    )?;

    let constant = ExponentFunction::constant(params, int(2))?;
    println!(
        "constant q = 2: luxemburg {:.8}  lq {:.8}",
        luxemburg_variable_norm_lc(&f, &constant, prec)?,
        lq_norm_lc(&f, &int(2), prec)?
    );

    let unit = BallAddress::centered(params, 0);
    let shape = LCFunction::from_cells(CellGrid::new(params, 0, 0)?, rat(5, 2), |_| int(2));
    let q = ExponentFunction::new(shape)?;
    let q_conj = conjugate_exponent(&q);
    println!(
        "q(·) = 2 on {unit}, 5/2 outside: q- = {}, q+ = {}, q∞ = {}",
        format_rational(&q.q_minus()),
        format_rational(&q.q_plus()),
        format_rational(q.q_infinity())
    );
    println!(
        "conjugate: q'- = {}, q'+ = {}",
        format_rational(&q_conj.q_minus()),
        format_rational(&q_conj.q_plus())
    );
    println!(
        "‖f‖_q(·) = {:.8}",
        luxemburg_variable_norm_lc(&f, &q, prec)?
    );
    println!(
        "‖χ_Z2‖_q(·) = {:.8}",
        luxemburg_variable_norm_lc(&LCFunction::char_fn(&unit), &q, prec)?
    );

    let c = log_holder_constants(&q, prec);
    println!(
        "log-Hölder constants: C0 = {}, C0 (small balls) = {}, C∞ = {:.8}",
        format_rational(&c.c0),
        format_rational(&c.c0_small_balls),
        c.c_infinity
    );
    Ok(())
}
