use std::collections::BTreeMap;

use num_traits::Signed;
use rayon::prelude::*;

use super::engine::SupEngine;
use super::maximal::{check_point, frac_maximal_at, frac_maximal_field};
use super::{Alpha, TailProfile};
use crate::error::Result;
use crate::lcfun::{BinaryOp, LCFunction};
use crate::numeric::{Precision, Rational, RealBound};
use crate::ultrametric::PAdicPoint;

/// `|b(x) - b|·|f|` for a fixed value `b(x) = bx`.
fn weighted(b: &LCFunction, f: &LCFunction, bx: &Rational) -> Result<LCFunction> {
    let gap = b.map(|v| (bx - v).abs());
    gap.combine(&f.abs(), BinaryOp::Mul)
}

/// `M_{α,b} f(x) = sup_{B ∋ x} |B|^(α/n - 1) ∫_B |b(x) - b(y)| |f(y)| dy`.
pub fn maximal_commutator(
    b: &LCFunction,
    f: &LCFunction,
    alpha: &Alpha,
    x: &PAdicPoint,
    prec: Precision,
) -> Result<RealBound> {
    check_point(b, x)?;
    let h = weighted(b, f, b.value_at(x))?;
    frac_maximal_at(&h, alpha, x, prec)
}

/// `M_{α,b} f` on the joint grid of `b` and `f`.
///
/// Cells sharing a value of `b` share the weighted function, so one sweep
/// per distinct value suffices. Far from the structure ball `b` equals its
/// tail value and the weight vanishes there, which gives a pure power tail.
pub fn maximal_commutator_field(
    b: &LCFunction,
    f: &LCFunction,
    alpha: &Alpha,
    prec: Precision,
) -> Result<TailProfile> {
    let grid = b.grid().join(f.grid())?;
    let (b, f) = (b.refine_to(&grid)?, f.refine_to(&grid)?);
    let mut groups: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for (i, v) in b.values().iter().enumerate() {
        groups.entry(v).or_default().push(i);
    }
    let groups: Vec<(&Rational, Vec<usize>)> = groups.into_iter().collect();
    let parts: Vec<Vec<(usize, RealBound)>> = groups
        .par_iter()
        .map(|(v, cells)| -> Result<Vec<(usize, RealBound)>> {
            let h = TailProfile::from_lc(&weighted(&b, &f, v)?);
            let engine = SupEngine::new(&h, alpha, prec)?;
            let outer = engine.centered_sup(grid.structure_level() + 1);
            Ok(cells
                .iter()
                .map(|&i| (i, engine.inner_at_cell(i).max(&outer)))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut core = vec![RealBound::zero(); grid.cell_count()];
    for (i, v) in parts.into_iter().flatten() {
        core[i] = v;
    }
    let far = weighted(&b, &f, b.tail())?;
    let total: Rational = far.values().iter().sum::<Rational>() * grid.cell_measure();
    let e = alpha.value() - Rational::from_integer(grid.params().n().into());
    TailProfile::new(grid, core, RealBound::zero(), RealBound::exact(total), e)
}

/// `[b, M_α] f(x) = b(x) M_α f(x) - M_α(b f)(x)`.
pub fn nonlinear_commutator(
    b: &LCFunction,
    f: &LCFunction,
    alpha: &Alpha,
    x: &PAdicPoint,
    prec: Precision,
) -> Result<RealBound> {
    check_point(b, x)?;
    let bf = b.combine(f, BinaryOp::Mul)?;
    let first = frac_maximal_at(f, alpha, x, prec)?.scale(b.value_at(x));
    Ok(first.sub(&frac_maximal_at(&bf, alpha, x, prec)?))
}

/// `[b, M_α] f` everywhere as a profile.
pub fn nonlinear_commutator_field(
    b: &LCFunction,
    f: &LCFunction,
    alpha: &Alpha,
    prec: Precision,
) -> Result<TailProfile> {
    let bf = b.combine(f, BinaryOp::Mul)?;
    let mf = frac_maximal_field(f, alpha, prec)?.mul_lc(b, prec)?;
    let mbf = frac_maximal_field(&bf, alpha, prec)?;
    mf.sub(&mbf, prec)
}
