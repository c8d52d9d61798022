use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::engine::SupEngine;
use super::{Alpha, TailProfile};
use crate::error::{Error, Result};
use crate::lcfun::{BallPlacement, LCFunction};
use crate::norms::{orlicz_average, YoungKind};
use crate::numeric::{Precision, Rational, RealBound};
use crate::ultrametric::{ball_of_point, BallAddress, PAdicPoint};

/// `M_α f(x) = sup_{B ∋ x} |B|^(α/n - 1) ∫_B |f|`.
pub fn frac_maximal_at(
    f: &LCFunction,
    alpha: &Alpha,
    x: &PAdicPoint,
    prec: Precision,
) -> Result<RealBound> {
    check_point(f, x)?;
    let g = TailProfile::from_lc(&f.abs());
    Ok(SupEngine::new(&g, alpha, prec)?.at_point(x))
}

/// `M_α g(x)` for a profile such as the output of another maximal operator.
pub fn maximal_of_profile_at(
    g: &TailProfile,
    alpha: &Alpha,
    x: &PAdicPoint,
    prec: Precision,
) -> Result<RealBound> {
    let g = g.abs()?;
    Ok(SupEngine::new(&g, alpha, prec)?.at_point(x))
}

/// `M_α f` everywhere: one value per input cell plus the far-sphere law.
///
/// Outside the structure ball `B_Γ` the value on `S_k` is `p^(k(α-n)) ∫|f|`
/// for compactly supported `f`; for `α = 0` and tail value `c` it is
/// `|c| + p^(-nk) (∫_{B_Γ}|f| - |c||B_Γ|)⁺`.
pub fn frac_maximal_field(f: &LCFunction, alpha: &Alpha, prec: Precision) -> Result<TailProfile> {
    let g = TailProfile::from_lc(&f.abs());
    let engine = SupEngine::new(&g, alpha, prec)?;
    let grid = *f.grid();
    let outer = engine.centered_sup(grid.structure_level() + 1);
    let core: Vec<RealBound> = (0..grid.cell_count())
        .into_par_iter()
        .map(|i| engine.inner_at_cell(i).max(&outer))
        .collect();
    let total: Rational = f.abs().values().iter().sum::<Rational>() * grid.cell_measure();
    let n = Rational::from_integer(grid.params().n().into());
    if f.tail().is_zero() {
        let e = alpha.value() - &n;
        return TailProfile::new(grid, core, RealBound::zero(), RealBound::exact(total), e);
    }
    let c = f.tail().abs();
    let excess = total - &c * grid.params().ball_measure(grid.structure_level());
    let coeff = if excess.is_positive() {
        excess
    } else {
        Rational::zero()
    };
    TailProfile::new(grid, core, RealBound::exact(c), RealBound::exact(coeff), -n)
}

/// `M_{α,B*} b(y)`: the supremum over the balls `B_γ(y) ⊆ B*` only.
pub fn restricted_frac_maximal(
    b: &LCFunction,
    alpha: &Alpha,
    bstar: &BallAddress,
    y: &PAdicPoint,
    prec: Precision,
) -> Result<RealBound> {
    let mut out = restricted_frac_maximal_many(b, alpha, bstar, std::slice::from_ref(y), prec)?;
    Ok(out.pop().expect("one point"))
}

/// [`restricted_frac_maximal`] at several points of `B*`, sharing the
/// grid-ball integrals of `|b|`.
pub fn restricted_frac_maximal_many(
    b: &LCFunction,
    alpha: &Alpha,
    bstar: &BallAddress,
    ys: &[PAdicPoint],
    prec: Precision,
) -> Result<Vec<RealBound>> {
    check_alpha(b, alpha)?;
    for y in ys {
        check_point(b, y)?;
        if !bstar.contains(y) {
            return Err(Error::Domain(format!(
                "point {y} is not in the ball {bstar}"
            )));
        }
    }
    let abs = b.abs();
    let grid = b.grid();
    let sums = abs.ball_integrals();
    let top = bstar.level();
    let low = grid.resolution().min(top);
    let params = b.params();
    let decays: Vec<RealBound> = (low..=top)
        .map(|level| alpha.decay(params, level, prec))
        .collect();
    Ok(ys
        .iter()
        .map(|y| {
            let mut best: Option<RealBound> = None;
            for (k, level) in (low..=top).enumerate() {
                let ball = ball_of_point(y, level);
                let integral = match grid.place(&ball) {
                    BallPlacement::Grid(l, i) => sums[(l - grid.resolution()) as usize][i].clone(),
                    _ => abs.integrate(&ball),
                };
                let cand = decays[k].scale(&integral);
                best = Some(match best {
                    None => cand,
                    Some(acc) => acc.max(&cand),
                });
            }
            best.expect("nonempty chain")
        })
        .collect())
}

/// `M_ε f(x) = (M(|f|^ε)(x))^(1/ε)`.
pub fn power_maximal(
    f: &LCFunction,
    eps: &Rational,
    x: &PAdicPoint,
    prec: Precision,
) -> Result<RealBound> {
    if !eps.is_positive() {
        return Err(Error::Parameter(format!("ε = {eps} must be positive")));
    }
    check_point(f, x)?;
    let bits = prec.power_bits;
    let lift = |v: &Rational| RealBound::exact(v.abs()).pow(eps, bits);
    let core = f.values().iter().map(lift).collect();
    let g = TailProfile::new(
        *f.grid(),
        core,
        lift(f.tail()),
        RealBound::zero(),
        Rational::zero(),
    )?;
    let alpha = Alpha::zero(f.params().n());
    let m = SupEngine::new(&g, &alpha, prec)?.at_point(x);
    Ok(m.pow(&eps.recip(), bits))
}

/// Centered levels past the support examined before the decay bound is used.
const MAX_LLOGL_TAIL: usize = 64;

/// `sup_{B ∋ x} |B|^(α/n) ‖f‖_{L log L, B}`.
///
/// Once `B_γ(x)` covers the support, with `A = ∫|f| / |B|` and `m = max|f|`,
/// the average is at most `A (1 + ln(m/A))`; the resulting bound
/// `∫|f| p^(γ(α-n)) (1 + ln(m/∫|f|) + nγ ln p)` decreases as soon as one
/// step does, which bounds every remaining ball.
pub fn llogl_maximal(
    f: &LCFunction,
    alpha: &Alpha,
    x: &PAdicPoint,
    prec: Precision,
) -> Result<RealBound> {
    check_point(f, x)?;
    check_alpha(f, alpha)?;
    if !f.tail().is_zero() {
        return Err(Error::Divergence(
            "L log L maximal function needs compact support".into(),
        ));
    }
    let abs = f.abs();
    let grid = f.grid();
    let params = f.params();
    let gamma = grid.structure_level();
    let (start, top) = match grid.index_of_point(x) {
        Some(_) => (grid.resolution(), gamma),
        None => {
            let k = -x.valuation().expect("outside point is nonzero");
            (k, k)
        }
    };
    let candidate = |level: i64| -> Result<RealBound> {
        let avg = orlicz_average(&abs, &ball_of_point(x, level), YoungKind::LlogL, prec)?;
        Ok(alpha.growth(params, level, prec).mul(&avg))
    };
    let mut best = RealBound::zero();
    for level in start..=top {
        best = best.max(&candidate(level)?);
    }
    let total = abs.integrate(&grid.structure_ball());
    if total.is_zero() {
        return Ok(best);
    }
    let bits = prec.power_bits;
    let ln_p = RealBound::exact(Rational::from_integer(params.p().into())).ln(bits);
    let step_log = ln_p.scale(&Rational::from_integer(params.n().into()));
    let base_log = RealBound::exact(abs.sup_abs() / &total)
        .ln(bits)
        .add(&RealBound::one());
    let ratio = alpha.decay(params, 1, prec);
    let one_minus = RealBound::one().sub(&ratio);
    let mut level = top + 1;
    for step in 0.. {
        let k_factor = base_log.add(&step_log.scale(&Rational::from_integer(level.into())));
        let decreasing = ratio.mul(&step_log).le(&k_factor.mul(&one_minus)).is_true();
        if decreasing {
            let bound = alpha
                .decay(params, level, prec)
                .mul(&k_factor)
                .scale(&total);
            if bound.hi() <= best.lo() {
                return Ok(best);
            }
            if step >= MAX_LLOGL_TAIL {
                let hi = best.hi().clone().max(bound.hi().clone());
                return Ok(RealBound::interval(best.lo().clone(), hi));
            }
        }
        best = best.max(&candidate(level)?);
        level += 1;
    }
    unreachable!()
}

pub(crate) fn check_point(f: &LCFunction, x: &PAdicPoint) -> Result<()> {
    if f.params() != x.params() {
        return Err(Error::Parameter(format!(
            "point in {} but function on {}",
            x.params(),
            f.params()
        )));
    }
    Ok(())
}

pub(crate) fn check_alpha(f: &LCFunction, alpha: &Alpha) -> Result<()> {
    if alpha.n() != f.params().n() {
        return Err(Error::Parameter(format!(
            "α built for n = {}, function has n = {}",
            alpha.n(),
            f.params().n()
        )));
    }
    Ok(())
}
