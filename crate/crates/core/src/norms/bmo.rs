use num_traits::{Signed, Zero};

use super::{bound_power, NormValue};
use crate::error::{Error, Result};
use crate::lcfun::LCFunction;
use crate::numeric::{Precision, Rational, RealBound};
use crate::ultrametric::BallAddress;

/// Centered levels past the structure ball examined before giving up on the decay bound.
const MAX_CENTERED: i64 = 512;

/// `(1/|B|) ∫_B |b - b_B|`, exact.
pub fn mean_oscillation(b: &LCFunction, ball: &BallAddress) -> Rational {
    let dist = b.distribution(ball);
    let measure = ball.measure();
    let mean: Rational = dist.iter().map(|(v, m)| v * m).sum::<Rational>() / &measure;
    dist.iter()
        .map(|(v, m)| (v - &mean).abs() * m)
        .sum::<Rational>()
        / measure
}

/// `(1/|B|) ∫_B |b - b_B|^q`, exact for integer `q`.
pub fn mean_oscillation_pow(
    b: &LCFunction,
    ball: &BallAddress,
    q: &Rational,
    prec: Precision,
) -> RealBound {
    let p = b.params().p();
    let dist = b.distribution(ball);
    let measure = ball.measure();
    let mean: Rational = dist.iter().map(|(v, m)| v * m).sum::<Rational>() / &measure;
    let mut acc = RealBound::zero();
    for (v, m) in &dist {
        acc = acc.add(&super::power_of(&(v - &mean).abs(), q, p, prec).scale(m));
    }
    acc.scale(&measure.recip())
}

/// `|{y ∈ B : |b(y) - b_B| > t}|`.
pub fn level_set_measure(b: &LCFunction, ball: &BallAddress, t: &Rational) -> Rational {
    let dist = b.distribution(ball);
    let mean: Rational = dist.iter().map(|(v, m)| v * m).sum::<Rational>() / ball.measure();
    dist.iter()
        .filter(|(v, _)| &(v - &mean).abs() > t)
        .map(|(_, m)| m.clone())
        .sum()
}

/// Every ball on which `b` can oscillate, in canonical order: all grid balls
/// by level, then centered balls above the structure ball up to `extra` levels.
pub fn oscillation_balls(b: &LCFunction, extra: i64) -> Vec<BallAddress> {
    let grid = b.grid();
    let mut out = Vec::new();
    for level in grid.resolution()..=grid.structure_level() {
        for i in 0..grid.count_at(level) {
            out.push(grid.ball_at(level, i));
        }
    }
    for k in 1..=extra {
        out.push(BallAddress::centered(
            grid.params(),
            grid.structure_level() + k,
        ));
    }
    out
}

/// Enumerates grid balls, then centered balls until `bound(level)` certifies
/// that no larger ball can beat the best candidate.
fn sup_over_balls(
    b: &LCFunction,
    score: impl Fn(&BallAddress) -> RealBound,
    bound: impl Fn(i64) -> RealBound,
) -> Result<(RealBound, Option<BallAddress>)> {
    let grid = b.grid();
    let mut best = RealBound::zero();
    let mut witness: Option<BallAddress> = None;
    let mut offer = |ball: BallAddress, best: &mut RealBound| {
        let cand = score(&ball);
        if best.lt(&cand).is_true() {
            witness = Some(ball);
        }
        *best = best.max(&cand);
    };
    for ball in oscillation_balls(b, 0) {
        offer(ball, &mut best);
    }
    let gamma = grid.structure_level();
    for level in gamma + 1..=gamma + MAX_CENTERED {
        if bound(level).hi() <= best.lo() {
            return Ok((best, witness));
        }
        offer(BallAddress::centered(grid.params(), level), &mut best);
    }
    Err(Error::Divergence(
        "oscillation over centered balls did not settle".into(),
    ))
}

/// `‖b‖_BMO = sup_B (1/|B|) ∫_B |b - b_B|`, with the first ball attaining it.
///
/// A centered ball `B_γ ⊇ B_Γ` has oscillation at most
/// `2 ∫_{B_Γ} |b - c_∞| / |B_γ|`, which fixes where the sweep stops.
pub fn bmo_norm(b: &LCFunction) -> Result<NormValue> {
    let grid = b.grid();
    let tail = b.tail().clone();
    let spread = b
        .map(|v| (v - &tail).abs())
        .integrate(&grid.structure_ball());
    let params = grid.params();
    let two = Rational::from_integer(2.into());
    let (value, witness) = sup_over_balls(
        b,
        |ball| RealBound::exact(mean_oscillation(b, ball)),
        |level| RealBound::exact(&two * &spread / params.ball_measure(level)),
    )?;
    Ok(NormValue { value, witness })
}

/// `sup_B (1/|B|) ∫_B |b - b_B|^q` for `q > 0`, before the root is taken.
///
/// With `ρ = |B_Γ|/|B_γ|` and `m = max |b - c_∞|`, the centered ball `B_γ`
/// has `q`-oscillation at most `ρ (2m)^q + (ρ m)^q`.
pub fn bmo_q_norm_pow(b: &LCFunction, q: &Rational, prec: Precision) -> Result<NormValue> {
    if q <= &Rational::zero() {
        return Err(Error::Parameter(format!(
            "BMO exponent q = {q} must be positive"
        )));
    }
    let grid = b.grid();
    let params = grid.params();
    let p = params.p();
    let tail = b.tail().clone();
    let m = b.map(|v| (v - &tail).abs()).sup_abs();
    let gamma = grid.structure_level();
    let twice = super::power_of(&(&m * Rational::from_integer(2.into())), q, p, prec);
    let (value, witness) = sup_over_balls(
        b,
        |ball| mean_oscillation_pow(b, ball, q, prec),
        |level| {
            let rho = params.ball_measure(gamma) / params.ball_measure(level);
            twice
                .scale(&rho)
                .add(&super::power_of(&(&rho * &m), q, p, prec))
        },
    )?;
    Ok(NormValue { value, witness })
}

/// `‖b‖_{BMO_q} = sup_B ((1/|B|) ∫_B |b - b_B|^q)^(1/q)`.
pub fn bmo_q_norm(b: &LCFunction, q: &Rational, prec: Precision) -> Result<NormValue> {
    let pre = bmo_q_norm_pow(b, q, prec)?;
    let value = bound_power(&pre.value, &q.recip(), b.params().p(), prec);
    Ok(NormValue {
        value,
        witness: pre.witness,
    })
}
