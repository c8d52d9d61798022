use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lcfun::{BallPlacement, BinaryOp, CellGrid, LCFunction};
use crate::norms::{
    bound_power, lq_norm_pow, luxemburg_pieces, mean_oscillation_pow, power_of, ExponentFunction,
};
use crate::numeric::{Precision, Rational, RealBound};
use crate::operators::{pow_p, restricted_frac_maximal_many, Alpha, SupEngine, TailProfile};
use crate::ultrametric::{BallAddress, FieldParams, PAdicPoint};

/// Centered levels past the structure ball tried before a sweep gives up.
const MAX_SWEEP: i64 = 512;
/// Centered levels above the joint structure ball sampled for variable exponents.
const VARIABLE_EXTRA: i64 = 2;

/// Constant `q` or a variable exponent `q(·)`.
#[derive(Clone, Copy, Debug)]
pub enum ExponentChoice<'a> {
    Constant(&'a Rational),
    Variable(&'a ExponentFunction),
}

/// One ball evaluated along two independent paths.
#[derive(Clone, Debug, Serialize)]
pub struct PathPair {
    pub ball: BallAddress,
    pub first: RealBound,
    pub second: RealBound,
}

/// A supremum over balls of a normalized `‖(b - ·) χ_B‖`.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremQuantity {
    /// The supremum itself.
    pub value: RealBound,
    /// For constant `q`, the supremum of the `q`-th powers.
    pub pre_power: Option<RealBound>,
    pub witness: Option<BallAddress>,
    /// False when the supremum only covers the enumerated balls.
    pub certified: bool,
    pub balls: usize,
    pub paths: Vec<PathPair>,
}

/// The point `p^(-k) e_1`, of absolute value `p^k`.
pub(crate) fn far_point(params: FieldParams, k: i64) -> PAdicPoint {
    let mut xs = vec![Rational::zero(); params.n()];
    xs[0] = crate::numeric::p_pow(params.p(), -k);
    PAdicPoint::from_rationals(params, &xs).expect("valid point")
}

/// Points of `ball` on which every function on `grid` is constant, each
/// with the measure of the piece of `ball` it stands for.
pub(crate) fn ball_pieces(grid: &CellGrid, ball: &BallAddress) -> Vec<(PAdicPoint, Rational)> {
    let cm = grid.cell_measure();
    match grid.place(ball) {
        BallPlacement::Grid(level, index) => grid
            .cells_in(level, index)
            .map(|i| (grid.cell(i).center(), cm.clone()))
            .collect(),
        BallPlacement::WithinCell(_) | BallPlacement::Outside => {
            vec![(ball.center(), ball.measure())]
        }
        BallPlacement::Covers => {
            let params = grid.params();
            let mut out: Vec<(PAdicPoint, Rational)> = grid
                .cells()
                .iter()
                .map(|c| (c.center(), cm.clone()))
                .collect();
            for k in grid.structure_level() + 1..=ball.level() {
                out.push((far_point(params, k), params.sphere_measure(k)));
            }
            out
        }
    }
}

/// Grid balls of `grid` by level, resolution first.
fn grid_balls(grid: &CellGrid) -> Vec<BallAddress> {
    let mut out = Vec::new();
    for level in grid.resolution()..=grid.structure_level() {
        for i in 0..grid.count_at(level) {
            out.push(grid.ball_at(level, i));
        }
    }
    out
}

/// The quantity for a constant symbol, whose normalized numerator is the
/// same value `v` on every ball.
fn constant_symbol(
    b: &LCFunction,
    v: Rational,
    exponent: &ExponentChoice<'_>,
    prec: Precision,
) -> Option<TheoremQuantity> {
    if b.values().iter().any(|x| x != b.tail()) {
        return None;
    }
    let p = b.params().p();
    let pre_power = match exponent {
        ExponentChoice::Constant(q) => Some(power_of(&v, q, p, prec)),
        ExponentChoice::Variable(_) => None,
    };
    let witness = (!v.is_zero()).then(|| b.grid().structure_ball());
    Some(TheoremQuantity {
        value: RealBound::exact(v),
        pre_power,
        witness,
        certified: true,
        balls: 0,
        paths: Vec::new(),
    })
}

fn require_compact(b: &LCFunction) -> Result<()> {
    if !b.tail().is_zero() {
        return Err(Error::Domain(
            "the ball supremum is only certified for compactly supported symbols".into(),
        ));
    }
    Ok(())
}

fn require_q(q: &Rational) -> Result<()> {
    if q <= &Rational::one() {
        return Err(Error::Parameter(format!("exponent q = {q} must exceed 1")));
    }
    Ok(())
}

fn offer(
    best: &mut RealBound,
    witness: &mut Option<BallAddress>,
    cand: RealBound,
    ball: &BallAddress,
) {
    if witness.is_none() || best.lt(&cand).is_true() {
        *witness = Some(ball.clone());
    }
    *best = best.max(&cand);
}

/// `sup_B ‖(b - b_B) χ_B‖ / ‖χ_B‖` for compactly supported or constant `b`.
///
/// For constant `q` each ball's `q`-th power is computed cellwise and
/// divided by `‖χ_B‖_q^q`, and compared with the mean `q`-oscillation of
/// `b` on the same ball. Centered balls `B_γ ⊋ B_Γ` are swept until
/// `ρ (2m)^q + (ρ m)^q` with `ρ = |B_Γ|/|B_γ|`, `m = max|b|`, drops below
/// the running maximum.
pub fn theorem_quantity_maximal(
    b: &LCFunction,
    exponent: ExponentChoice<'_>,
    prec: Precision,
) -> Result<TheoremQuantity> {
    if let Some(t) = constant_symbol(b, Rational::zero(), &exponent, prec) {
        return Ok(t);
    }
    require_compact(b)?;
    let params = b.params();
    let p = params.p();
    match exponent {
        ExponentChoice::Constant(q) => {
            require_q(q)?;
            let grid = *b.grid();
            let gamma = grid.structure_level();
            let m = b.sup_abs();
            let mut best = RealBound::zero();
            let mut witness = None;
            let mut paths = Vec::new();
            let mut visit = |ball: &BallAddress,
                             best: &mut RealBound,
                             witness: &mut Option<BallAddress>|
             -> Result<()> {
                let c = b.ball_mean(ball);
                let mut num = RealBound::zero();
                for (x, w) in ball_pieces(&grid, ball) {
                    num = num.add(&power_of(&(b.value_at(&x) - &c).abs(), q, p, prec).scale(&w));
                }
                let den = lq_norm_pow(&TailProfile::from_lc(&LCFunction::char_fn(ball)), q, prec)?;
                let pre = num.div(&den);
                paths.push(PathPair {
                    ball: ball.clone(),
                    first: pre.clone(),
                    second: mean_oscillation_pow(b, ball, q, prec),
                });
                offer(best, witness, pre, ball);
                Ok(())
            };
            let mut count = 0;
            for ball in grid_balls(&grid) {
                visit(&ball, &mut best, &mut witness)?;
                count += 1;
            }
            let twice = power_of(&(&m * Rational::from_integer(2.into())), q, p, prec);
            let mut settled = false;
            for level in gamma + 1..=gamma + MAX_SWEEP {
                let rho = params.ball_measure(gamma) / params.ball_measure(level);
                let bound = twice.scale(&rho).add(&power_of(&(&rho * &m), q, p, prec));
                if bound.hi() <= best.lo() {
                    settled = true;
                    break;
                }
                visit(
                    &BallAddress::centered(params, level),
                    &mut best,
                    &mut witness,
                )?;
                count += 1;
            }
            if !settled {
                return Err(Error::Divergence(
                    "ball sweep for the oscillation quantity did not settle".into(),
                ));
            }
            let value = bound_power(&best, &q.recip(), p, prec);
            Ok(TheoremQuantity {
                value,
                pre_power: Some(best),
                witness,
                certified: true,
                balls: count,
                paths,
            })
        }
        ExponentChoice::Variable(qfun) => {
            let grid = b.grid().join(qfun.shape().grid())?;
            let balls = variable_balls(&grid);
            let mut best = RealBound::zero();
            let mut witness = None;
            for ball in &balls {
                let c = b.ball_mean(ball);
                let pieces = ball_pieces(&grid, ball);
                let num = luxemburg_pieces(
                    pieces.iter().map(|(y, w)| {
                        (
                            RealBound::exact(b.value_at(y) - &c),
                            qfun.value_at(y).clone(),
                            w.clone(),
                        )
                    }),
                    None,
                    p,
                    prec,
                );
                offer(
                    &mut best,
                    &mut witness,
                    num.div(&indicator_norm(&pieces, qfun, p, prec)),
                    ball,
                );
            }
            Ok(TheoremQuantity {
                value: best,
                pre_power: None,
                witness,
                certified: false,
                balls: balls.len(),
                paths: Vec::new(),
            })
        }
    }
}

/// Balls sampled for a variable exponent: the top two levels of `grid` and
/// two centered balls above it.
fn variable_balls(grid: &CellGrid) -> Vec<BallAddress> {
    let top = grid.structure_level();
    let mut out = Vec::new();
    for level in (top - 1).max(grid.resolution())..=top {
        out.extend((0..grid.count_at(level)).map(|i| grid.ball_at(level, i)));
    }
    for k in 1..=VARIABLE_EXTRA {
        out.push(BallAddress::centered(grid.params(), top + k));
    }
    out
}

/// `‖χ_B‖_{q(·)}` from the pieces of `B`.
fn indicator_norm(
    pieces: &[(PAdicPoint, Rational)],
    qfun: &ExponentFunction,
    p: u32,
    prec: Precision,
) -> RealBound {
    luxemburg_pieces(
        pieces
            .iter()
            .map(|(y, w)| (RealBound::one(), qfun.value_at(y).clone(), w.clone())),
        None,
        p,
        prec,
    )
}

/// `b χ_B`, without refining the grid when `B` already contains the support.
pub(crate) fn cut_to_ball(b: &LCFunction, ball: &BallAddress) -> Result<LCFunction> {
    let grid = b.grid();
    if b.tail().is_zero() && ball.level() >= grid.structure_level() && ball.contains_origin() {
        return Ok(b.clone());
    }
    b.combine(&LCFunction::char_fn(ball), BinaryOp::Mul)
}

/// `g_B(y) = b(y) - |B|^(-α/n) M_{α,B} b(y)` and, along the second path,
/// `|B|^(-α/n) [b, M_α](χ_B)(y)`, on the pieces of `B` cut by `grid`.
pub(crate) fn nonlinear_pieces(
    b: &LCFunction,
    alpha: &Alpha,
    grid: &CellGrid,
    ball: &BallAddress,
    prec: Precision,
) -> Result<Vec<(PAdicPoint, Rational, RealBound, RealBound)>> {
    let p = b.params().p();
    let shrink = pow_p(
        p,
        &(-(alpha.value() * Rational::from_integer(ball.level().into()))),
        prec,
    );
    let chi = TailProfile::from_lc(&LCFunction::char_fn(ball));
    let cut = TailProfile::from_lc(&cut_to_ball(b, ball)?.abs());
    let on_chi = SupEngine::new(&chi, alpha, prec)?;
    let on_cut = SupEngine::new(&cut, alpha, prec)?;
    let pieces = ball_pieces(grid, ball);
    let ys: Vec<PAdicPoint> = pieces.iter().map(|(y, _)| y.clone()).collect();
    let restricted = restricted_frac_maximal_many(b, alpha, ball, &ys, prec)?;
    Ok(pieces
        .into_iter()
        .zip(restricted)
        .map(|((y, w), r)| {
            let by = b.value_at(&y).clone();
            let direct = RealBound::exact(by.clone()).sub(&shrink.mul(&r));
            let via = shrink.mul(&on_chi.at_point(&y).scale(&by).sub(&on_cut.at_point(&y)));
            (y, w, direct, via)
        })
        .collect())
}

/// `sup_B ‖(b - |B|^(-α/n) M_{α,B} b) χ_B‖ / ‖χ_B‖` for compactly supported or constant `b`.
///
/// Each ball's numerator is computed from the restricted maximal function
/// and again from the nonlinear commutator applied to `χ_B`; both are kept
/// in `paths`. On `B_γ ⊋ B_Γ` the integrand is at most `2 max|b|` on the
/// structure ball and at most `p^(-kn) ∫|b|` on the sphere `S_k`, which
/// bounds the `q`-th power of every larger centered ball.
pub fn theorem_quantity_nonlinear(
    b: &LCFunction,
    alpha: &Alpha,
    exponent: ExponentChoice<'_>,
    prec: Precision,
) -> Result<TheoremQuantity> {
    let below = (-b.tail()).max(Rational::zero()) * Rational::from_integer(2.into());
    if let Some(t) = constant_symbol(b, below, &exponent, prec) {
        return Ok(t);
    }
    require_compact(b)?;
    let params = b.params();
    let p = params.p();
    match exponent {
        ExponentChoice::Constant(q) => {
            require_q(q)?;
            let grid = *b.grid();
            let gamma = grid.structure_level();
            let mut best = RealBound::zero();
            let mut witness = None;
            let mut paths = Vec::new();
            let mut count = 0;
            let mut visit = |ball: &BallAddress,
                             best: &mut RealBound,
                             witness: &mut Option<BallAddress>|
             -> Result<()> {
                let mut first = RealBound::zero();
                let mut second = RealBound::zero();
                for (_, w, direct, via) in nonlinear_pieces(b, alpha, &grid, ball, prec)? {
                    first = first.add(&bound_power(&direct.abs(), q, p, prec).scale(&w));
                    second = second.add(&bound_power(&via.abs(), q, p, prec).scale(&w));
                }
                let pre = first.scale(&ball.measure().recip());
                paths.push(PathPair {
                    ball: ball.clone(),
                    first,
                    second,
                });
                offer(best, witness, pre, ball);
                Ok(())
            };
            for ball in grid_balls(&grid) {
                visit(&ball, &mut best, &mut witness)?;
                count += 1;
            }
            let m = b.sup_abs();
            let total = b.abs().integrate(&grid.structure_ball());
            let n = Rational::from_integer(params.n().into());
            let decay = &n * (Rational::one() - q);
            let shells = pow_p(
                p,
                &(&decay * Rational::from_integer((gamma + 1).into())),
                prec,
            )
            .div(&RealBound::one().sub(&pow_p(p, &decay, prec)))
            .scale(&params.sphere_measure(0));
            let core = power_of(&(&m * Rational::from_integer(2.into())), q, p, prec)
                .scale(&params.ball_measure(gamma));
            let mass = core.add(&power_of(&total, q, p, prec).mul(&shells));
            let mut settled = false;
            for level in gamma + 1..=gamma + MAX_SWEEP {
                if mass.scale(&params.ball_measure(level).recip()).hi() <= best.lo() {
                    settled = true;
                    break;
                }
                visit(
                    &BallAddress::centered(params, level),
                    &mut best,
                    &mut witness,
                )?;
                count += 1;
            }
            if !settled {
                return Err(Error::Divergence(
                    "ball sweep for the commutator quantity did not settle".into(),
                ));
            }
            let value = bound_power(&best, &q.recip(), p, prec);
            Ok(TheoremQuantity {
                value,
                pre_power: Some(best),
                witness,
                certified: true,
                balls: count,
                paths,
            })
        }
        ExponentChoice::Variable(qfun) => {
            let grid = b.grid().join(qfun.shape().grid())?;
            let balls = variable_balls(&grid);
            let mut best = RealBound::zero();
            let mut witness = None;
            let mut paths = Vec::new();
            for ball in &balls {
                let pieces = nonlinear_pieces(b, alpha, &grid, ball, prec)?;
                let norm =
                    |pick: fn(&(PAdicPoint, Rational, RealBound, RealBound)) -> &RealBound| {
                        luxemburg_pieces(
                            pieces.iter().map(|t| {
                                (pick(t).clone(), qfun.value_at(&t.0).clone(), t.1.clone())
                            }),
                            None,
                            p,
                            prec,
                        )
                    };
                let n1 = norm(|t| &t.2);
                let n2 = norm(|t| &t.3);
                let plain: Vec<(PAdicPoint, Rational)> =
                    pieces.iter().map(|t| (t.0.clone(), t.1.clone())).collect();
                offer(
                    &mut best,
                    &mut witness,
                    n1.div(&indicator_norm(&plain, qfun, p, prec)),
                    ball,
                );
                paths.push(PathPair {
                    ball: ball.clone(),
                    first: n1,
                    second: n2,
                });
            }
            Ok(TheoremQuantity {
                value: best,
                pre_power: None,
                witness,
                certified: false,
                balls: balls.len(),
                paths,
            })
        }
    }
}

/// `(1 + r)^(1/r) (q - r)^(-1/q)`: the constant obtained by splitting the
/// distribution integral at the level where its two pieces balance.
pub fn kolmogorov_constant(
    r: &Rational,
    q: &Rational,
    p: u32,
    prec: Precision,
) -> Result<RealBound> {
    if !r.is_positive() || q <= r {
        return Err(Error::Parameter(format!(
            "need 0 < r < q, got r = {r}, q = {q}"
        )));
    }
    let first = power_of(&(r + Rational::one()), &r.recip(), p, prec);
    let second = power_of(&(q - r), &q.recip(), p, prec);
    Ok(first.div(&second))
}

/// Every ball inside `B_{Γ+3}` from the top level down, stopping at the
/// first level that would push the count past `limit` or once `target`
/// balls are listed below the grid's resolution.
pub fn characteristic_balls(grid: &CellGrid, target: usize, limit: usize) -> Vec<BallAddress> {
    let params = grid.params();
    let top = grid.structure_level() + 3;
    let mut out = Vec::new();
    let mut level = top;
    loop {
        let sub = CellGrid::new(params, top, level).expect("valid levels");
        let count = sub.count_at(level);
        if out.len() + count > limit {
            break;
        }
        out.extend((0..count).map(|i| sub.ball_at(level, i)));
        if out.len() >= target && level < grid.resolution() {
            break;
        }
        level -= 1;
    }
    out
}
