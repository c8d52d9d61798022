use num_traits::{One, Signed, Zero};

use super::theorems::{
    ball_pieces, characteristic_balls, far_point, kolmogorov_constant, theorem_quantity_maximal,
};
use super::theorems::{cut_to_ball, nonlinear_pieces, theorem_quantity_nonlinear, ExponentChoice};
use super::{CheckKind, CheckRecord, Ctx, Instance, Sample};
use crate::error::Result;
use crate::lcfun::{BinaryOp, CellGrid, LCFunction};
use crate::norms::{
    bmo_norm, bmo_q_norm, bmo_q_norm_pow, bound_power, level_set_measure,
    luxemburg_variable_norm_lc, morrey_norm, morrey_norm_lc, orlicz_average, oscillation_balls,
    power_of, weak_lq_norm, ExponentFunction, MorreyParams, YoungKind,
};
use crate::numeric::{format_rational, to_f64, Precision, Rational, RealBound};
use crate::operators::{
    frac_maximal_at, frac_maximal_field, maximal_commutator, maximal_commutator_field,
    nonlinear_commutator_field, pow_p, restricted_frac_maximal_many, Alpha, SupEngine, TailProfile,
};
use crate::ultrametric::{BallAddress, PAdicPoint};

fn describe(f: &LCFunction) -> String {
    let grid = f.grid();
    let values: Vec<String> = f.values().iter().map(|v| v.to_string()).collect();
    format!(
        "Γ={} γ_res={} values=[{}] tail={}",
        grid.structure_level(),
        grid.resolution(),
        values.join(", "),
        f.tail()
    )
}

fn pair_label(i: usize, b: &LCFunction, f: &LCFunction) -> String {
    format!("instance {i}: b: {}; f: {}", describe(b), describe(f))
}

fn symbol_label(i: usize, b: &LCFunction, ball: &BallAddress) -> String {
    format!("instance {i}: b: {}; ball {ball}", describe(b))
}

/// Cell centers of `grid` and two points beyond its structure ball.
fn sample_points(grid: &CellGrid) -> Vec<PAdicPoint> {
    let mut out: Vec<PAdicPoint> = grid.cells().iter().map(|c| c.center()).collect();
    let top = grid.structure_level();
    out.push(far_point(grid.params(), top + 1));
    out.push(far_point(grid.params(), top + 2));
    out
}

fn alphas(ctx: &Ctx) -> Vec<Alpha> {
    let mut out = vec![Alpha::zero(ctx.params.n())];
    if !ctx.alpha.is_zero() {
        out.push(ctx.alpha.clone());
    }
    out
}

fn tagged(name: &str, alpha: &Alpha) -> String {
    format!("{name}[alpha={}]", format_rational(alpha.value()))
}

/// `p^(-γ α)`, i.e. `|B|^(-α/n)` for a ball of level `γ`.
fn shrink(alpha: &Alpha, p: u32, level: i64, prec: Precision) -> RealBound {
    pow_p(
        p,
        &(-(alpha.value() * Rational::from_integer(level.into()))),
        prec,
    )
}

fn exact(r: Rational) -> RealBound {
    RealBound::exact(r)
}

fn theorem_items(ctx: &Ctx) -> &[Instance] {
    &ctx.instances[..ctx.cfg.theorem_family.min(ctx.instances.len())]
}

pub(crate) fn run(ctx: &Ctx, kind: CheckKind) -> Result<Vec<CheckRecord>> {
    Ok(match kind {
        CheckKind::PointwiseNonnegative => vec![pointwise(ctx, false)],
        CheckKind::PointwiseSigned => vec![pointwise(ctx, true)],
        CheckKind::Sandwich => vec![sandwich(ctx)],
        CheckKind::FieldSpotCheck => vec![field_spot_check(ctx)],
        CheckKind::RestrictionIdentity => alphas(ctx)
            .iter()
            .map(|a| restriction_identity(ctx, a))
            .collect(),
        CheckKind::RestrictionAverage => alphas(ctx)
            .iter()
            .map(|a| restriction_average(ctx, a))
            .collect(),
        CheckKind::RestrictionBalance => vec![restriction_balance(ctx)],
        CheckKind::CommutatorRestriction => alphas(ctx)
            .iter()
            .map(|a| commutator_restriction(ctx, a))
            .collect(),
        CheckKind::BmoHomogeneity => vec![bmo_homogeneity(ctx)],
        CheckKind::BmoQRelation => vec![bmo_q_relation(ctx)],
        CheckKind::TheoremMaximal => theorem_maximal(ctx)?,
        CheckKind::TheoremNonlinear => theorem_nonlinear(ctx)?,
        CheckKind::Kolmogorov => vec![kolmogorov(ctx)],
        CheckKind::MorreyProbe => morrey_probe(ctx)?,
        CheckKind::MorreyCharacteristic => vec![morrey_characteristic(ctx)],
        CheckKind::JohnNirenberg => vec![john_nirenberg(ctx)],
        CheckKind::CharacteristicVariable
        | CheckKind::ConjugateProduct
        | CheckKind::FractionalCharacteristic => {
            vec![characteristic(ctx, kind)?]
        }
        CheckKind::GeneralizedHolder => vec![generalized_holder(ctx)],
    })
}

/// `|[b, M_α] f| <= M_{α,b} f` for `b >= 0`, and with the extra term
/// `2 b⁻ M_α f` for signed `b`.
fn pointwise(ctx: &Ctx, signed: bool) -> CheckRecord {
    let alpha = &ctx.alpha;
    let (name, anchor) = if signed {
        (
            "pointwise_signed",
            "|[b,M_α]f| ≤ M_{α,b}f + 2b⁻M_α f pointwise",
        )
    } else {
        (
            "pointwise_nonnegative",
            "|[b,M_α]f| ≤ M_{α,b}f pointwise for b ≥ 0",
        )
    };
    let pick = |inst: &Instance| {
        if signed {
            inst.b.clone()
        } else {
            inst.b_plus.clone()
        }
    };
    ctx.check(
        name,
        anchor,
        &ctx.instances,
        |i, inst| pair_label(i, &pick(inst), &inst.f),
        |inst, prec| {
            let b = pick(inst);
            let comm = nonlinear_commutator_field(&b, &inst.f, alpha, prec)?;
            let mb = maximal_commutator_field(&b, &inst.f, alpha, prec)?;
            let maf = if signed {
                Some(frac_maximal_field(&inst.f, alpha, prec)?)
            } else {
                None
            };
            let grid = b.grid().join(inst.f.grid())?;
            Ok(sample_points(&grid)
                .iter()
                .map(|x| {
                    let mut rhs = mb.value_at(x, prec);
                    if let Some(maf) = &maf {
                        let neg = (-b.value_at(x)).max(Rational::zero())
                            * Rational::from_integer(2.into());
                        rhs = rhs.add(&maf.value_at(x, prec).scale(&neg));
                    }
                    Sample::le(format!("x = {x}"), comm.value_at(x, prec).abs(), rhs)
                })
                .collect())
        },
    )
}

/// `M_{α,b} f <= C ‖b‖_BMO (M(M_α f) + M_α(M f))`.
fn sandwich(ctx: &Ctx) -> CheckRecord {
    let alpha = &ctx.alpha;
    let zero = Alpha::zero(ctx.params.n());
    ctx.check(
        "sandwich",
        "M_{α,b}f ≲ ‖b‖_BMO (M(M_α f) + M_α(Mf)); constant is the largest observed ratio",
        &ctx.instances,
        |i, inst| pair_label(i, &inst.b, &inst.f),
        |inst, prec| {
            let bmo = bmo_norm(&inst.b)?.value;
            if bmo.is_zero() {
                return Ok(Vec::new());
            }
            let mb = maximal_commutator_field(&inst.b, &inst.f, alpha, prec)?;
            let maf = frac_maximal_field(&inst.f, alpha, prec)?.abs()?;
            let mf = frac_maximal_field(&inst.f, &zero, prec)?.abs()?;
            let outer = SupEngine::new(&maf, &zero, prec)?;
            let inner = SupEngine::new(&mf, alpha, prec)?;
            let grid = inst.b.grid().join(inst.f.grid())?;
            Ok(sample_points(&grid)
                .iter()
                .map(|x| {
                    let rhs = bmo.mul(&outer.at_point(x).add(&inner.at_point(x)));
                    Sample::ratio(format!("x = {x}"), mb.value_at(x, prec), rhs)
                })
                .collect())
        },
    )
}

/// Field evaluation against the pointwise definitions.
fn field_spot_check(ctx: &Ctx) -> CheckRecord {
    let alpha = &ctx.alpha;
    ctx.check(
        "field_spot_check",
        "M_α f and M_{α,b} f as fields agree with their pointwise definitions",
        &ctx.instances,
        |i, inst| pair_label(i, &inst.b, &inst.f),
        |inst, prec| {
            let maf = frac_maximal_field(&inst.f, alpha, prec)?;
            let mb = maximal_commutator_field(&inst.b, &inst.f, alpha, prec)?;
            let grid = inst.b.grid().join(inst.f.grid())?;
            let mut out = Vec::new();
            for x in sample_points(&grid) {
                out.push(Sample::eq(
                    format!("M_α f at {x}"),
                    maf.value_at(&x, prec),
                    frac_maximal_at(&inst.f, alpha, &x, prec)?,
                ));
                out.push(Sample::eq(
                    format!("M_α,b f at {x}"),
                    mb.value_at(&x, prec),
                    maximal_commutator(&inst.b, &inst.f, alpha, &x, prec)?,
                ));
            }
            Ok(out)
        },
    )
}

/// `M_α(b χ_B) = M_{α,B} b` on `B`, and `M_α χ_B = |B|^(α/n)` there.
fn restriction_identity(ctx: &Ctx, alpha: &Alpha) -> CheckRecord {
    let params = ctx.params;
    ctx.check(
        &tagged("restriction_identity", alpha),
        "M_α(bχ_B)(y) = M_{α,B}b(y) and M_α(χ_B)(y) = |B|^{α/n} for y in B",
        &ctx.instances,
        |i, inst| symbol_label(i, &inst.b, &inst.ball),
        |inst, prec| {
            let ball = &inst.ball;
            let chi = LCFunction::char_fn(ball);
            let cut = TailProfile::from_lc(&cut_to_ball(&inst.b, ball)?.abs());
            let chi_profile = TailProfile::from_lc(&chi);
            let on_cut = SupEngine::new(&cut, alpha, prec)?;
            let on_chi = SupEngine::new(&chi_profile, alpha, prec)?;
            let grid = *inst.b.grid();
            let growth = alpha.growth(params, ball.level(), prec);
            let ys: Vec<PAdicPoint> = ball_pieces(&grid, ball)
                .into_iter()
                .map(|(y, _)| y)
                .collect();
            let on_b = restricted_frac_maximal_many(&inst.b, alpha, ball, &ys, prec)?;
            let on_indicator = restricted_frac_maximal_many(&chi, alpha, ball, &ys, prec)?;
            let mut out = Vec::new();
            for ((y, rb), rc) in ys.iter().zip(on_b).zip(on_indicator) {
                out.push(Sample::eq(
                    format!("M_α(bχ_B) at {y}"),
                    on_cut.at_point(y),
                    rb,
                ));
                out.push(Sample::eq(
                    format!("M_α χ_B at {y}"),
                    on_chi.at_point(y),
                    growth.clone(),
                ));
                out.push(Sample::eq(format!("M_α,B χ_B at {y}"), rc, growth.clone()));
            }
            Ok(out)
        },
    )
}

/// `|b_B| <= |B|^(-α/n) M_{α,B} b(y)` for `y ∈ B`.
fn restriction_average(ctx: &Ctx, alpha: &Alpha) -> CheckRecord {
    let p = ctx.params.p();
    ctx.check(
        &tagged("restriction_average", alpha),
        "|b_B| ≤ |B|^{-α/n} M_{α,B}b(y) for y in B",
        &ctx.instances,
        |i, inst| symbol_label(i, &inst.b, &inst.ball),
        |inst, prec| {
            let ball = &inst.ball;
            let mean = exact(inst.b.ball_mean(ball).abs());
            let s = shrink(alpha, p, ball.level(), prec);
            let ys: Vec<PAdicPoint> = ball_pieces(inst.b.grid(), ball)
                .into_iter()
                .map(|(y, _)| y)
                .collect();
            let values = restricted_frac_maximal_many(&inst.b, alpha, ball, &ys, prec)?;
            Ok(ys
                .iter()
                .zip(values)
                .map(|(y, v)| Sample::le(format!("y = {y}"), mean.clone(), s.mul(&v)))
                .collect())
        },
    )
}

/// `∫_E (b - b_B) = ∫_F (b_B - b)` with `E = {b > b_B} ∩ B`, `F = {b < b_B} ∩ B`.
fn restriction_balance(ctx: &Ctx) -> CheckRecord {
    ctx.check(
        "restriction_balance",
        "∫_E (b - b_B) = ∫_F (b_B - b) over the upper and lower sets of b in B",
        &ctx.instances,
        |i, inst| symbol_label(i, &inst.b, &inst.ball),
        |inst, _| {
            let dist = inst.b.distribution(&inst.ball);
            let mean = inst.b.ball_mean(&inst.ball);
            let mut upper = Rational::zero();
            let mut lower = Rational::zero();
            for (v, m) in &dist {
                let d = v - &mean;
                if d.is_positive() {
                    upper += d * m;
                } else {
                    lower -= d * m;
                }
            }
            Ok(vec![Sample::eq(
                format!("ball {}", inst.ball),
                exact(upper),
                exact(lower),
            )])
        },
    )
}

/// `b(y) - |B|^(-α/n) M_{α,B} b(y) = |B|^(-α/n) [b, M_α](χ_B)(y)` on `B`.
fn commutator_restriction(ctx: &Ctx, alpha: &Alpha) -> CheckRecord {
    let p = ctx.params.p();
    ctx.check(
        &tagged("commutator_restriction", alpha),
        "b - |B|^{-α/n}M_{α,B}b = |B|^{-α/n}[b,M_α](χ_B) on B",
        &ctx.instances,
        |i, inst| symbol_label(i, &inst.b, &inst.ball),
        |inst, prec| {
            let ball = &inst.ball;
            let chi = LCFunction::char_fn(ball);
            let grid = *inst.b.grid();
            let field = nonlinear_commutator_field(&inst.b, &chi, alpha, prec)?;
            let s = shrink(alpha, p, ball.level(), prec);
            Ok(nonlinear_pieces(&inst.b, alpha, &grid, ball, prec)?
                .into_iter()
                .flat_map(|(y, _, direct, via)| {
                    let public = s.mul(&field.value_at(&y, prec));
                    [
                        Sample::eq(format!("y = {y}"), direct.clone(), via),
                        Sample::eq(format!("y = {y}, commutator field"), direct, public),
                    ]
                })
                .collect())
        },
    )
}

fn bmo_homogeneity(ctx: &Ctx) -> CheckRecord {
    ctx.check(
        "bmo_homogeneity",
        "‖cb‖_BMO = |c| ‖b‖_BMO",
        &ctx.instances,
        |i, inst| {
            format!(
                "instance {i}: c = {}; b: {}",
                format_rational(&inst.scalar),
                describe(&inst.b)
            )
        },
        |inst, _| {
            let c = &inst.scalar;
            let lhs = bmo_norm(&inst.b.scale(c))?.value;
            let rhs = bmo_norm(&inst.b)?.value.scale(&c.abs());
            Ok(vec![Sample::eq(
                format!("c = {}", format_rational(c)),
                lhs,
                rhs,
            )])
        },
    )
}

/// `‖b‖_BMO <= ‖b‖_{BMO_q}`; when the two meet on the witness ball of
/// `‖b‖_BMO` the comparison is made against that ball's own `q`-oscillation.
fn bmo_q_relation(ctx: &Ctx) -> CheckRecord {
    let qs = [
        Rational::new(3.into(), 2.into()),
        Rational::from_integer(2.into()),
        Rational::from_integer(3.into()),
    ];
    ctx.check(
        "bmo_q_relation",
        "‖b‖_BMO ≤ ‖b‖_{BMO_q} for q ≥ 1",
        &ctx.instances,
        |i, inst| format!("instance {i}: b: {}", describe(&inst.b)),
        |inst, prec| {
            let bmo = bmo_norm(&inst.b)?;
            let mut out = Vec::new();
            for q in &qs {
                let at = format!("q = {}", format_rational(q));
                let bq = bmo_q_norm(&inst.b, q, prec)?;
                let plain = Sample::le(at.clone(), bmo.value.clone(), bq.value.clone());
                let tie = match &bmo.witness {
                    Some(ball) if !bmo.value.le(&bq.value).is_true() => {
                        let mean = inst.b.ball_mean(ball);
                        let devs: Vec<Rational> = inst
                            .b
                            .distribution(ball)
                            .iter()
                            .map(|(v, _)| (v - &mean).abs())
                            .collect();
                        let flat = devs.windows(2).all(|w| w[0] == w[1]);
                        flat.then(|| {
                            let own = exact(devs[0].clone());
                            Sample::le(
                                format!("{at}, |b - b_B| constant on {ball}"),
                                bmo.value.clone(),
                                own,
                            )
                        })
                    }
                    _ => None,
                };
                out.push(tie.unwrap_or(plain));
            }
            Ok(out)
        },
    )
}

fn quantity_samples(t: &super::TheoremQuantity) -> Vec<Sample> {
    let mut out: Vec<Sample> = t
        .paths
        .iter()
        .map(|pp| {
            Sample::eq(
                format!("two paths on {}", pp.ball),
                pp.first.clone(),
                pp.second.clone(),
            )
        })
        .collect();
    let at = match &t.witness {
        Some(b) => format!("supremum over {} balls, attained on {b}", t.balls),
        None => format!("supremum over {} balls", t.balls),
    };
    out.push(Sample::ratio(at, t.value.clone(), RealBound::one()));
    out
}

const UNCERTIFIED: &str =
    "variable exponent: supremum over the top two joint-grid levels and two centered balls above them only";

fn theorem_maximal(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let q = ctx.cfg.q_value();
    let (_, q_fn) = ctx.cfg.exponent_pair()?;
    let label =
        |i: usize, inst: &Instance| format!("instance {i}: b: {}", describe(&inst.b_compact()));
    let constant = ctx.check(
        "theorem_maximal",
        "sup_B ‖(b - b_B)χ_B‖_q / ‖χ_B‖_q equals ‖b‖_{BMO_q}",
        theorem_items(ctx),
        label,
        |inst, prec| {
            let b = inst.b_compact();
            let t = theorem_quantity_maximal(&b, ExponentChoice::Constant(&q), prec)?;
            let mut out = quantity_samples(&t);
            let reference = bmo_q_norm_pow(&b, &q, prec)?.value;
            out.push(Sample::eq(
                "q-th powers against the BMO_q supremum",
                t.pre_power.clone().expect("constant q"),
                reference,
            ));
            Ok(out)
        },
    );
    let mut variable = ctx.check(
        "theorem_maximal_variable",
        "sup_B ‖(b - b_B)χ_B‖_{q(·)} / ‖χ_B‖_{q(·)} is finite",
        theorem_items(ctx),
        label,
        |inst, prec| {
            Ok(quantity_samples(&theorem_quantity_maximal(
                &inst.b_compact(),
                ExponentChoice::Variable(&q_fn),
                prec,
            )?))
        },
    );
    variable.note.get_or_insert_with(|| UNCERTIFIED.to_string());
    Ok(vec![constant, variable])
}

fn theorem_nonlinear(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let q = ctx.cfg.q_value();
    let (_, q_fn) = ctx.cfg.exponent_pair()?;
    let alpha = &ctx.alpha;
    let label =
        |i: usize, inst: &Instance| format!("instance {i}: b: {}", describe(&inst.b_compact()));
    let constant = ctx.check(
        "theorem_nonlinear",
        "sup_B ‖(b - |B|^{-α/n}M_{α,B}b)χ_B‖_q / ‖χ_B‖_q is finite; per-ball values agree with [b,M_α](χ_B)",
        theorem_items(ctx),
        label,
        |inst, prec| {
            Ok(quantity_samples(&theorem_quantity_nonlinear(&inst.b_compact(), alpha, ExponentChoice::Constant(&q), prec)?))
        },
    );
    let mut variable = ctx.check(
        "theorem_nonlinear_variable",
        "sup_B ‖(b - |B|^{-α/n}M_{α,B}b)χ_B‖_{q(·)} / ‖χ_B‖_{q(·)} is finite",
        theorem_items(ctx),
        label,
        |inst, prec| {
            Ok(quantity_samples(&theorem_quantity_nonlinear(
                &inst.b_compact(),
                alpha,
                ExponentChoice::Variable(&q_fn),
                prec,
            )?))
        },
    );
    variable.note.get_or_insert_with(|| UNCERTIFIED.to_string());
    Ok(vec![constant, variable])
}

/// `(|B|^-1 ∫_B |f|^r)^(1/r) <= C(r,q) |B|^(-1/q) ‖f χ_B‖_{L^{q,∞}}`.
fn kolmogorov(ctx: &Ctx) -> CheckRecord {
    ctx.check(
        "kolmogorov",
        "(|B|^{-1}∫_B|f|^r)^{1/r} ≤ C(r,q)|B|^{-1/q}‖fχ_B‖_{L^{q,∞}}, C(r,q) = (1+r)^{1/r}(q-r)^{-1/q}",
        &ctx.instances,
        |i, inst| {
            let (r, q) = &inst.exponents;
            format!(
                "instance {i}: r = {}, q = {}; f: {}; ball {}",
                format_rational(r),
                format_rational(q),
                describe(&inst.f),
                inst.f_ball
            )
        },
        |inst, prec| {
            let (r, q) = &inst.exponents;
            let ball = &inst.f_ball;
            let p = inst.f.params().p();
            let measure = ball.measure();
            let mut acc = RealBound::zero();
            for (v, m) in inst.f.abs().distribution(ball) {
                acc = acc.add(&power_of(&v, r, p, prec).scale(&m));
            }
            let lhs = bound_power(&acc.scale(&measure.recip()), &r.recip(), p, prec);
            let weak = weak_lq_norm(&inst.f, q, ball, prec)?.mul(&power_of(&measure, &(-q.recip()), p, prec));
            let c = kolmogorov_constant(r, q, p, prec)?;
            Ok(vec![
                Sample::le(format!("ball {ball}"), lhs.clone(), c.mul(&weak)),
                Sample::ratio("observed ratio", lhs, weak),
            ])
        },
    )
}

fn morrey_probe(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let cfg = &ctx.cfg;
    let n = ctx.params.n();
    let source = MorreyParams::new(cfg.r.clone(), cfg.lambda.clone().expect("resolved"), n)?;
    let target = MorreyParams::new(
        cfg.morrey_q.clone().expect("resolved"),
        cfg.mu.clone().expect("resolved"),
        n,
    )?;
    let alpha = &ctx.alpha;
    let anchor_for = |op: &str| {
        format!(
            "{op} maps L^{{{},{}}} to L^{{{},{}}}; constant is the largest observed ratio",
            format_rational(source.q()),
            format_rational(source.lambda()),
            format_rational(target.q()),
            format_rational(target.lambda())
        )
    };
    let probe = |name: &str, op: &str, nonlinear: bool| {
        ctx.check(
            name,
            &anchor_for(op),
            &ctx.instances,
            |i, inst| pair_label(i, if nonlinear { &inst.b_plus } else { &inst.b }, &inst.f),
            |inst, prec| {
                let image = if nonlinear {
                    nonlinear_commutator_field(&inst.b_plus, &inst.f, alpha, prec)?
                } else {
                    maximal_commutator_field(&inst.b, &inst.f, alpha, prec)?
                };
                let lhs = morrey_norm(&image, &target, prec)?.value;
                let rhs = morrey_norm_lc(&inst.f, &source, prec)?.value;
                Ok(vec![Sample::ratio("Morrey norms", lhs, rhs)])
            },
        )
    };
    Ok(vec![
        probe("morrey_nonlinear_commutator", "[b,M_α] with b ≥ 0", true),
        probe("morrey_maximal_commutator", "M_{α,b}", false),
    ])
}

/// `‖χ_B‖_{L^{r,λ}} = |B|^((1 - λ/n)/r)`, attained on `B` itself.
fn morrey_characteristic(ctx: &Ctx) -> CheckRecord {
    let n = ctx.params.n();
    let nr = Rational::from_integer(n.into());
    let lambda = ctx.cfg.lambda.clone().expect("resolved");
    let mut pairs = Vec::new();
    for r in [
        ctx.cfg.r.clone(),
        Rational::from_integer(2.into()),
        Rational::from_integer(3.into()),
    ] {
        for l in [
            lambda.clone(),
            &nr / Rational::from_integer(2.into()),
            &nr * Rational::new(3.into(), 4.into()),
        ] {
            if !pairs.contains(&(r.clone(), l.clone())) {
                pairs.push((r.clone(), l));
            }
        }
    }
    let items: Vec<BallAddress> = ctx
        .instances
        .iter()
        .flat_map(|i| [i.ball.clone(), i.f_ball.clone()])
        .collect();
    ctx.check(
        "morrey_characteristic",
        "‖χ_B‖_{L^{r,λ}} = |B|^{(1-λ/n)/r}, attained on B",
        &items,
        |i, ball| format!("ball {i}: {ball}"),
        |ball, prec| {
            let chi = LCFunction::char_fn(ball);
            let p = ball.params().p();
            let mut out = Vec::new();
            for (r, l) in &pairs {
                let mp = MorreyParams::new(r.clone(), l.clone(), n)?;
                let v = morrey_norm_lc(&chi, &mp, prec)?;
                let e = (&nr - l) / r * Rational::from_integer(ball.level().into());
                let at = format!("r = {}, λ = {}", format_rational(r), format_rational(l));
                out.push(Sample::eq(at.clone(), v.value, pow_p(p, &e, prec)));
                let hit = if v.witness.as_ref() == Some(ball) {
                    Rational::zero()
                } else {
                    Rational::one()
                };
                out.push(Sample::eq(
                    format!("{at}: witness is B"),
                    exact(Rational::zero()),
                    exact(hit),
                ));
            }
            Ok(out)
        },
    )
}

/// Thresholds at which `t ↦ |{|b - b_B| > t} ∩ B|` can change, with midpoints.
fn thresholds(devs: &[Rational]) -> Vec<Rational> {
    let mut ts: Vec<Rational> = devs.to_vec();
    ts.push(Rational::zero());
    ts.sort();
    ts.dedup();
    let mids: Vec<Rational> = ts
        .windows(2)
        .map(|w| (&w[0] + &w[1]) / Rational::from_integer(2.into()))
        .collect();
    ts.extend(mids);
    ts.sort();
    ts
}

fn deviations(b: &LCFunction, ball: &BallAddress) -> Vec<Rational> {
    let mean = b.ball_mean(ball);
    b.distribution(ball)
        .iter()
        .map(|(v, _)| (v - &mean).abs())
        .collect()
}

/// Distribution decay of `|b - b_B|` and the exponential mean
/// `|B|^-1 ∫_B exp(c |b - b_B| / ‖b‖_BMO)` at `c = exponential_fraction`.
fn john_nirenberg(ctx: &Ctx) -> CheckRecord {
    let c = ctx.cfg.exponential_fraction.clone();
    let mut rec = ctx.check(
        "john_nirenberg",
        "|{y∈B : |b-b_B|>t}| ≤ c1 e^{-c2 t/‖b‖_BMO}|B|; constant is sup_B |B|^{-1}∫_B exp(c|b-b_B|/‖b‖_BMO)",
        &ctx.instances,
        |i, inst| format!("instance {i}: b: {}", describe(&inst.b)),
        |inst, prec| {
            let bmo = bmo_norm(&inst.b)?.value;
            let Some(bmo) = bmo.as_rational().cloned() else { return Ok(Vec::new()) };
            if bmo.is_zero() {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for ball in oscillation_balls(&inst.b, 2) {
                let measure = ball.measure();
                let ts = thresholds(&deviations(&inst.b, &ball));
                let ms: Vec<Rational> = ts.iter().map(|t| level_set_measure(&inst.b, &ball, t)).collect();
                for (k, m) in ms.iter().enumerate() {
                    out.push(Sample::le(format!("{ball}: level {}", format_rational(&ts[k])), exact(m.clone()), exact(measure.clone())));
                    if k > 0 {
                        out.push(Sample::le(
                            format!("{ball}: decreasing at {}", format_rational(&ts[k])),
                            exact(m.clone()),
                            exact(ms[k - 1].clone()),
                        ));
                    }
                }
                let mean = inst.b.ball_mean(&ball);
                let mut acc = RealBound::zero();
                for (v, m) in inst.b.distribution(&ball) {
                    let arg = &c * (v - &mean).abs() / &bmo;
                    acc = acc.add(&exact(arg).exp(prec.power_bits).scale(&m));
                }
                out.push(Sample::ratio(format!("exponential mean on {ball}"), acc.scale(&measure.recip()), RealBound::one()));
            }
            Ok(out)
        },
    );
    let fit = fit_decay(&ctx.instances);
    if let Some(c2) = fit {
        let text = format!("fitted c1 = e, c2 = {c2:.6}");
        rec.note = Some(match rec.note.take() {
            Some(old) => format!("{text}; {old}"),
            None => text,
        });
    }
    rec
}

/// Largest `c2` with `m(t) <= e · exp(-c2 t/‖b‖) |B|` on every sampled level set.
fn fit_decay(instances: &[Instance]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for inst in instances {
        let Ok(bmo) = bmo_norm(&inst.b) else { continue };
        let Some(bmo) = bmo.value.as_rational().map(to_f64) else {
            continue;
        };
        if bmo == 0.0 {
            continue;
        }
        for ball in oscillation_balls(&inst.b, 2) {
            let measure = to_f64(&ball.measure());
            for t in thresholds(&deviations(&inst.b, &ball)) {
                let m = to_f64(&level_set_measure(&inst.b, &ball, &t));
                let t = to_f64(&t);
                if t > 0.0 && m > 0.0 {
                    let c2 = (1.0 + (measure / m).ln()) * bmo / t;
                    best = Some(best.map_or(c2, |b: f64| b.min(c2)));
                }
            }
        }
    }
    best
}

/// Two-sided comparisons of characteristic-function norms of variable
/// exponents over an enumerated family of balls.
fn characteristic(ctx: &Ctx, kind: CheckKind) -> Result<CheckRecord> {
    let (r_fn, q_fn) = ctx.cfg.exponent_pair()?;
    let r_conj = crate::norms::conjugate_exponent(&r_fn);
    let grid = r_fn.shape().grid().join(q_fn.shape().grid())?;
    let balls = characteristic_balls(&grid, 100, 1024);
    let p = ctx.params.p();
    let n = Rational::from_integer(ctx.params.n().into());
    let alpha = &ctx.alpha;
    let norm = |f: &LCFunction, e: &ExponentFunction, prec| luxemburg_variable_norm_lc(f, e, prec);
    let both = |at: &str, lhs: RealBound, rhs: RealBound| {
        vec![
            Sample::ratio(format!("{at}: upper"), lhs.clone(), rhs.clone()),
            Sample::ratio(format!("{at}: lower"), rhs, lhs),
        ]
    };
    let label = |i: usize, b: &BallAddress| format!("ball {i}: {b}");
    let rec = match kind {
        CheckKind::CharacteristicVariable => ctx.check(
            "characteristic_variable",
            "‖χ_B‖_{r(·)} ≈ |B|^{1/r(x,γ)} for B = B_γ(x)",
            &balls,
            label,
            |ball, prec| {
                let lhs = norm(&LCFunction::char_fn(ball), &r_fn, prec)?;
                let e = &n * Rational::from_integer(ball.level().into())
                    / r_fn.at_scale(&ball.center(), ball.level());
                Ok(both(&format!("{ball}"), lhs, pow_p(p, &e, prec)))
            },
        ),
        CheckKind::ConjugateProduct => ctx.check(
            "conjugate_product",
            "‖χ_B‖_{r(·)} ‖χ_B‖_{r'(·)} ≈ |B|",
            &balls,
            label,
            |ball, prec| {
                let chi = LCFunction::char_fn(ball);
                let lhs = norm(&chi, &r_fn, prec)?.mul(&norm(&chi, &r_conj, prec)?);
                Ok(both(&format!("{ball}"), lhs, exact(ball.measure())))
            },
        ),
        _ => ctx.check(
            "fractional_characteristic",
            "|B|^{α/n}‖χ_B‖_{q(·)} ≈ ‖χ_B‖_{r(·)} when 1/q(·) = 1/r(·) - α/n",
            &balls,
            label,
            |ball, prec| {
                let chi = LCFunction::char_fn(ball);
                let lhs = alpha
                    .growth(ball.params(), ball.level(), prec)
                    .mul(&norm(&chi, &q_fn, prec)?);
                Ok(both(&format!("{ball}"), lhs, norm(&chi, &r_fn, prec)?))
            },
        ),
    };
    Ok(rec)
}

/// `|B|^-1 ∫_B |b - b_B| |f| <= C ‖b‖_BMO ‖f‖_{L log L, B}`.
fn generalized_holder(ctx: &Ctx) -> CheckRecord {
    ctx.check(
        "generalized_holder",
        "|B|^{-1}∫_B|b-b_B||f| ≲ ‖b‖_BMO ‖f‖_{L log L,B}; constant is the largest observed ratio",
        theorem_items(ctx),
        |i, inst| pair_label(i, &inst.b, &inst.f),
        |inst, prec| {
            let bmo = bmo_norm(&inst.b)?.value;
            if bmo.is_zero() {
                return Ok(Vec::new());
            }
            let grid = inst.b.grid().join(inst.f.grid())?;
            let balls = [
                inst.ball.clone(),
                inst.f_ball.clone(),
                grid.structure_ball(),
                grid.structure_ball().parent(),
            ];
            let mut out = Vec::new();
            for ball in balls {
                let c = inst.b.ball_mean(&ball);
                let g = inst
                    .b
                    .map(|v| (v - &c).abs())
                    .combine(&inst.f.abs(), BinaryOp::Mul)?;
                let lhs = exact(g.integrate(&ball) / ball.measure());
                let rhs = bmo.mul(&orlicz_average(&inst.f, &ball, YoungKind::LlogL, prec)?);
                out.push(Sample::ratio(format!("ball {ball}"), lhs, rhs));
            }
            Ok(out)
        },
    )
}

/// The nonnegative pointwise bound with its right side halved; the pair
/// `b = f = χ_{B_0(0)}` attains equality at `|x| = p`, so this must fail.
pub(crate) fn planted_violation(ctx: &Ctx) -> CheckRecord {
    let alpha = &ctx.alpha;
    let chi = LCFunction::char_fn(&BallAddress::centered(ctx.params, 0));
    let mut items = vec![(chi.clone(), chi)];
    items.extend(
        ctx.instances
            .iter()
            .take(4)
            .map(|i| (i.b_plus.clone(), i.f.clone())),
    );
    let half = Rational::new(1.into(), 2.into());
    ctx.check(
        "planted_violation",
        "self-test: |[b,M_α]f| ≤ M_{α,b}f / 2 is false and must be reported",
        &items,
        |i, (b, f)| pair_label(i, b, f),
        |(b, f), prec| {
            let comm = nonlinear_commutator_field(b, f, alpha, prec)?;
            let mb = maximal_commutator_field(b, f, alpha, prec)?;
            let grid = b.grid().join(f.grid())?;
            Ok(sample_points(&grid)
                .iter()
                .map(|x| {
                    Sample::le(
                        format!("x = {x}"),
                        comm.value_at(x, prec).abs(),
                        mb.value_at(x, prec).scale(&half),
                    )
                })
                .collect())
        },
    )
}
