use num_traits::{One, Signed, Zero};
use padic_harmonic::lcfun::{BinaryOp, CellGrid, LCFunction};
use padic_harmonic::norms::{bmo_norm, bmo_q_norm, level_set_measure, lq_norm_lc, weak_lq_norm};
use padic_harmonic::numeric::{int, rat, Precision, Rational, RealBound, Tri};
use padic_harmonic::operators::{
    frac_maximal_at, frac_maximal_field, maximal_commutator, nonlinear_commutator,
    restricted_frac_maximal, Alpha,
};
use padic_harmonic::ultrametric::{
    ball_of_point, ball_relation, padic_abs, BallAddress, BallRelation, FieldParams, PAdicPoint,
};
use padic_harmonic::verify::{
    generate_family, kolmogorov_constant, theorem_quantity_nonlinear, ExponentChoice, FunctionSpec,
    SignConstraint,
};
use proptest::prelude::*;

fn prec() -> Precision {
    Precision::default()
}

/// Digit data for a point with coordinates `a / p^k`, `a >= 0`.
fn coords() -> impl Strategy<Value = Vec<(i64, u32)>> {
    proptest::collection::vec((0i64..=40, 0u32..=3), 2)
}

fn point(f: FieldParams, xs: &[(i64, u32)]) -> PAdicPoint {
    let xs: Vec<Rational> = xs[..f.n()]
        .iter()
        .map(|&(a, k)| rat(a, i64::from(f.p()).pow(k)))
        .collect();
    PAdicPoint::from_rationals(f, &xs).unwrap()
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=200, 1i64..=200, any::<bool>())
        .prop_map(|(a, b, neg)| if neg { rat(-a, b) } else { rat(a, b) })
}

fn params() -> impl Strategy<Value = FieldParams> {
    (prop_oneof![Just(2u32), Just(3u32)], 1usize..=2)
        .prop_map(|(p, n)| FieldParams::new(p, n).unwrap())
}

/// A function on a random grid with at most 81 cells.
fn lc_function(
    params: FieldParams,
    compact: bool,
    nonnegative: bool,
) -> impl Strategy<Value = LCFunction> {
    let max_depth = if params.branching() > 4 { 2 } else { 3 };
    (-1i64..=2, 0i64..=max_depth).prop_flat_map(move |(gamma, depth)| {
        let grid = CellGrid::new(params, gamma, gamma - depth).unwrap();
        let value =
            (if nonnegative { 0i64 } else { -6 }..=6, 1i64..=3).prop_map(|(a, b)| rat(a, b));
        let tail = if compact {
            Just(Rational::zero()).boxed()
        } else {
            value.clone().boxed()
        };
        (proptest::collection::vec(value, grid.cell_count()), tail)
            .prop_map(move |(values, tail)| LCFunction::new(grid, values, tail).unwrap())
    })
}

fn any_function() -> impl Strategy<Value = LCFunction> {
    params().prop_flat_map(|p| lc_function(p, false, false))
}

fn compact_function() -> impl Strategy<Value = LCFunction> {
    params().prop_flat_map(|p| lc_function(p, true, false))
}

/// A grid ball of `f` chosen by `(level offset, index seed)`.
fn pick_ball(f: &LCFunction, offset: u8, seed: usize) -> BallAddress {
    let grid = f.grid();
    let span = (grid.structure_level() - grid.resolution()) as u8 + 1;
    let level = grid.resolution() + (offset % span) as i64;
    grid.ball_at(level, seed % grid.count_at(level))
}

fn not_refuted(lhs: &RealBound, rhs: &RealBound) -> bool {
    lhs.le(rhs) != Tri::False
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn spheres_telescope(p in prop_oneof![Just(2u32), Just(3), Just(5), Just(7)], n in 1usize..=3, gamma in -6i64..=6, k in 1i64..=8) {
        let f = FieldParams::new(p, n).unwrap();
        let sum: Rational = (gamma - k + 1..=gamma).map(|j| f.sphere_measure(j)).sum();
        prop_assert_eq!(sum, f.ball_measure(gamma) - f.ball_measure(gamma - k));
    }

    #[test]
    fn children_round_trip(f in params(), xs in coords(), level in -3i64..=3) {
        let x = point(f, &xs);
        let b = ball_of_point(&x, level);
        let kids = b.children();
        prop_assert_eq!(kids.len() as u64, f.branching());
        let total: Rational = kids.iter().map(BallAddress::measure).sum();
        prop_assert_eq!(total, b.measure());
        for c in &kids {
            prop_assert_eq!(&c.parent(), &b);
            prop_assert_eq!(ball_relation(c, &b).unwrap(), BallRelation::FirstInsideSecond);
            prop_assert_eq!(&c.to_string().parse::<BallAddress>().unwrap(), c);
        }
    }

    #[test]
    fn absolute_value_is_multiplicative_and_ultrametric(x in nonzero_rational(), y in nonzero_rational(), p in prop_oneof![Just(2u32), Just(3), Just(5)]) {
        prop_assert_eq!(padic_abs(&(&x * &y), p), padic_abs(&x, p) * padic_abs(&y, p));
        let (ax, ay) = (padic_abs(&x, p), padic_abs(&y, p));
        let s = padic_abs(&(&x + &y), p);
        prop_assert!(s <= ax.clone().max(ay.clone()));
        if ax != ay {
            prop_assert_eq!(s, ax.max(ay));
        }
    }

    #[test]
    fn relations_never_partially_overlap(f in params(), a in coords(), b in coords(), la in -3i64..=3, lb in -3i64..=3) {
        let x = point(f, &a);
        let y = point(f, &b);
        let (ba, bb) = (ball_of_point(&x, la), ball_of_point(&y, lb));
        match ball_relation(&ba, &bb).unwrap() {
            BallRelation::Disjoint => prop_assert!(!ba.contains(&bb.center()) && !bb.contains(&ba.center())),
            BallRelation::FirstInsideSecond => prop_assert!(bb.contains(&ba.center()) && ba.measure() < bb.measure()),
            BallRelation::SecondInsideFirst => prop_assert!(ba.contains(&bb.center()) && bb.measure() < ba.measure()),
            BallRelation::Equal => prop_assert_eq!(&ba, &bb),
        }
    }

    #[test]
    fn lebesgue_differentiation_at_finite_scale(f in any_function(), drop in 0i64..3) {
        for cell in f.grid().cells() {
            let x = cell.center();
            let b = ball_of_point(&x, f.grid().resolution() - drop);
            prop_assert_eq!(&f.ball_mean(&b), f.value_at(&x));
        }
    }

    #[test]
    fn oscillation_split(f in any_function(), offset in any::<u8>(), seed in any::<usize>()) {
        let b = pick_ball(&f, offset, seed);
        let mean = f.ball_mean(&b);
        let (mut below, mut above) = (Rational::zero(), Rational::zero());
        for (v, m) in f.distribution(&b) {
            let d = (&v - &mean).abs() * m;
            if v <= mean { below += d } else { above += d }
        }
        prop_assert_eq!(below, above);
    }

    #[test]
    fn holder_on_balls(f in compact_function(), seed in any::<u64>(), offset in any::<u8>(), idx in any::<usize>(), q in prop_oneof![Just(rat(3, 2)), Just(int(2)), Just(int(3))]) {
        let spec = FunctionSpec {
            structure_levels: [f.grid().structure_level(); 2],
            depth: [0, 1],
            levels: [-4, 3],
            numerator_bound: 5,
            denominator_bound: 3,
            sign: SignConstraint::Any,
            compact: true,
        };
        let g = generate_family(f.params(), &spec, 1, seed).unwrap().pop().unwrap();
        let b = pick_ball(&f, offset, idx);
        let chi = LCFunction::char_fn(&b);
        let lhs = f.combine(&g, BinaryOp::Mul).unwrap().abs().integrate(&b);
        let conj = &q / (&q - Rational::one());
        let nf = lq_norm_lc(&f.combine(&chi, BinaryOp::Mul).unwrap(), &q, prec()).unwrap();
        let ng = lq_norm_lc(&g.combine(&chi, BinaryOp::Mul).unwrap(), &conj, prec()).unwrap();
        prop_assert!(not_refuted(&RealBound::exact(lhs), &nf.mul(&ng)));
    }

    #[test]
    fn locality_of_restricted_maximal(b in any_function(), offset in any::<u8>(), idx in any::<usize>()) {
        let ball = pick_ball(&b, offset, idx);
        let cut = b.combine(&LCFunction::char_fn(&ball), BinaryOp::Mul).unwrap();
        let n = b.params().n();
        for alpha in [Rational::zero(), rat(1, 2)] {
            let a = Alpha::new(alpha.clone(), n).unwrap();
            for cell in b.grid().cells().iter().filter(|c| ball.contains(&c.center())) {
                let y = cell.center();
                let lhs = frac_maximal_at(&cut, &a, &y, prec()).unwrap();
                let rhs = restricted_frac_maximal(&b, &a, &ball, &y, prec()).unwrap();
                if alpha.is_zero() {
                    prop_assert_eq!(&lhs, &rhs);
                } else {
                    prop_assert!(lhs.overlaps(&rhs));
                }
            }
        }
    }

    #[test]
    fn pointwise_commutator_bounds(b in any_function(), f_seed in any::<u64>(), alpha in prop_oneof![Just(Rational::zero()), Just(rat(1, 2))]) {
        let params = b.params();
        let spec = FunctionSpec {
            structure_levels: [-1, 2],
            depth: [0, 2],
            levels: [-4, 3],
            numerator_bound: 6,
            denominator_bound: 3,
            sign: SignConstraint::Any,
            compact: true,
        };
        let f = generate_family(params, &spec, 1, f_seed).unwrap().pop().unwrap();
        let a = Alpha::new(alpha, params.n()).unwrap();
        let b = if a.is_zero() { b } else { b.combine(&LCFunction::constant(params, b.tail().clone()), BinaryOp::Sub).unwrap() };
        let grid = b.grid().join(f.grid()).unwrap();
        let cells = grid.cells();
        for cell in cells.iter().step_by(cells.len().div_ceil(4)) {
            let x = cell.center();
            let lhs = nonlinear_commutator(&b, &f, &a, &x, prec()).unwrap().abs();
            let mb = maximal_commutator(&b, &f, &a, &x, prec()).unwrap();
            let bminus = b.value_at(&x).min(&Rational::zero()).abs();
            let mf = frac_maximal_at(&f, &a, &x, prec()).unwrap();
            let rhs = mb.add(&mf.scale(&(bminus.clone() * int(2))));
            prop_assert!(not_refuted(&lhs, &rhs), "{} > {}", lhs, rhs);
            if bminus.is_zero() && b.is_nonnegative() {
                prop_assert!(not_refuted(&lhs, &mb));
            }
        }
    }

    #[test]
    fn field_matches_pointwise_evaluation(f in compact_function()) {
        let a = Alpha::zero(f.params().n());
        let field = frac_maximal_field(&f, &a, prec()).unwrap();
        let mut points: Vec<PAdicPoint> = f.grid().cells().iter().map(BallAddress::center).collect();
        for k in 1..=3 {
            let mut xs = vec![Rational::zero(); f.params().n()];
            xs[0] = padic_harmonic::numeric::p_pow(f.params().p(), -(f.grid().structure_level() + k));
            points.push(PAdicPoint::from_rationals(f.params(), &xs).unwrap());
        }
        for x in points {
            prop_assert_eq!(field.value_at(&x, prec()), frac_maximal_at(&f, &a, &x, prec()).unwrap());
        }
    }

    #[test]
    fn indicator_norms(f in params(), xs in coords(), level in -3i64..=3, q in prop_oneof![Just(rat(3, 2)), Just(int(2)), Just(int(3)), Just(rat(5, 2))]) {
        let b = ball_of_point(&point(f, &xs), level);
        let target = RealBound::exact(b.measure()).pow(&q.recip(), 80);
        prop_assert!(lq_norm_lc(&LCFunction::char_fn(&b), &q, prec()).unwrap().overlaps(&target));
    }

    #[test]
    fn kolmogorov_inequality(f in compact_function(), offset in any::<u8>(), idx in any::<usize>(), pair in prop_oneof![Just((int(1), int(2))), Just((rat(1, 2), rat(3, 2))), Just((rat(3, 2), int(3)))]) {
        let (r, q) = pair;
        let b = pick_ball(&f, offset, idx);
        let p = f.params().p();
        let c = kolmogorov_constant(&r, &q, p, prec()).unwrap();
        let cut = f.combine(&LCFunction::char_fn(&b), BinaryOp::Mul).unwrap();
        let measure = RealBound::exact(b.measure());
        let lr = if r >= Rational::one() {
            lq_norm_lc(&cut, &r, prec()).unwrap()
        } else {
            let s: RealBound = cut.values().iter().fold(RealBound::zero(), |acc, v| {
                acc.add(&RealBound::exact(v.abs()).pow(&r, 80).scale(&cut.grid().cell_measure()))
            });
            s.pow(&r.recip(), 80)
        };
        let lhs = measure.pow(&-r.recip(), 80).mul(&lr);
        let rhs = c.mul(&measure.pow(&-q.recip(), 80)).mul(&weak_lq_norm(&f, &q, &b, prec()).unwrap());
        prop_assert!(not_refuted(&lhs, &rhs), "{} > {}", lhs, rhs);
    }

    #[test]
    fn bmo_below_bmo_q_and_level_sets_decay(b in any_function(), offset in any::<u8>(), idx in any::<usize>()) {
        let base = bmo_norm(&b).unwrap().value;
        for q in [rat(3, 2), int(2), int(3)] {
            prop_assert!(not_refuted(&base, &bmo_q_norm(&b, &q, prec()).unwrap().value));
        }
        let ball = pick_ball(&b, offset, idx);
        let mut last = ball.measure();
        for k in 0..30 {
            let m = level_set_measure(&b, &ball, &rat(k, 3));
            prop_assert!(m <= last);
            last = m;
        }
    }

    #[test]
    fn nonlinear_quantity_paths_agree(b in compact_function()) {
        let a = Alpha::zero(b.params().n());
        let q = int(2);
        let t = theorem_quantity_nonlinear(&b, &a, ExponentChoice::Constant(&q), prec()).unwrap();
        for pair in &t.paths {
            prop_assert_eq!(&pair.first, &pair.second, "ball {}", pair.ball);
        }
    }

    #[test]
    fn generators_respect_constraints(p in params(), seed in any::<u64>(), compact in any::<bool>(), nonneg in any::<bool>()) {
        let spec = FunctionSpec {
            structure_levels: [-1, 2],
            depth: [0, 2],
            levels: [-3, 3],
            numerator_bound: 9,
            denominator_bound: 4,
            sign: if nonneg { SignConstraint::Nonnegative } else { SignConstraint::Any },
            compact,
        };
        let fam = generate_family(p, &spec, 4, seed).unwrap();
        prop_assert_eq!(&fam, &generate_family(p, &spec, 4, seed).unwrap());
        for f in fam {
            if nonneg { prop_assert!(f.is_nonnegative()); }
            if compact { prop_assert!(f.tail().is_zero()); }
            let text = f.to_json();
            prop_assert_eq!(LCFunction::from_json(&text).unwrap().to_json(), text);
        }
    }
}
