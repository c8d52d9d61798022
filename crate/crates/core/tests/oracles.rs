//! Worked examples for every module, with independent oracles computed
//! here from closed forms or brute-force enumeration.

use num_traits::{One, Signed, Zero};
use padic_harmonic::lcfun::{BinaryOp, CellGrid, LCFunction};
use padic_harmonic::norms::{
    bmo_norm, bmo_q_norm, conjugate_exponent, level_set_measure, log_holder_constants, lq_norm_lc,
    luxemburg_variable_norm_lc, morrey_norm_lc, orlicz_average, weak_lq_norm, ExponentFunction,
    MorreyParams, YoungKind,
};
use padic_harmonic::numeric::{int, p_pow, rat, to_f64, Precision, Rational, RealBound, Tri};
use padic_harmonic::operators::{
    frac_maximal_at, frac_maximal_field, llogl_maximal, maximal_commutator, nonlinear_commutator,
    nonlinear_commutator_field, power_maximal, restricted_frac_maximal, Alpha,
};
use padic_harmonic::ultrametric::{
    ball_of_point, ball_relation, min_enclosing_level, padic_abs, BallAddress, BallRelation,
    FieldParams, PAdicPoint,
};
use padic_harmonic::verify::{
    generate_family, run_suite, theorem_quantity_maximal, theorem_quantity_nonlinear,
    ExponentChoice, ProbeConfig,
};
use padic_harmonic::Error;

fn prec() -> Precision {
    Precision::default()
}

fn fp(p: u32, n: usize) -> FieldParams {
    FieldParams::new(p, n).unwrap()
}

fn q2() -> FieldParams {
    fp(2, 1)
}

fn pt(x: Rational) -> PAdicPoint {
    PAdicPoint::from_rationals(q2(), &[x]).unwrap()
}

fn ball(level: i64, center: Rational) -> BallAddress {
    ball_of_point(&pt(center), level)
}

fn chi_z2() -> LCFunction {
    LCFunction::char_fn(&BallAddress::centered(q2(), 0))
}

fn exact(r: Rational) -> RealBound {
    RealBound::exact(r)
}

fn encloses_f64(b: &RealBound, v: f64, tol: f64) {
    assert!(
        to_f64(b.lo()) - tol <= v && v <= to_f64(b.hi()) + tol,
        "[{b}] misses {v}"
    );
}

/// Scalar root of an increasing-in-ν decreasing function by plain bisection.
fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

mod ultrametric {
    use super::*;

    #[test]
    fn absolute_values() {
        assert_eq!(padic_abs(&int(0), 2), int(0));
        assert_eq!(padic_abs(&int(12), 2), rat(1, 4));
        assert_eq!(padic_abs(&rat(3, 2), 2), int(2));
    }

    #[test]
    fn ball_and_sphere_measures() {
        assert_eq!(fp(2, 1).ball_measure(0), int(1));
        assert_eq!(fp(3, 2).ball_measure(2), int(81));
        assert_eq!(fp(2, 1).ball_measure(-3), rat(1, 8));
        assert_eq!(fp(2, 1).sphere_measure(0), rat(1, 2));
        assert_eq!(fp(3, 1).sphere_measure(1), int(2));
        assert_eq!(fp(2, 2).sphere_measure(0), rat(3, 4));
    }

    #[test]
    fn relations() {
        let rel = |a: &BallAddress, b: &BallAddress| ball_relation(a, b).unwrap();
        assert_eq!(
            rel(&ball(0, int(0)), &ball(1, int(0))),
            BallRelation::FirstInsideSecond
        );
        assert_eq!(rel(&ball(0, int(0)), &ball(0, int(1))), BallRelation::Equal);
        assert_eq!(
            rel(&ball(-1, int(0)), &ball(-1, int(1))),
            BallRelation::Disjoint
        );
    }

    #[test]
    fn ball_of_point_truncates_digits() {
        let p3 = fp(3, 1);
        let b = ball_of_point(&PAdicPoint::origin(p3), 2);
        assert_eq!(b.level(), 2);
        assert!(b.coords()[0].is_zero());
        assert_eq!(ball(0, int(1)), BallAddress::centered(q2(), 0));
        let half = ball(0, rat(1, 2));
        assert_eq!(half.level(), 0);
        assert_eq!(half.coords()[0].digit(-1), 1);
        assert_eq!(half.coords()[0].valuation(), Some(-1));
    }

    #[test]
    fn children_and_parent() {
        let unit = BallAddress::centered(q2(), 0);
        let mut kids = unit.children();
        kids.sort_by_key(|b| b.to_string());
        let mut expected = vec![ball(-1, int(0)), ball(-1, int(1))];
        expected.sort_by_key(|b| b.to_string());
        assert_eq!(kids, expected);
        assert_eq!(ball(-1, int(1)).parent(), unit);
        let total: Rational = kids.iter().map(BallAddress::measure).sum();
        assert_eq!(total, unit.measure());
    }

    #[test]
    fn enclosing_levels() {
        let unit = BallAddress::centered(q2(), 0);
        assert_eq!(min_enclosing_level(&pt(rat(1, 2)), &ball(-1, int(1))), 1);
        assert_eq!(min_enclosing_level(&pt(int(0)), &unit), 0);
        assert_eq!(min_enclosing_level(&pt(rat(1, 4)), &unit), 2);
        assert_eq!(min_enclosing_level(&pt(int(2)), &unit), 0);
    }

    #[test]
    fn canonical_text_round_trip() {
        let b = ball_of_point(
            &PAdicPoint::from_rationals(fp(3, 2), &[rat(5, 9), int(7)]).unwrap(),
            -1,
        );
        assert_eq!(b.to_string().parse::<BallAddress>().unwrap(), b);
        let x = PAdicPoint::from_rationals(fp(3, 2), &[rat(5, 9), int(7)]).unwrap();
        assert_eq!(x.to_string().parse::<PAdicPoint>().unwrap(), x);
    }
}

mod lcfun {
    use super::*;

    #[test]
    fn refine_unit_indicator() {
        let fine = chi_z2().refine(-1, 1).unwrap();
        assert_eq!(fine.grid().cell_count(), 4);
        let mut vals = fine.values().to_vec();
        vals.sort();
        assert_eq!(vals, vec![int(0), int(0), int(1), int(1)]);
        let twice = chi_z2().refine(-1, 0).unwrap().refine(-2, 2).unwrap();
        assert_eq!(twice, chi_z2().refine(-2, 2).unwrap());
        for level in -2..=3 {
            let b = BallAddress::centered(q2(), level);
            assert_eq!(twice.integrate(&b), chi_z2().integrate(&b));
        }
    }

    #[test]
    fn sign_parts() {
        let b = chi_z2()
            .combine(&LCFunction::constant(q2(), int(1)), BinaryOp::Sub)
            .unwrap();
        let expected = LCFunction::constant(q2(), int(1))
            .combine(&chi_z2(), BinaryOp::Sub)
            .unwrap();
        let neg = b.neg_part();
        let grid = neg.grid().join(expected.grid()).unwrap();
        assert_eq!(
            neg.refine_to(&grid).unwrap(),
            expected.refine_to(&grid).unwrap()
        );
        let f = LCFunction::new(
            CellGrid::new(q2(), 1, -1).unwrap(),
            vec![int(1), int(-2), rat(1, 3), int(0)],
            int(-1),
        )
        .unwrap();
        let back = f.pos_part().combine(&f.neg_part(), BinaryOp::Sub).unwrap();
        assert_eq!(back, f);
        assert_eq!(chi_z2().neg().abs(), chi_z2());
    }

    #[test]
    fn indicators_and_integrals() {
        let b = ball(-1, int(1));
        assert_eq!(LCFunction::char_fn(&b).integrate(&b), b.measure());
        assert_eq!(chi_z2().value_at(&pt(rat(1, 2))), &int(0));
        assert_eq!(chi_z2().integrate(&BallAddress::centered(q2(), 1)), int(1));
        let c = LCFunction::new(
            CellGrid::new(q2(), 1, 0).unwrap(),
            vec![rat(3, 2), rat(3, 2)],
            rat(3, 2),
        )
        .unwrap();
        assert_eq!(
            c.integrate(&BallAddress::centered(q2(), 3)),
            rat(3, 2) * p_pow(2, 3)
        );
        assert_eq!(chi_z2().integrate_global().unwrap(), int(1));
        let two_chi_b1 = LCFunction::char_fn(&BallAddress::centered(q2(), 1)).scale(&int(2));
        let g = two_chi_b1.combine(&chi_z2(), BinaryOp::Sub).unwrap();
        assert_eq!(g.integrate_global().unwrap(), int(3));
        assert!(matches!(
            LCFunction::constant(q2(), int(1)).integrate_global(),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn children_additivity() {
        let f = LCFunction::new(
            CellGrid::new(fp(3, 1), 1, -1).unwrap(),
            (0..9).map(|i| rat(i - 4, 3)).collect(),
            int(2),
        )
        .unwrap();
        for level in -1..=3 {
            let b = BallAddress::centered(fp(3, 1), level);
            let sum: Rational = b.children().iter().map(|c| f.integrate(c)).sum();
            assert_eq!(sum, f.integrate(&b));
        }
    }

    #[test]
    fn ball_means() {
        assert_eq!(
            chi_z2().ball_mean(&BallAddress::centered(q2(), 1)),
            rat(1, 2)
        );
        for gamma in 0..5 {
            assert_eq!(
                chi_z2().ball_mean(&BallAddress::centered(q2(), gamma)),
                p_pow(2, -gamma)
            );
        }
        let f = LCFunction::new(
            CellGrid::new(q2(), 1, -1).unwrap(),
            vec![int(5), int(6), int(7), int(8)],
            int(0),
        )
        .unwrap();
        for cell in f.grid().cells() {
            for level in [-1, -2, -4] {
                let b = ball_of_point(&cell.center(), level);
                assert_eq!(&f.ball_mean(&b), f.value_at(&cell.center()));
            }
        }
    }
}

mod operators {
    use super::*;

    #[test]
    fn maximal_of_unit_indicator() {
        // Balls around x with |x| = 4 meet Z_2 only once they contain it, at level 2.
        let oracle = (-4..12)
            .map(|g: i64| if g >= 2 { p_pow(2, -g) } else { int(0) })
            .max()
            .unwrap();
        let m = frac_maximal_at(&chi_z2(), &Alpha::zero(1), &pt(rat(1, 4)), prec()).unwrap();
        assert_eq!(m, exact(oracle));
        let field = frac_maximal_field(&chi_z2(), &Alpha::zero(1), prec()).unwrap();
        for k in 1..6 {
            assert!(field
                .far_value(k, prec())
                .equals(&exact(p_pow(2, -k)))
                .is_true());
        }
    }

    #[test]
    fn fractional_maximal_of_indicators() {
        let half = Alpha::new(rat(1, 2), 1).unwrap();
        for level in [-1, 0, 2] {
            let b = ball(level, rat(1, 2));
            let target = RealBound::exact(b.measure()).pow(&rat(1, 2), 80);
            let y = b.center();
            let m = frac_maximal_at(&LCFunction::char_fn(&b), &half, &y, prec()).unwrap();
            assert!(m.overlaps(&target), "{m} vs {target}");
            let r =
                restricted_frac_maximal(&LCFunction::char_fn(&b), &half, &b, &y, prec()).unwrap();
            assert!(r.overlaps(&target));
        }
        assert_eq!(
            frac_maximal_at(&chi_z2(), &half, &pt(int(0)), prec()).unwrap(),
            exact(int(1))
        );
        let c = LCFunction::constant(q2(), rat(5, 3));
        assert_eq!(
            frac_maximal_at(&c, &Alpha::zero(1), &pt(rat(7, 8)), prec()).unwrap(),
            exact(rat(5, 3))
        );
    }

    #[test]
    fn core_dominates_values_for_alpha_zero() {
        for f in
            generate_family(q2(), &ProbeConfig::default_for(2, 1).function_spec(), 10, 1).unwrap()
        {
            let field = frac_maximal_field(&f, &Alpha::zero(1), prec()).unwrap();
            for (v, m) in f.values().iter().zip(field.core()) {
                assert!(exact(v.abs()).le(m).is_true());
            }
        }
    }

    #[test]
    fn restricted_maximal_bounds() {
        let family = generate_family(
            fp(3, 1),
            &ProbeConfig::default_for(3, 1).function_spec(),
            8,
            2,
        )
        .unwrap();
        for b in family {
            let bstar = b.grid().structure_ball();
            let mean_abs = b.abs().ball_mean(&bstar);
            let mean = b.ball_mean(&bstar);
            for cell in b.grid().cells() {
                let y = cell.center();
                let m0 = restricted_frac_maximal(&b, &Alpha::zero(1), &bstar, &y, prec()).unwrap();
                assert!(exact(mean_abs.clone()).le(&m0).is_true());
                let half = Alpha::new(rat(1, 2), 1).unwrap();
                let m = restricted_frac_maximal(&b, &half, &bstar, &y, prec()).unwrap();
                let shrink = RealBound::exact(bstar.measure()).pow(&rat(-1, 2), 80);
                assert!(exact(mean.abs()).le(&shrink.mul(&m)) != Tri::False);
            }
        }
    }

    #[test]
    fn commutators_of_indicators() {
        let zero = Alpha::zero(1);
        let x = pt(rat(1, 2));
        // |b(x) - b(y)| = 1 on Z_2 and the averages over B_γ(x), γ >= 1, are 2^-γ.
        let oracle = (1..10).map(|g| p_pow(2, -g)).max().unwrap();
        assert_eq!(
            maximal_commutator(&chi_z2(), &chi_z2(), &zero, &x, prec()).unwrap(),
            exact(oracle)
        );
        for y in [int(0), int(1), rat(3, 1)] {
            assert!(
                nonlinear_commutator(&chi_z2(), &chi_z2(), &zero, &pt(y), prec())
                    .unwrap()
                    .is_zero()
            );
        }
        let c = LCFunction::constant(q2(), int(4));
        for alpha in [rat(0, 1), rat(1, 3)] {
            let a = Alpha::new(alpha, 1).unwrap();
            let field = nonlinear_commutator_field(&c, &chi_z2(), &a, prec()).unwrap();
            assert!(field.core().iter().all(RealBound::is_zero));
            assert!(maximal_commutator(&c, &chi_z2(), &a, &x, prec())
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn maximal_commutator_dominates_nonlinear_for_nonnegative_symbols() {
        let mut spec = ProbeConfig::default_for(2, 1).function_spec();
        spec.sign = padic_harmonic::verify::SignConstraint::Nonnegative;
        spec.compact = true;
        let family = generate_family(q2(), &spec, 12, 5).unwrap();
        for pair in family.chunks(2) {
            let (b, f) = (&pair[0], &pair[1]);
            let a = Alpha::new(rat(1, 2), 1).unwrap();
            for cell in b.grid().join(f.grid()).unwrap().cells() {
                let x = cell.center();
                let lhs = nonlinear_commutator(b, f, &a, &x, prec()).unwrap().abs();
                let rhs = maximal_commutator(b, f, &a, &x, prec()).unwrap();
                assert!(lhs.le(&rhs).is_true(), "{lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn power_maximal_examples() {
        let family =
            generate_family(q2(), &ProbeConfig::default_for(2, 1).function_spec(), 6, 3).unwrap();
        for f in &family {
            for cell in f.grid().cells() {
                let x = cell.center();
                let m = frac_maximal_at(f, &Alpha::zero(1), &x, prec()).unwrap();
                assert_eq!(power_maximal(f, &int(1), &x, prec()).unwrap(), m);
                let vals: Vec<RealBound> = [rat(1, 2), int(1), int(2), int(3)]
                    .iter()
                    .map(|e| power_maximal(f, e, &x, prec()).unwrap())
                    .collect();
                for w in vals.windows(2) {
                    assert!(w[0].le(&w[1]) != Tri::False, "{} > {}", w[0], w[1]);
                }
            }
        }
        let b = ball(-1, int(1));
        let chi = LCFunction::char_fn(&b);
        for x in [int(1), int(0), rat(1, 4)] {
            let m = frac_maximal_at(&chi, &Alpha::zero(1), &pt(x.clone()), prec()).unwrap();
            let expected = m.pow(&int(2), 80);
            let got = power_maximal(&chi, &rat(1, 2), &pt(x), prec()).unwrap();
            assert!(got.overlaps(&expected));
        }
    }

    #[test]
    fn llogl_maximal_examples() {
        let zero = Alpha::zero(1);
        for level in [-1, 0, 1] {
            let b = ball(level, int(1));
            let v = llogl_maximal(&LCFunction::char_fn(&b), &zero, &b.center(), prec()).unwrap();
            assert!(v.overlaps(&exact(int(1))));
        }
        assert!(
            llogl_maximal(&LCFunction::zero(q2()), &zero, &pt(int(0)), prec())
                .unwrap()
                .is_zero()
        );
        let mut spec = ProbeConfig::default_for(2, 1).function_spec();
        spec.compact = true;
        for f in generate_family(q2(), &spec, 6, 4).unwrap() {
            for a in [rat(0, 1), rat(1, 2)] {
                let a = Alpha::new(a, 1).unwrap();
                for cell in f.grid().cells() {
                    let x = cell.center();
                    let m = frac_maximal_at(&f, &a, &x, prec()).unwrap();
                    let l = llogl_maximal(&f, &a, &x, prec()).unwrap();
                    assert!(m.le(&l).is_true());
                }
            }
        }
    }
}

mod norms {
    use super::*;

    #[test]
    fn lebesgue_norms_of_indicators() {
        for level in [-2, 0, 3] {
            let b = ball(level, rat(1, 2));
            for q in [rat(3, 2), int(2), int(3)] {
                let target = RealBound::exact(b.measure()).pow(&q.recip(), 80);
                let v = lq_norm_lc(&LCFunction::char_fn(&b), &q, prec()).unwrap();
                assert!(v.overlaps(&target));
                let w = weak_lq_norm(&LCFunction::char_fn(&b), &q, &b, prec()).unwrap();
                assert!(w.overlaps(&target));
            }
        }
        let f = LCFunction::new(
            CellGrid::new(q2(), 1, -1).unwrap(),
            vec![int(1), int(2), rat(1, 2), int(0)],
            int(0),
        )
        .unwrap();
        assert_eq!(
            lq_norm_lc(&f, &int(1), prec()).unwrap(),
            exact(f.integrate_global().unwrap())
        );
        assert!(
            weak_lq_norm(&LCFunction::zero(q2()), &int(2), &ball(0, int(0)), prec())
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn weak_norm_two_valued() {
        let b = BallAddress::centered(q2(), 1);
        let f = chi_z2()
            .combine(&LCFunction::char_fn(&b), BinaryOp::Add)
            .unwrap();
        for q in [int(2), int(3), rat(3, 2)] {
            let m = to_f64(&b.measure());
            let oracle = f64::max(
                2.0 * (m / 2.0).powf(1.0 / to_f64(&q)),
                m.powf(1.0 / to_f64(&q)),
            );
            encloses_f64(&weak_lq_norm(&f, &q, &b, prec()).unwrap(), oracle, 1e-12);
        }
    }

    #[test]
    fn morrey_examples() {
        // Exhaustive over the balls that meet Z_2: inside it or containing it.
        let (q, lambda) = (2.0f64, 0.5f64);
        let oracle = (-8..8)
            .map(|g: i32| {
                let m = 2f64.powi(g);
                let integral = if g <= 0 { m } else { 1.0 };
                (m.powf(-lambda) * integral).powf(1.0 / q)
            })
            .fold(0.0, f64::max);
        let v = morrey_norm_lc(
            &chi_z2(),
            &MorreyParams::new(int(2), rat(1, 2), 1).unwrap(),
            prec(),
        )
        .unwrap();
        encloses_f64(&v.value, oracle, 1e-12);
        assert_eq!(v.value, exact(int(1)));
        let mut spec = ProbeConfig::default_for(2, 1).function_spec();
        spec.compact = true;
        for f in generate_family(q2(), &spec, 5, 8).unwrap() {
            let m =
                morrey_norm_lc(&f, &MorreyParams::new(int(2), int(0), 1).unwrap(), prec()).unwrap();
            assert!(m.value.overlaps(&lq_norm_lc(&f, &int(2), prec()).unwrap()));
        }
        assert!(MorreyParams::new(int(2), int(1), 1).is_err());
    }

    #[test]
    fn bmo_examples() {
        let v = bmo_norm(&chi_z2()).unwrap();
        assert_eq!(v.value, exact(rat(1, 2)));
        assert_eq!(v.witness, Some(BallAddress::centered(q2(), 1)));
        assert!(bmo_norm(&LCFunction::constant(q2(), int(3)))
            .unwrap()
            .value
            .is_zero());
        let family =
            generate_family(q2(), &ProbeConfig::default_for(2, 1).function_spec(), 8, 9).unwrap();
        for b in &family {
            let base = bmo_norm(b).unwrap().value;
            for c in [rat(-3, 2), int(2), rat(1, 7)] {
                assert_eq!(bmo_norm(&b.scale(&c)).unwrap().value, base.scale(&c.abs()));
            }
            assert!(bmo_q_norm(b, &int(1), prec())
                .unwrap()
                .value
                .overlaps(&base));
            for q in [rat(3, 2), int(2), int(3)] {
                assert!(base.le(&bmo_q_norm(b, &q, prec()).unwrap().value) != Tri::False);
            }
        }
    }

    #[test]
    fn bmo_q_of_unit_indicator() {
        // Balls containing Z_2 with measure m: ((1 - 1/m)^2 + (m - 1)/m^2) / m.
        let oracle = (1..12)
            .map(|g| {
                let m = p_pow(2, g);
                let mean = m.recip();
                let one = Rational::one();
                ((&one - &mean) * (&one - &mean) + (&m - &one) * &mean * &mean) / &m
            })
            .max()
            .unwrap();
        assert_eq!(oracle, rat(1, 4));
        let v = bmo_q_norm(&chi_z2(), &int(2), prec()).unwrap();
        assert!(v.value.overlaps(&exact(rat(1, 2))));
        assert_eq!(v.witness, Some(BallAddress::centered(q2(), 1)));
    }

    #[test]
    fn orlicz_examples() {
        let b = ball(0, int(0));
        let chi = LCFunction::char_fn(&b);
        assert_eq!(
            orlicz_average(&chi, &b, YoungKind::LlogL, prec()).unwrap(),
            exact(int(1))
        );
        assert!(
            orlicz_average(&LCFunction::zero(q2()), &b, YoungKind::LlogL, prec())
                .unwrap()
                .is_zero()
        );
        let root = bisect(1e-6, 10.0, |nu| {
            let t: f64 = 2.0 / nu;
            t * (1.0 + t.ln().max(0.0)) - 1.0
        });
        let v = orlicz_average(&chi.scale(&int(2)), &b, YoungKind::LlogL, prec()).unwrap();
        encloses_f64(&v, root, 1e-10);
        assert!(v.relative_width() < 1e-11);
    }

    #[test]
    fn variable_exponent_examples() {
        let chi_b1 = LCFunction::char_fn(&BallAddress::centered(q2(), 1));
        let two = ExponentFunction::constant(q2(), int(2)).unwrap();
        assert!(luxemburg_variable_norm_lc(&chi_z2(), &two, prec())
            .unwrap()
            .overlaps(&exact(int(1))));
        let q = ExponentFunction::new(
            LCFunction::new(CellGrid::new(q2(), 0, 0).unwrap(), vec![int(2)], int(3)).unwrap(),
        )
        .unwrap();
        let root = bisect(0.1, 10.0, |eta| eta.powi(-2) + eta.powi(-3) - 1.0);
        let v = luxemburg_variable_norm_lc(&chi_b1, &q, prec()).unwrap();
        encloses_f64(&v, root, 1e-10);
        let f = LCFunction::new(
            CellGrid::new(q2(), 1, -1).unwrap(),
            vec![int(3), int(1), int(0), rat(1, 2)],
            int(0),
        )
        .unwrap();
        let a = luxemburg_variable_norm_lc(&f, &two, prec()).unwrap();
        let b = lq_norm_lc(&f, &int(2), prec()).unwrap();
        assert!(a.overlaps(&b));
    }

    #[test]
    fn conjugates_and_log_holder_constants() {
        let two = ExponentFunction::constant(q2(), int(2)).unwrap();
        let c = conjugate_exponent(&two);
        assert_eq!((c.q_minus(), c.q_plus()), (int(2), int(2)));
        let k = log_holder_constants(&two, prec());
        assert!(k.c0.is_zero() && k.c_infinity.is_zero());

        let q = ExponentFunction::new(
            LCFunction::new(CellGrid::new(q2(), 0, 0).unwrap(), vec![int(2)], int(3)).unwrap(),
        )
        .unwrap();
        let c = conjugate_exponent(&q);
        assert_eq!(c.q_plus(), q.q_minus() / (q.q_minus() - Rational::one()));
        let k = log_holder_constants(&q, prec());
        // Balls with both values have level >= 1 and contribute -γ; uniform balls contribute 0.
        assert_eq!(k.c0, int(0));
        assert_eq!(k.c0_small_balls, int(0));
        // Pairs across the jump: min(|x|, |y|) <= 1, attained with |x| = 1.
        encloses_f64(&k.c_infinity, 3f64.log2(), 1e-12);
    }
}

mod verify {
    use super::*;

    #[test]
    fn theorem_quantities_on_simple_symbols() {
        let c = LCFunction::constant(q2(), int(3));
        let q = int(2);
        assert!(
            theorem_quantity_maximal(&c, ExponentChoice::Constant(&q), prec())
                .unwrap()
                .value
                .is_zero()
        );
        let a = Alpha::new(rat(1, 2), 1).unwrap();
        assert!(
            theorem_quantity_nonlinear(&c, &a, ExponentChoice::Constant(&q), prec())
                .unwrap()
                .value
                .is_zero()
        );
        // For c < 0 the numerator is c - |c| = 2c on every ball.
        let neg = LCFunction::constant(q2(), int(-3));
        let t = theorem_quantity_nonlinear(&neg, &a, ExponentChoice::Constant(&q), prec()).unwrap();
        assert_eq!(t.value, exact(int(6)));
        let tq = theorem_quantity_maximal(&chi_z2(), ExponentChoice::Constant(&q), prec()).unwrap();
        let bmo_q = bmo_q_norm(&chi_z2(), &q, prec()).unwrap().value;
        assert!(tq.value.overlaps(&bmo_q));
        let tn = theorem_quantity_nonlinear(&chi_z2(), &a, ExponentChoice::Constant(&q), prec())
            .unwrap();
        for pair in &tn.paths {
            assert!(pair.first.overlaps(&pair.second));
        }
    }

    #[test]
    fn level_sets_of_unit_indicator() {
        let b = BallAddress::centered(q2(), 1);
        // b - b_B is +-1/2 on the two halves of B_1.
        for (t, m) in [
            (rat(0, 1), int(2)),
            (rat(1, 4), int(2)),
            (rat(1, 2), int(0)),
            (int(1), int(0)),
        ] {
            assert_eq!(level_set_measure(&chi_z2(), &b, &t), m);
        }
        let f = LCFunction::new(
            CellGrid::new(q2(), 1, -1).unwrap(),
            vec![int(3), int(1), int(0), rat(1, 2)],
            int(0),
        )
        .unwrap();
        let mut last = b.measure();
        for k in 0..20 {
            let m = level_set_measure(&f, &b, &rat(k, 4));
            assert!(m <= last);
            last = m;
        }
        assert!(last.is_zero());
    }

    #[test]
    fn empty_family_and_determinism() {
        let mut cfg = ProbeConfig::default_for(2, 1);
        cfg.family_size = 0;
        let r = run_suite(&cfg).unwrap();
        assert!(r.records.is_empty() && r.passed());
        cfg.family_size = 4;
        let a = run_suite(&cfg).unwrap().to_json();
        let b = run_suite(&cfg).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn planted_violation_fails_with_witness() {
        let mut cfg = ProbeConfig::default_for(2, 1);
        cfg.family_size = 4;
        cfg.self_test = true;
        cfg.checks = Some(vec![]);
        let r = run_suite(&cfg).unwrap();
        let planted = r.record("planted_violation").unwrap();
        assert!(!r.passed());
        assert!(planted.witness.is_some());
    }
}
