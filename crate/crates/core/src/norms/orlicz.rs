use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::luxemburg::solve_unit_level;
use crate::error::Result;
use crate::lcfun::LCFunction;
use crate::numeric::{to_f64, Precision, Rational, RealBound};
use crate::ultrametric::BallAddress;

/// The two Zygmund Young functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum YoungKind {
    /// `Φ(t) = t (1 + log⁺ t)`.
    LlogL,
    /// `Ψ(t) = e^t - 1`.
    ExpL,
}

impl YoungKind {
    /// Certified `Φ(t)` for rational `t >= 0`; exact for `L log L` when `t <= 1`.
    pub fn eval(self, t: &Rational, bits: u32) -> RealBound {
        match self {
            YoungKind::LlogL => {
                let t_b = RealBound::exact(t.clone());
                if t <= &Rational::one() {
                    return t_b;
                }
                t_b.mul(&t_b.ln(bits).add(&RealBound::one()))
            }
            YoungKind::ExpL => {
                if t.is_zero() {
                    return RealBound::zero();
                }
                RealBound::exact(t.clone()).exp(bits).sub(&RealBound::one())
            }
        }
    }

    pub fn eval_f64(self, t: f64) -> f64 {
        match self {
            YoungKind::LlogL => t * (1.0 + t.ln().max(0.0)),
            YoungKind::ExpL => t.exp_m1(),
        }
    }
}

/// Luxemburg average `inf{ν > 0 : (1/|B|) ∫_B Φ(|f|/ν) <= 1}`.
pub fn orlicz_average(
    f: &LCFunction,
    ball: &BallAddress,
    kind: YoungKind,
    prec: Precision,
) -> Result<RealBound> {
    let measure = ball.measure();
    let dist: Vec<(Rational, Rational)> = f
        .abs()
        .distribution(ball)
        .into_iter()
        .filter(|(v, _)| !v.is_zero())
        .map(|(v, m)| (v, m / &measure))
        .collect();
    if dist.is_empty() {
        return Ok(RealBound::zero());
    }
    let approx: Vec<(f64, f64)> = dist.iter().map(|(v, w)| (to_f64(v), to_f64(w))).collect();
    let guess = dist.iter().map(|(v, _)| v.clone()).max().expect("nonempty");
    let modular = |nu: &Rational, bits: u32| {
        let mut acc = RealBound::zero();
        for (v, w) in &dist {
            acc = acc.add(&kind.eval(&(v / nu), bits).scale(w));
        }
        acc
    };
    let estimate = |nu: f64| {
        approx
            .iter()
            .map(|(v, w)| w * kind.eval_f64(v / nu))
            .sum::<f64>()
    };
    Ok(solve_unit_level(modular, estimate, guess, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;
    use crate::ultrametric::FieldParams;

    #[test]
    fn indicator_average_is_one() {
        let ball = BallAddress::centered(FieldParams::new(3, 1).unwrap(), 1);
        let chi = LCFunction::char_fn(&ball);
        let v = orlicz_average(&chi, &ball, YoungKind::LlogL, Precision::default()).unwrap();
        assert_eq!(v.as_rational(), Some(&int(1)));
        let z = LCFunction::zero(ball.params());
        assert!(
            orlicz_average(&z, &ball, YoungKind::ExpL, Precision::default())
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn doubled_indicator_solves_scalar_equation() {
        let ball = BallAddress::centered(FieldParams::new(2, 1).unwrap(), 0);
        let f = LCFunction::char_fn(&ball).scale(&int(2));
        let v = orlicz_average(&f, &ball, YoungKind::LlogL, Precision::default()).unwrap();
        let mut lo = 1.0f64;
        let mut hi = 2.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (2.0 / mid) * (1.0 + (2.0 / mid).ln()) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((v.mid_f64() - lo).abs() < 1e-12, "{} vs {lo}", v.mid_f64());
        assert!(v.relative_width() < 2f64.powi(-39));
    }
}
