use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::bound_power;
use super::luxemburg::solve_unit_level;
use crate::error::{Error, Result};
use crate::lcfun::{CellGrid, LCFunction};
use crate::numeric::{to_f64, Precision, Rational, RealBound};
use crate::operators::{pow_p, TailProfile};
use crate::ultrametric::{BallAddress, FieldParams, PAdicPoint};

/// A locally constant exponent `q(·)` with `1 < q_- <= q_+ < ∞`; the tail
/// value is `q(∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentFunction {
    shape: LCFunction,
}

impl ExponentFunction {
    pub fn new(shape: LCFunction) -> Result<Self> {
        let one = Rational::one();
        if shape
            .values()
            .iter()
            .chain(std::iter::once(shape.tail()))
            .any(|q| q <= &one)
        {
            return Err(Error::Parameter(
                "variable exponent must exceed 1 everywhere".into(),
            ));
        }
        let big = |q: &Rational| q.numer().to_u32().is_none() || q.denom().to_u32().is_none();
        if shape.values().iter().any(big) || big(shape.tail()) {
            return Err(Error::Parameter(
                "variable exponent values are too large".into(),
            ));
        }
        Ok(ExponentFunction { shape })
    }

    pub fn constant(params: FieldParams, q: Rational) -> Result<Self> {
        Self::new(LCFunction::constant(params, q))
    }

    pub fn shape(&self) -> &LCFunction {
        &self.shape
    }

    pub fn params(&self) -> FieldParams {
        self.shape.params()
    }

    pub fn q_minus(&self) -> Rational {
        self.shape
            .values()
            .iter()
            .chain(std::iter::once(self.shape.tail()))
            .min()
            .expect("nonempty")
            .clone()
    }

    pub fn q_plus(&self) -> Rational {
        self.shape
            .values()
            .iter()
            .chain(std::iter::once(self.shape.tail()))
            .max()
            .expect("nonempty")
            .clone()
    }

    pub fn q_infinity(&self) -> &Rational {
        self.shape.tail()
    }

    pub fn value_at(&self, x: &PAdicPoint) -> &Rational {
        self.shape.value_at(x)
    }

    /// `q(x, γ)`: `q(x)` for `γ < 0` and `q(∞)` for `γ >= 0`.
    pub fn at_scale(&self, x: &PAdicPoint, level: i64) -> &Rational {
        if level < 0 {
            self.value_at(x)
        } else {
            self.q_infinity()
        }
    }

    /// Smallest and largest exponent on a ball.
    pub fn range_on(&self, ball: &BallAddress) -> (Rational, Rational) {
        let dist = self.shape.distribution(ball);
        (
            dist.first().expect("nonempty").0.clone(),
            dist.last().expect("nonempty").0.clone(),
        )
    }
}

/// `q'(x) = q(x) / (q(x) - 1)`.
pub fn conjugate_exponent(q: &ExponentFunction) -> ExponentFunction {
    let one = Rational::one();
    ExponentFunction {
        shape: q.shape.map(|v| v / (v - &one)),
    }
}

/// `inf{η > 0 : ∫ (|g|/η)^q(x) dx <= 1}`.
///
/// Beyond both structure balls `q = q(∞)`, so the far field contributes
/// `(c/η)^q∞ (1 - p^-n) Σ_k p^(k(q∞ e + n))`, a geometric series.
pub fn luxemburg_variable_norm(
    g: &TailProfile,
    qfun: &ExponentFunction,
    prec: Precision,
) -> Result<RealBound> {
    let grid = g.grid().join(qfun.shape.grid())?;
    let g = g.refine_to(&grid, prec)?;
    let q = qfun.shape.refine_to(&grid)?;
    let params = grid.params();
    let p = params.p();
    if g.base().signum() != Some(0) {
        return Err(Error::Divergence(
            "variable Lebesgue modular of a nonzero constant tail diverges".into(),
        ));
    }
    let q_inf = q.tail().clone();
    let tail = if g.coeff().is_zero() {
        None
    } else {
        let s = &q_inf * g.exponent() + Rational::from_integer(params.n().into());
        if !s.is_negative() {
            return Err(Error::Divergence(
                "far field is not summable with exponent q(∞)".into(),
            ));
        }
        let first = Rational::from_integer((grid.structure_level() + 1).into());
        let series = pow_p(p, &(&s * first), prec).div(&RealBound::one().sub(&pow_p(p, &s, prec)));
        Some((g.coeff().abs(), series.scale(&params.sphere_measure(0))))
    };
    let cm = grid.cell_measure();
    let pieces = g
        .core()
        .iter()
        .zip(q.values())
        .map(|(v, e)| (v.clone(), e.clone(), cm.clone()));
    Ok(luxemburg_pieces(
        pieces,
        tail.map(|(c, series)| (c, series, q_inf)),
        p,
        prec,
    ))
}

/// Luxemburg norm of a finite family of pieces `(|value|, exponent, measure)`
/// plus an optional far field `(c, Σ, q∞)` contributing `(c/η)^q∞ Σ`.
pub(crate) fn luxemburg_pieces(
    pieces: impl IntoIterator<Item = (RealBound, Rational, Rational)>,
    tail: Option<(RealBound, RealBound, Rational)>,
    p: u32,
    prec: Precision,
) -> RealBound {
    let mut groups: BTreeMap<(Rational, Rational), Rational> = BTreeMap::new();
    let mut interval_cells: Vec<(RealBound, Rational, Rational)> = Vec::new();
    for (v, e, w) in pieces {
        match v.as_rational() {
            Some(r) if r.is_zero() => {}
            Some(r) => *groups.entry((r.abs(), e)).or_insert_with(Rational::zero) += w,
            None => interval_cells.push((v.abs(), e, w)),
        }
    }
    if groups.is_empty() && interval_cells.is_empty() && tail.is_none() {
        return RealBound::zero();
    }
    let weighted: Vec<(RealBound, Rational, Rational)> = groups
        .into_iter()
        .map(|((v, e), w)| (RealBound::exact(v), e, w))
        .chain(interval_cells)
        .collect();
    let modular = |eta: &Rational, bits: u32| {
        let prec = Precision {
            power_bits: bits,
            ..prec
        };
        let inv = eta.recip();
        let mut acc = RealBound::zero();
        for (v, e, w) in &weighted {
            acc = acc.add(&bound_power(&v.scale(&inv), e, p, prec).scale(w));
        }
        if let Some((c, series, q_inf)) = &tail {
            acc = acc.add(&bound_power(&c.scale(&inv), q_inf, p, prec).mul(series));
        }
        acc
    };
    let approx: Vec<(f64, f64, f64)> = weighted
        .iter()
        .map(|(v, e, w)| (v.mid_f64(), to_f64(e), to_f64(w)))
        .collect();
    let tail_f = tail
        .as_ref()
        .map(|(c, s, q)| (c.mid_f64(), s.mid_f64(), to_f64(q)));
    let estimate = |eta: f64| {
        let mut acc: f64 = approx.iter().map(|(v, e, w)| w * (v / eta).powf(*e)).sum();
        if let Some((c, s, q)) = tail_f {
            acc += (c / eta).powf(q) * s;
        }
        acc
    };
    let guess = weighted
        .iter()
        .map(|(v, _, _)| v.hi().clone())
        .chain(tail.iter().map(|(c, _, _)| c.hi().clone()))
        .max()
        .unwrap_or_else(Rational::one);
    solve_unit_level(modular, estimate, guess, prec)
}

pub fn luxemburg_variable_norm_lc(
    f: &LCFunction,
    qfun: &ExponentFunction,
    prec: Precision,
) -> Result<RealBound> {
    luxemburg_variable_norm(&TailProfile::from_lc(f), qfun, prec)
}

/// Best constants in the two log-Hölder conditions.
#[derive(Clone, Debug, Serialize)]
pub struct LogHolderConstants {
    /// `sup γ (q_-(B_γ(x)) - q_+(B_γ(x)))` over all balls, as written.
    #[serde(serialize_with = "crate::numeric::serialize_rational")]
    pub c0: Rational,
    /// `sup |γ| (q_+(B) - q_-(B))` over balls with `γ <= 0`.
    #[serde(serialize_with = "crate::numeric::serialize_rational")]
    pub c0_small_balls: Rational,
    /// `sup |q(x) - q(y)| log_p(p + min(|x|_p, |y|_p))`.
    pub c_infinity: RealBound,
}

/// Supremum of `|x|_p` over a cell.
fn cell_radius(grid: &CellGrid, cell: &BallAddress) -> Rational {
    let r = crate::numeric::p_pow(grid.params().p(), grid.resolution());
    r.max(cell.center().abs())
}

pub fn log_holder_constants(qfun: &ExponentFunction, prec: Precision) -> LogHolderConstants {
    let shape = &qfun.shape;
    let grid = shape.grid();
    let params = grid.params();
    let mins = grid.level_sums(shape.values(), qfun.q_plus(), |a, b| a.min(b).clone());
    let maxs = grid.level_sums(shape.values(), qfun.q_minus(), |a, b| a.max(b).clone());
    let mut c0 = Rational::zero();
    let mut small = Rational::zero();
    for (k, (lo_row, hi_row)) in mins.iter().zip(&maxs).enumerate() {
        let level = grid.resolution() + k as i64;
        let gamma = Rational::from_integer(level.into());
        for (lo, hi) in lo_row.iter().zip(hi_row) {
            c0 = c0.max(&gamma * (lo - hi));
            if level <= 0 {
                small = small.max(-&gamma * (hi - lo));
            }
        }
    }
    let spread = qfun.q_plus() - qfun.q_minus();
    let first_outer = grid.structure_level() + 1;
    c0 = c0.max(-Rational::from_integer(first_outer.into()) * &spread);
    if first_outer <= 0 {
        small = small.max(Rational::from_integer((-first_outer).into()) * &spread);
    }

    let mut by_radius: BTreeMap<Rational, (Rational, Rational)> = BTreeMap::new();
    for (i, v) in shape.values().iter().enumerate() {
        let r = cell_radius(grid, &grid.cell(i));
        let e = by_radius.entry(r).or_insert_with(|| (v.clone(), v.clone()));
        e.0 = e.0.clone().min(v.clone());
        e.1 = e.1.clone().max(v.clone());
    }
    let bits = prec.power_bits;
    let p = Rational::from_integer(params.p().into());
    let ln_p = RealBound::exact(p.clone()).ln(bits);
    let (mut lo, mut hi) = (shape.tail().clone(), shape.tail().clone());
    let mut c_inf = RealBound::zero();
    for (r, (a, b)) in by_radius.iter().rev() {
        lo = lo.min(a.clone());
        hi = hi.max(b.clone());
        let weight = RealBound::exact(&p + r).ln(bits).div(&ln_p);
        c_inf = c_inf.max(&weight.scale(&(&hi - &lo)));
    }
    LogHolderConstants {
        c0,
        c0_small_balls: small,
        c_infinity: c_inf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn q2() -> FieldParams {
        FieldParams::new(2, 1).unwrap()
    }

    #[test]
    fn constant_exponent_matches_lebesgue() {
        let grid = CellGrid::new(q2(), 1, -1).unwrap();
        let f = LCFunction::new(grid, vec![int(1), int(3), rat(1, 2), int(0)], int(0)).unwrap();
        let q = ExponentFunction::constant(q2(), int(2)).unwrap();
        let lux = luxemburg_variable_norm_lc(&f, &q, Precision::default()).unwrap();
        let lq = super::super::lq_norm_lc(&f, &int(2), Precision::default()).unwrap();
        assert!(lux.overlaps(&lq), "{lux} vs {lq}");
    }

    #[test]
    fn unit_indicator_with_exponent_two() {
        let chi = LCFunction::char_fn(&BallAddress::centered(q2(), 0));
        let q = ExponentFunction::constant(q2(), int(2)).unwrap();
        let v = luxemburg_variable_norm_lc(&chi, &q, Precision::default()).unwrap();
        assert_eq!(v.as_rational(), Some(&int(1)));
    }

    #[test]
    fn two_exponents_solve_cubic() {
        let grid = CellGrid::new(q2(), 0, 0).unwrap();
        let q =
            ExponentFunction::new(LCFunction::new(grid, vec![int(2)], int(3)).unwrap()).unwrap();
        let f = LCFunction::char_fn(&BallAddress::centered(q2(), 1));
        let v = luxemburg_variable_norm_lc(&f, &q, Precision::default()).unwrap();
        let (mut a, mut b) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m.powi(-2) + m.powi(-3) > 1.0 {
                a = m;
            } else {
                b = m;
            }
        }
        assert!((v.mid_f64() - a).abs() < 1e-11);
    }

    #[test]
    fn conjugate_and_constants() {
        let q = ExponentFunction::constant(q2(), int(2)).unwrap();
        let c = conjugate_exponent(&q);
        assert_eq!(c.q_plus(), int(2));
        let k = log_holder_constants(&q, Precision::default());
        assert!(k.c0.is_zero() && k.c0_small_balls.is_zero() && k.c_infinity.is_zero());
        let two = ExponentFunction::new(
            LCFunction::new(
                CellGrid::new(q2(), -1, -2).unwrap(),
                vec![int(2), int(3)],
                int(2),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            conjugate_exponent(&two).q_plus(),
            two.q_minus() / (two.q_minus() - int(1))
        );
        let k = log_holder_constants(&two, Precision::default());
        assert_eq!(k.c0, int(1));
        assert_eq!(k.c0_small_balls, int(1));
        let expect = RealBound::exact(rat(5, 2))
            .ln(60)
            .div(&RealBound::exact(int(2)).ln(60));
        assert!(k.c_infinity.overlaps(&expect));
    }
}
