use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{
    exp_bounds, format_rational, ln_bounds, pow_rational_bounds, round_down, round_up, to_f64,
    Rational, Surd,
};

/// Three-valued comparison outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn is_true(self) -> bool {
        self == Tri::True
    }
}

/// A real number bracketed by rationals `lo <= x <= hi`.
///
/// When the value is known to lie in some `Q(p^(1/d))` the exact element is
/// carried along; comparisons between two exact values are then decided
/// exactly instead of by the brackets.
#[derive(Clone, Debug)]
pub struct RealBound {
    lo: Rational,
    hi: Rational,
    exact: Option<Surd>,
}

impl PartialEq for RealBound {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }
}

impl RealBound {
    pub fn exact(r: Rational) -> Self {
        RealBound {
            lo: r.clone(),
            hi: r.clone(),
            exact: Some(Surd::rational(r)),
        }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn one() -> Self {
        Self::exact(Rational::one())
    }

    pub fn from_surd(s: Surd, bits: u32) -> Self {
        let (lo, hi) = s.enclose(bits);
        RealBound {
            lo,
            hi,
            exact: Some(s),
        }
    }

    /// `[lo, hi]`; a degenerate bracket becomes an exact rational.
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted interval");
        if lo == hi {
            return Self::exact(lo);
        }
        RealBound {
            lo,
            hi,
            exact: None,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn surd(&self) -> Option<&Surd> {
        self.exact.as_ref()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.exact.as_ref().and_then(Surd::as_rational)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn mid_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    /// Width divided by the smaller magnitude endpoint; zero for exact zero.
    pub fn relative_width(&self) -> f64 {
        let w = to_f64(&self.width());
        if w == 0.0 {
            return 0.0;
        }
        let m = to_f64(&self.lo.abs()).min(to_f64(&self.hi.abs()));
        if m == 0.0 {
            f64::INFINITY
        } else {
            w / m
        }
    }

    /// Recompute the bracket from the exact form, or round a plain bracket
    /// outward to about `bits` significant bits.
    pub fn tightened(&self, bits: u32) -> Self {
        match &self.exact {
            Some(s) if s.as_rational().is_none() => Self::from_surd(s.clone(), bits),
            Some(_) => self.clone(),
            None => RealBound {
                lo: round_down(&self.lo, bits),
                hi: round_up(&self.hi, bits),
                exact: None,
            },
        }
    }

    fn combine(lo: Rational, hi: Rational, exact: Option<Surd>) -> Self {
        match exact {
            Some(s) => match s.as_rational() {
                Some(r) => Self::exact(r.clone()),
                None => RealBound {
                    lo,
                    hi,
                    exact: Some(s),
                },
            },
            None => Self::interval(lo, hi),
        }
    }

    fn both<F>(&self, other: &Self, f: F) -> Option<Surd>
    where
        F: Fn(&Surd, &Surd) -> Option<Surd>,
    {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => f(a, b),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Self::exact(a + b);
        }
        Self::combine(
            &self.lo + &other.lo,
            &self.hi + &other.hi,
            self.both(other, Surd::add),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Self::exact(a - b);
        }
        Self::combine(
            &self.lo - &other.hi,
            &self.hi - &other.lo,
            self.both(other, Surd::sub),
        )
    }

    pub fn neg(&self) -> Self {
        RealBound {
            lo: -&self.hi,
            hi: -&self.lo,
            exact: self.exact.as_ref().map(Surd::neg),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let Some(b) = other.as_rational() {
            return self.scale(b);
        }
        if let Some(a) = self.as_rational() {
            return other.scale(a);
        }
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::combine(lo, hi, self.both(other, Surd::mul))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if let Some(a) = self.as_rational() {
            return Self::exact(a * r);
        }
        let (a, b) = (&self.lo * r, &self.hi * r);
        let (lo, hi) = if r.is_negative() { (b, a) } else { (a, b) };
        Self::combine(lo, hi, self.exact.as_ref().map(|s| s.scale(r)))
    }

    /// Reciprocal of a bracket not containing zero.
    pub fn recip(&self) -> Self {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing 0"
        );
        let exact = self.as_rational().map(|r| Surd::rational(r.recip()));
        Self::combine(self.hi.recip(), self.lo.recip(), exact)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Exact sign when decidable, otherwise from the bracket.
    pub fn signum(&self) -> Option<i32> {
        if self.lo.is_positive() {
            return Some(1);
        }
        if self.hi.is_negative() {
            return Some(-1);
        }
        if let Some(s) = &self.exact {
            return Some(s.signum());
        }
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        match self.signum() {
            Some(s) if s >= 0 => self.clone(),
            Some(_) => self.neg(),
            None => {
                let hi = self.lo.abs().max(self.hi.abs());
                RealBound {
                    lo: Rational::zero(),
                    hi,
                    exact: None,
                }
            }
        }
    }

    /// Positive part `max(x, 0)`.
    pub fn pos_part(&self) -> Self {
        self.max(&Self::zero())
    }

    pub fn max(&self, other: &Self) -> Self {
        if self.hi < other.lo {
            return other.clone();
        }
        if other.hi < self.lo {
            return self.clone();
        }
        match other.sub(self).signum() {
            Some(s) if s > 0 => other.clone(),
            Some(_) => self.clone(),
            None => Self::interval(
                self.lo.clone().max(other.lo.clone()),
                self.hi.clone().max(other.hi.clone()),
            ),
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        self.neg().max(&other.neg()).neg()
    }

    /// Three-valued `self <= other`; exact values compare exactly.
    pub fn le(&self, other: &Self) -> Tri {
        if self.hi < other.lo {
            return Tri::True;
        }
        if self.lo > other.hi {
            return Tri::False;
        }
        if let Some(d) = self.both(other, Surd::sub) {
            return if d.signum() <= 0 {
                Tri::True
            } else {
                Tri::False
            };
        }
        if self.hi <= other.lo {
            Tri::True
        } else if self.lo > other.hi {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    pub fn lt(&self, other: &Self) -> Tri {
        match other.le(self) {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
        }
    }

    /// Three-valued equality; only exact values can be found equal.
    pub fn equals(&self, other: &Self) -> Tri {
        if self.hi < other.lo || other.hi < self.lo {
            return Tri::False;
        }
        if let Some(d) = self.both(other, Surd::sub) {
            return if d.is_zero() { Tri::True } else { Tri::False };
        }
        if self.hi < other.lo || other.hi < self.lo {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `x^e` for `x >= 0` and rational `e` (negative `e` needs `x > 0`).
    pub fn pow(&self, e: &Rational, bits: u32) -> Self {
        assert!(
            !self.lo.is_negative(),
            "power of a possibly negative number"
        );
        if e.is_zero() {
            return Self::one();
        }
        if e.is_integer() {
            if let Some(s) = &self.exact {
                let k = e.numer().magnitude().iter_u64_digits().next().unwrap_or(0);
                if k <= 64 && e.is_positive() {
                    let mut acc = Surd::rational(Rational::one());
                    for _ in 0..k {
                        acc = acc.mul(s).expect("same field");
                    }
                    return Self::from_surd(acc, bits);
                }
            }
        }
        if self.lo == self.hi {
            let (a, b) = pow_rational_bounds(&self.lo, e, bits);
            return Self::interval(a, b);
        }
        let (small, large) = if e.is_positive() {
            (&self.lo, &self.hi)
        } else {
            (&self.hi, &self.lo)
        };
        let (a, _) = pow_rational_bounds(small, e, bits);
        let (_, b) = pow_rational_bounds(large, e, bits);
        Self::interval(a, b)
    }

    pub fn ln(&self, bits: u32) -> Self {
        let (a, _) = ln_bounds(&self.lo, bits);
        let (_, b) = ln_bounds(&self.hi, bits);
        Self::interval(a, b)
    }

    pub fn exp(&self, bits: u32) -> Self {
        let (a, _) = exp_bounds(&self.lo, bits);
        let (_, b) = exp_bounds(&self.hi, bits);
        Self::interval(a, b)
    }
}

impl fmt::Display for RealBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(digits) if self.lo == self.hi => write!(f, "{:.digits$}", self.mid_f64()),
            Some(digits) => write!(
                f,
                "{:.digits$} ±{:.1e}",
                self.mid_f64(),
                to_f64(&self.width()) / 2.0
            ),
            None => write!(
                f,
                "{} {}",
                format_rational(&self.lo),
                format_rational(&self.hi)
            ),
        }
    }
}

impl Serialize for RealBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RealBound", 2)?;
        st.serialize_field("lo", &format_rational(&self.lo))?;
        st.serialize_field("hi", &format_rational(&self.hi))?;
        st.end()
    }
}
