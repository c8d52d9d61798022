//! Exact rationals, dyadic rounding, certified roots and the interval type
//! used for every quantity that leaves the rationals.

mod bound;
mod surd;
mod transcendental;

pub use bound::{RealBound, Tri};
pub use surd::Surd;
pub use transcendental::{exp_bounds, ln_bounds};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type Rational = BigRational;

/// Environment variable holding the default precision, `POWER` or `POWER:BISECT` in bits.
pub const PRECISION_ENV: &str = "PADIC_PRECISION_BITS";

/// Relative widths used for non-integer powers and for Luxemburg bisection,
/// expressed in bits (`power_bits = 60` means width `2^-60` relative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub power_bits: u32,
    pub bisect_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            power_bits: 60,
            bisect_bits: 40,
        }
    }
}

impl Precision {
    /// Default precision, overridden by `PADIC_PRECISION_BITS` when it parses.
    pub fn from_env() -> Self {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|s| Self::parse(&s).ok())
            .unwrap_or_default()
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("precision '{s}': expected POWER or POWER:BISECT"));
        let mut parts = s.trim().split(':');
        let power: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let bisect: u32 = match parts.next() {
            Some(b) => b.parse().map_err(|_| bad())?,
            None => Precision::default().bisect_bits.min(power),
        };
        if parts.next().is_some() || power < 8 || bisect < 8 || power > 4096 || bisect > 4096 {
            return Err(bad());
        }
        Ok(Precision {
            power_bits: power,
            bisect_bits: bisect,
        })
    }

    pub fn doubled(self) -> Self {
        Precision {
            power_bits: self.power_bits * 2,
            bisect_bits: self.bisect_bits * 2,
        }
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a reduced rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p^e` for any integer `e`.
pub fn p_pow(p: u32, e: i64) -> Rational {
    let m = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(m)
    } else {
        Rational::new(BigInt::one(), m)
    }
}

pub fn pow_i64(x: &Rational, e: i64) -> Rational {
    let n = x.numer().pow(e.unsigned_abs() as u32);
    let d = x.denom().pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::new(n, d)
    } else {
        Rational::new(d, n)
    }
}

/// Reduced `num/den` text, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Serde adapter storing a rational as its `num/den` text.
pub mod rational_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    /// The same encoding for optional fields.
    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{format_rational, parse_rational, Rational};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

/// Accepts `a/b`, an integer, or a finite decimal like `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not a rational number"));
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(Error::Parse(format!("'{s}' has a zero denominator")));
        }
        return Ok(Rational::new(a, b));
    }
    if let Some((w, f)) = t.split_once('.') {
        if f.is_empty() || !f.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = w.starts_with('-');
        let whole: BigInt = match w.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac: BigInt = f.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(f.len() as u32);
        let mag = Rational::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let a: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(a))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Integer `e` with `2^(e-1) <= |r| < 2^(e+1)`, a cheap magnitude estimate.
pub fn log2_estimate(r: &Rational) -> i64 {
    if r.is_zero() {
        return i64::MIN / 4;
    }
    r.numer().bits() as i64 - r.denom().bits() as i64
}

pub fn floor_dyadic(r: &Rational, k: u32) -> Rational {
    let scaled = r.numer() << k;
    Rational::new(scaled.div_floor(r.denom()), BigInt::one() << k)
}

pub fn ceil_dyadic(r: &Rational, k: u32) -> Rational {
    let scaled = r.numer() << k;
    let (q, m) = scaled.div_mod_floor(r.denom());
    let q = if m.is_zero() { q } else { q + 1 };
    Rational::new(q, BigInt::one() << k)
}

fn rel_shift(r: &Rational, bits: u32) -> u32 {
    (bits as i64 + 3 - log2_estimate(r)).max(0) as u32
}

/// Largest dyadic at most `r` keeping about `bits` significant bits.
pub fn round_down(r: &Rational, bits: u32) -> Rational {
    if r.is_zero() || r.denom().is_one() {
        return r.clone();
    }
    floor_dyadic(r, rel_shift(r, bits))
}

pub fn round_up(r: &Rational, bits: u32) -> Rational {
    if r.is_zero() || r.denom().is_one() {
        return r.clone();
    }
    ceil_dyadic(r, rel_shift(r, bits))
}

fn exact_root(m: &BigInt, b: u32) -> Option<BigInt> {
    let r = m.nth_root(b);
    (r.pow(b) == *m).then_some(r)
}

/// Bounds `lo <= x^(a/b) <= hi` for `x >= 0`, `a >= 0`, `b >= 1`, with relative
/// width about `2^-bits`. Returns a degenerate pair when the power is rational.
pub fn pow_ratio_bounds(x: &Rational, a: u32, b: u32, bits: u32) -> (Rational, Rational) {
    assert!(!x.is_negative() && b >= 1);
    if x.is_zero() {
        let v = if a == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
        return (v.clone(), v);
    }
    let n = x.numer().pow(a);
    let d = x.denom().pow(a);
    if let (Some(rn), Some(rd)) = (exact_root(&n, b), exact_root(&d, b)) {
        let v = Rational::new(rn, rd);
        return (v.clone(), v);
    }
    let mag = (n.bits() as i64 - d.bits() as i64) / b as i64;
    let k = (bits as i64 + 4 - mag).max(0) as u32;
    let scaled = (n << (k as u64 * b as u64)).div_floor(&d);
    let (sign, mag_u) = scaled.into_parts();
    debug_assert!(sign != Sign::Minus);
    let root = BigInt::from(mag_u.nth_root(b));
    let den = BigInt::one() << k;
    let lo = Rational::new(root.clone(), den.clone());
    let hi = Rational::new(root + 1, den);
    (lo, hi)
}

/// `x^e` bounds for a rational exponent `e` and `x > 0` (or `x = 0`, `e > 0`).
pub fn pow_rational_bounds(x: &Rational, e: &Rational, bits: u32) -> (Rational, Rational) {
    let a = e
        .numer()
        .abs()
        .to_u32()
        .expect("exponent numerator too large");
    let b = e.denom().to_u32().expect("exponent denominator too large");
    let (lo, hi) = pow_ratio_bounds(x, a, b, bits + 2);
    if e.is_negative() {
        assert!(!lo.is_zero(), "zero raised to a negative power");
        (
            round_down(&hi.recip(), bits + 2),
            round_up(&lo.recip(), bits + 2),
        )
    } else {
        (lo, hi)
    }
}

pub fn biguint_pow(p: u32, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}
