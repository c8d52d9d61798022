//! Certified natural logarithm and exponential of rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ceil_dyadic, floor_dyadic, int, log2_estimate, p_pow, Rational};

/// `2·atanh(z)` bounds for `0 <= z <= 1/3`, absolute accuracy `2^-k`.
fn two_atanh(z_lo: &Rational, z_hi: &Rational, k: u32) -> (Rational, Rational) {
    let series = |z: &Rational, up: bool| -> (Rational, Rational) {
        let z2 = z * z;
        let mut term = z.clone();
        let mut sum = Rational::zero();
        let mut i: i64 = 0;
        let eps = p_pow(2, -(k as i64) - 4);
        loop {
            let t = &term / int(2 * i + 1);
            let t = if up {
                ceil_dyadic(&t, k + 8)
            } else {
                floor_dyadic(&t, k + 8)
            };
            sum += &t;
            term = if up {
                ceil_dyadic(&(&term * &z2), k + 8)
            } else {
                floor_dyadic(&(&term * &z2), k + 8)
            };
            i += 1;
            if term <= eps || term.is_zero() {
                break;
            }
        }
        // remaining tail is at most term / ((2i+1)(1 - z^2))
        let rem = &term / (int(2 * i + 1) * (Rational::one() - &z2));
        (sum, rem)
    };
    let (lo, _) = series(z_lo, false);
    let (hi, rem) = series(z_hi, true);
    (lo * int(2), (hi + ceil_dyadic(&rem, k + 8)) * int(2))
}

fn ln2_bounds(k: u32) -> (Rational, Rational) {
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    two_atanh(&third, &third, k)
}

/// Bounds on `ln x` for rational `x > 0` with absolute width about `2^-bits`.
pub fn ln_bounds(x: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if x.is_one() {
        return (Rational::zero(), Rational::zero());
    }
    // x = 2^e · m with 1 <= m < 2
    let mut e = log2_estimate(x);
    let mut m = x * p_pow(2, -e);
    while m >= int(2) {
        m /= int(2);
        e += 1;
    }
    while m < Rational::one() {
        m *= int(2);
        e -= 1;
    }
    let k = bits + 8 + (64 - (e.unsigned_abs()).leading_zeros());
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let (zl, zh) = (floor_dyadic(&z, k + 8), ceil_dyadic(&z, k + 8));
    let (ml, mh) = two_atanh(&zl, &zh, k);
    if e == 0 {
        return (ml, mh);
    }
    let (l2l, l2h) = ln2_bounds(k);
    let ei = int(e);
    if e > 0 {
        (ml + &ei * l2l, mh + &ei * l2h)
    } else {
        (ml + &ei * l2h, mh + &ei * l2l)
    }
}

/// Bounds on `e^x`, relative width about `2^-bits`.
pub fn exp_bounds(x: &Rational, bits: u32) -> (Rational, Rational) {
    if x.is_zero() {
        return (Rational::one(), Rational::one());
    }
    if x.is_negative() {
        let (lo, hi) = exp_bounds(&-x, bits + 2);
        return (
            floor_dyadic(&hi.recip(), bits + 8),
            ceil_dyadic(&lo.recip(), bits + 8),
        );
    }
    // reduce to y = x / 2^j <= 1/2, then square j times
    let mut j: u32 = 0;
    while x * p_pow(2, -(j as i64)) > Rational::new(1.into(), 2.into()) {
        j += 1;
    }
    let mag = (x.numer().bits() as i64 - x.denom().bits() as i64).max(0) as u32;
    let k = bits + 16 + j + mag * 2;
    let y = x * p_pow(2, -(j as i64));
    let (yl, yh) = (floor_dyadic(&y, k), ceil_dyadic(&y, k));
    let taylor = |y: &Rational, up: bool| -> Rational {
        let mut sum = Rational::one();
        let mut term = Rational::one();
        let mut i: i64 = 1;
        let eps = p_pow(2, -(k as i64) - 4);
        loop {
            term = &term * y / int(i);
            term = if up {
                ceil_dyadic(&term, k + 4)
            } else {
                floor_dyadic(&term, k + 4)
            };
            sum += &term;
            i += 1;
            if term <= eps {
                break;
            }
        }
        if up {
            // geometric bound on the tail for y <= 1/2
            sum + term * int(2)
        } else {
            sum
        }
    };
    let mut lo = taylor(&yl, false);
    let mut hi = taylor(&yh, true);
    for _ in 0..j {
        lo = floor_dyadic(&(&lo * &lo), k);
        hi = ceil_dyadic(&(&hi * &hi), k);
    }
    (lo, hi)
}
