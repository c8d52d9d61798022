use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numeric::{from_f64, to_f64, Precision, Rational, RealBound, Tri};

/// Where a trial scale sits relative to the Luxemburg level `modular = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// Modular above 1: the trial is below the norm.
    Below,
    /// Modular below 1: the trial is above the norm.
    Above,
    Exact,
    Unknown,
}

/// Bracket of `inf{η > 0 : modular(η) <= 1}` for a continuous modular that
/// strictly decreases in `η`.
///
/// `modular` gives certified enclosures at a requested precision in bits;
/// `estimate` is a floating-point model used only to aim the trial points.
pub(crate) fn solve_unit_level(
    modular: impl Fn(&Rational, u32) -> RealBound,
    estimate: impl Fn(f64) -> f64,
    guess: Rational,
    prec: Precision,
) -> RealBound {
    let eval_bits = prec.bisect_bits + 24;
    let classify = |eta: &Rational| -> Side {
        for bits in [eval_bits, 2 * eval_bits] {
            let v = modular(eta, bits);
            if v.equals(&RealBound::one()) == Tri::True {
                return Side::Exact;
            }
            if v.lo() > &Rational::one() {
                return Side::Below;
            }
            if v.hi() < &Rational::one() {
                return Side::Above;
            }
        }
        Side::Unknown
    };
    let two = Rational::from_integer(2.into());
    let mut lo = guess.clone();
    loop {
        match classify(&lo) {
            Side::Below => break,
            Side::Exact => return RealBound::exact(lo),
            _ => lo /= &two,
        }
    }
    let mut hi = guess;
    loop {
        match classify(&hi) {
            Side::Above => break,
            Side::Exact => return RealBound::exact(hi),
            _ => hi *= &two,
        }
    }

    let (mut a, mut b) = (to_f64(&lo), to_f64(&hi));
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if estimate(mid) > 1.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let est = 0.5 * (a + b);
    if est.is_finite() && est > 0.0 {
        for cand in simple_fractions(est) {
            if cand > lo && cand < hi {
                match classify(&cand) {
                    Side::Exact => return RealBound::exact(cand),
                    Side::Below => lo = cand,
                    Side::Above => hi = cand,
                    Side::Unknown => {}
                }
            }
        }
        if let Some(center) = from_f64(est) {
            let w = Rational::new(BigInt::one(), BigInt::one() << 46u32);
            let left = &center * (Rational::one() - &w);
            let right = &center * (Rational::one() + &w);
            if left > lo && classify(&left) == Side::Below {
                lo = left;
            }
            if right < hi && classify(&right) == Side::Above {
                hi = right;
            }
        }
    }

    let target = Rational::new(BigInt::one(), BigInt::one() << prec.bisect_bits);
    while &hi - &lo > &lo * &target {
        let mid = (&lo + &hi) / &two;
        match classify(&mid) {
            Side::Below => lo = mid,
            Side::Above => hi = mid,
            Side::Exact => return RealBound::exact(mid),
            Side::Unknown => break,
        }
    }
    RealBound::interval(lo, hi)
}

/// Continued-fraction convergents of `x` with denominators below `2^16`.
fn simple_fractions(x: f64) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..24 {
        let a = r.floor();
        if !a.is_finite() || a.abs() > 1e15 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(1u32 << 16) {
            break;
        }
        if k2.is_positive() {
            out.push(Rational::new(h2.clone(), k2.clone()));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    out.reverse();
    out.truncate(3);
    out
}
