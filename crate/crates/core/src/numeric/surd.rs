//! Exact arithmetic in `Q(θ)` with `θ = p^(1/d)`.
//!
//! Every fractional maximal value at a rational order `α = a/d` is a finite
//! maximum of terms `r·p^(γα)`, so it lives in this field. Because `x^d - p` is
//! Eisenstein at `p`, the powers `1, θ, …, θ^(d-1)` are linearly independent
//! over `Q`, which makes equality a coefficient comparison and sign decidable.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{Signed, Zero};

use super::{p_pow, pow_ratio_bounds, round_down, round_up, Rational};

/// Memoized enclosure of `p^(1/d)` at accuracy `k`.
fn theta_bounds(p: u32, d: u32, k: u32) -> (Rational, Rational) {
    type Table = RwLock<HashMap<(u32, u32, u32), (Rational, Rational)>>;
    static TABLE: OnceLock<Table> = OnceLock::new();
    let table = TABLE.get_or_init(Default::default);
    if let Some(v) = table.read().expect("table lock").get(&(p, d, k)) {
        return v.clone();
    }
    let v = pow_ratio_bounds(&Rational::from_integer(p.into()), 1, d, k);
    table
        .write()
        .expect("table lock")
        .insert((p, d, k), v.clone());
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    /// `0` for a plain rational (`d == 1`).
    p: u32,
    d: u32,
    coeffs: Vec<Rational>,
}

impl Surd {
    pub fn rational(r: Rational) -> Self {
        Surd {
            p: 0,
            d: 1,
            coeffs: vec![r],
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// `θ^m` with `θ = p^(1/d)`.
    pub fn theta_pow(p: u32, d: u32, m: i64) -> Self {
        assert!(d >= 1);
        let (q, r) = (m.div_euclid(d as i64), m.rem_euclid(d as i64) as usize);
        let mut coeffs = vec![Rational::zero(); d as usize];
        coeffs[r] = p_pow(p, q);
        Surd { p, d, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.d > 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            self.coeffs.truncate(1);
            self.p = 0;
            self.d = 1;
        }
        self
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.d == 1).then(|| &self.coeffs[0])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn lift(&self, p: u32, d: u32) -> Surd {
        if self.d == d {
            return self.clone();
        }
        let step = (d / self.d) as usize;
        let mut coeffs = vec![Rational::zero(); d as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Surd { p, d, coeffs }
    }

    /// Common field of two surds, `None` when the primes differ.
    fn common(&self, other: &Surd) -> Option<(u32, u32)> {
        match (self.d, other.d) {
            (1, 1) => Some((0, 1)),
            (1, _) => Some((other.p, other.d)),
            (_, 1) => Some((self.p, self.d)),
            _ if self.p == other.p => {
                let g = num_integer::gcd(self.d, other.d);
                Some((self.p, self.d / g * other.d))
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Surd) -> Option<Surd> {
        let (p, d) = self.common(other)?;
        let (a, b) = (self.lift(p, d), other.lift(p, d));
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Some(Surd { p, d, coeffs }.normalized())
    }

    pub fn neg(&self) -> Surd {
        Surd {
            p: self.p,
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Surd) -> Option<Surd> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Surd {
        Surd {
            p: self.p,
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
        .normalized()
    }

    pub fn mul(&self, other: &Surd) -> Option<Surd> {
        let (p, d) = self.common(other)?;
        let (a, b) = (self.lift(p, d), other.lift(p, d));
        let du = d as usize;
        let mut coeffs = vec![Rational::zero(); du];
        let pr = Rational::from_integer(p.into());
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                if i + j >= du {
                    coeffs[i + j - du] += t * &pr;
                } else {
                    coeffs[i + j] += t;
                }
            }
        }
        Some(Surd { p, d, coeffs }.normalized())
    }

    /// Rational bounds with roughly `bits` bits of absolute accuracy relative
    /// to the coefficient scale.
    fn enclose_at(&self, k: u32) -> (Rational, Rational) {
        if let Some(r) = self.as_rational() {
            return (r.clone(), r.clone());
        }
        let (tl, th) = theta_bounds(self.p, self.d, k);
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        let mut pl = Rational::from_integer(1.into());
        let mut ph = pl.clone();
        for c in &self.coeffs {
            if c.is_positive() {
                lo += c * &pl;
                hi += c * &ph;
            } else if c.is_negative() {
                lo += c * &ph;
                hi += c * &pl;
            }
            pl = round_down(&(&pl * &tl), k + 8);
            ph = round_up(&(&ph * &th), k + 8);
        }
        (lo, hi)
    }

    /// Enclosure of relative width about `2^-bits` (exact zero stays `[0,0]`).
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        if self.as_rational().is_some() || self.is_zero() {
            return self.enclose_at(0);
        }
        let mut k = bits + 16;
        loop {
            let (lo, hi) = self.enclose_at(k);
            let w = &hi - &lo;
            let scale = if lo.is_positive() {
                lo.clone()
            } else if hi.is_negative() {
                -hi.clone()
            } else {
                Rational::zero()
            };
            if !scale.is_zero() && w <= scale * super::p_pow(2, -(bits as i64)) {
                return (round_down(&lo, bits + 4), round_up(&hi, bits + 4));
            }
            k *= 2;
        }
    }

    /// Exact sign: `-1`, `0` or `1`.
    pub fn signum(&self) -> i32 {
        if let Some(r) = self.as_rational() {
            return if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            };
        }
        if self.is_zero() {
            return 0;
        }
        let mut k = 64;
        loop {
            let (lo, hi) = self.enclose_at(k);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            k *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat, to_f64};

    #[test]
    fn theta_powers_reduce() {
        let s = Surd::theta_pow(2, 2, 3);
        let (lo, hi) = s.enclose(60);
        assert!((to_f64(&lo) - 2.0 * 2f64.sqrt()).abs() < 1e-12 && lo <= hi);
        assert_eq!(Surd::theta_pow(3, 2, -4).as_rational(), Some(&rat(1, 9)));
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let t = Surd::theta_pow(2, 2, 1);
        assert_eq!(t.mul(&t).unwrap().as_rational(), Some(&int(2)));
    }

    #[test]
    fn mixed_orders_lift_to_lcm() {
        let a = Surd::theta_pow(2, 2, 1);
        let b = Surd::theta_pow(2, 3, 1);
        let prod = a.mul(&b).unwrap();
        let want = Surd::theta_pow(2, 6, 5);
        assert!(prod.sub(&want).unwrap().is_zero());
    }

    #[test]
    fn signs_of_near_ties() {
        // 140/99 < sqrt(2) < 99/70
        let t = Surd::theta_pow(2, 2, 1);
        assert_eq!(t.sub(&Surd::rational(rat(140, 99))).unwrap().signum(), 1);
        assert_eq!(t.sub(&Surd::rational(rat(99, 70))).unwrap().signum(), -1);
        assert_eq!(t.sub(&t).unwrap().signum(), 0);
    }

    #[test]
    fn different_primes_do_not_mix() {
        assert!(Surd::theta_pow(2, 2, 1)
            .add(&Surd::theta_pow(3, 2, 1))
            .is_none());
    }
}
