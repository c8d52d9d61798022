//! Points, balls and spheres of `Q_p^n` with the max-norm, addressed by finite
//! digit expansions so that ball identity is syntactic.
//!
//! A coordinate is `Σ d_k p^k` over a finite range of indices `k`. A ball of
//! level `γ` (radius `p^γ`) keeps only the center digits at indices `k < -γ`;
//! two balls of the same level are equal exactly when those digits agree.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{p_pow, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct FieldParams {
    p: u32,
    n: usize,
}

#[derive(Deserialize)]
struct RawParams {
    p: u32,
    n: usize,
}

impl TryFrom<RawParams> for FieldParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        FieldParams::new(r.p, r.n)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p as u64 {
        if (p as u64).is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl FieldParams {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("p = {p} is not prime")));
        }
        if n == 0 || n > 8 {
            return Err(Error::Parameter(format!(
                "dimension n = {n} must be in 1..=8"
            )));
        }
        Ok(FieldParams { p, n })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`, the branching factor of the ball tree.
    pub fn branching(&self) -> u64 {
        (self.p as u64).pow(self.n as u32)
    }

    /// Haar measure `p^(nγ)` of any ball of level `γ`.
    pub fn ball_measure(&self, level: i64) -> Rational {
        p_pow(self.p, self.n as i64 * level)
    }

    /// `p^(nγ)(1 - p^-n)`.
    pub fn sphere_measure(&self, level: i64) -> Rational {
        self.ball_measure(level) * (Rational::one() - p_pow(self.p, -(self.n as i64)))
    }

    fn check_same(&self, other: &FieldParams) -> Result<()> {
        if self != other {
            return Err(Error::Parameter(format!(
                "field parameters differ: {self} vs {other}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.n)
    }
}

impl FromStr for FieldParams {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (p, n) = s
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("'{s}': expected field parameters as p^n")))?;
        let p = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("'{p}' is not a prime")))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("'{n}' is not a dimension")))?;
        FieldParams::new(p, n)
    }
}

/// p-adic valuation of a nonzero rational, `None` for zero.
pub fn padic_valuation(x: &Rational, p: u32) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let count = |m: &BigInt| {
        let mut m = m.abs();
        let mut c = 0i64;
        while (&m % &pb).is_zero() {
            m /= &pb;
            c += 1;
        }
        c
    };
    Some(count(x.numer()) - count(x.denom()))
}

/// `|x|_p = p^(-v(x))`, and `0` at `0`.
pub fn padic_abs(x: &Rational, p: u32) -> Rational {
    match padic_valuation(x, p) {
        None => Rational::zero(),
        Some(v) => p_pow(p, -v),
    }
}

/// A finite digit expansion `Σ_{k=low}^{low+len-1} d_k p^k`, normalized so the
/// lowest and highest stored digits are nonzero (empty means zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Digits {
    low: i64,
    d: Vec<u32>,
}

impl Digits {
    pub fn zero() -> Self {
        Digits::default()
    }

    pub fn new(low: i64, digits: Vec<u32>) -> Self {
        let mut d = digits;
        let lead = d.iter().take_while(|&&x| x == 0).count();
        if lead == d.len() {
            return Digits::zero();
        }
        d.drain(..lead);
        while d.last() == Some(&0) {
            d.pop();
        }
        Digits {
            low: low + lead as i64,
            d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_empty()
    }

    /// Lowest index with a nonzero digit.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// One past the highest nonzero index (`None` for zero).
    pub fn top(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low + self.d.len() as i64)
    }

    pub fn digit(&self, k: i64) -> u32 {
        if k < self.low {
            return 0;
        }
        self.d.get((k - self.low) as usize).copied().unwrap_or(0)
    }

    /// Keep only the digits at indices `< k`.
    pub fn truncate_below(&self, k: i64) -> Digits {
        if self.is_zero() || k <= self.low {
            return Digits::zero();
        }
        let keep = ((k - self.low) as usize).min(self.d.len());
        Digits::new(self.low, self.d[..keep].to_vec())
    }

    /// Lowest index `< below` where the two expansions differ, which is the
    /// valuation of their difference when that is `< below`.
    pub fn lowest_difference(&self, other: &Digits, below: i64) -> Option<i64> {
        let lo = match (self.valuation(), other.valuation()) {
            (None, None) => return None,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let hi = self
            .top()
            .unwrap_or(lo)
            .max(other.top().unwrap_or(lo))
            .min(below);
        (lo..hi).find(|&k| self.digit(k) != other.digit(k))
    }

    pub fn value(&self, p: u32) -> Rational {
        let mut acc = BigInt::zero();
        for &x in self.d.iter().rev() {
            acc = acc * p + x;
        }
        Rational::from_integer(acc) * p_pow(p, self.low)
    }

    /// Expansion of a nonnegative rational whose denominator is a power of `p`.
    pub fn from_rational(x: &Rational, p: u32) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::Domain(format!(
                "{x} has no finite {p}-adic digit expansion (negative)"
            )));
        }
        if x.is_zero() {
            return Ok(Digits::zero());
        }
        let pb = BigInt::from(p);
        let mut den = x.denom().clone();
        let mut k = 0i64;
        while (&den % &pb).is_zero() {
            den /= &pb;
            k += 1;
        }
        if !den.is_one() {
            return Err(Error::Domain(format!(
                "{x} has no finite {p}-adic digit expansion"
            )));
        }
        let mut m = x.numer().clone();
        let mut d = Vec::new();
        while !m.is_zero() {
            let (q, r) = m.div_rem(&pb);
            d.push(r.to_u32().expect("digit"));
            m = q;
        }
        Ok(Digits::new(-k, d))
    }

    fn check_range(&self, p: u32) -> Result<()> {
        match self.d.iter().find(|&&x| x >= p) {
            Some(x) => Err(Error::Parse(format!("digit {x} out of range for p = {p}"))),
            None => Ok(()),
        }
    }
}

fn format_digit_list(d: &[u32], p: u32) -> String {
    if p <= 10 {
        d.iter().map(|x| char::from(b'0' + *x as u8)).collect()
    } else {
        d.iter().map(u32::to_string).collect::<Vec<_>>().join(".")
    }
}

fn parse_digit_list(s: &str, p: u32) -> Result<Vec<u32>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = |c: &str| Error::Parse(format!("malformed digit '{c}' in '{s}' for p = {p}"));
    let digits: Vec<u32> = if p <= 10 {
        s.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| bad(&c.to_string())))
            .collect::<Result<_>>()?
    } else {
        s.split('.')
            .map(|t| t.parse::<u32>().map_err(|_| bad(t)))
            .collect::<Result<_>>()?
    };
    if let Some(x) = digits.iter().find(|&&x| x >= p) {
        return Err(bad(&x.to_string()));
    }
    Ok(digits)
}

/// A point of `Q_p^n` with finite expansions in every coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PAdicPoint {
    params: FieldParams,
    coords: Vec<Digits>,
}

impl PAdicPoint {
    pub fn new(params: FieldParams, coords: Vec<Digits>) -> Result<Self> {
        if coords.len() != params.n {
            return Err(Error::Parameter(format!(
                "{} coordinates given for n = {}",
                coords.len(),
                params.n
            )));
        }
        for c in &coords {
            c.check_range(params.p)?;
        }
        Ok(PAdicPoint { params, coords })
    }

    pub fn origin(params: FieldParams) -> Self {
        PAdicPoint {
            params,
            coords: vec![Digits::zero(); params.n],
        }
    }

    pub fn from_rationals(params: FieldParams, xs: &[Rational]) -> Result<Self> {
        let coords = xs
            .iter()
            .map(|x| Digits::from_rational(x, params.p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, coords)
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn coords(&self) -> &[Digits] {
        &self.coords
    }

    /// Max-norm valuation: minimum coordinate valuation, `None` at the origin.
    pub fn valuation(&self) -> Option<i64> {
        self.coords.iter().filter_map(Digits::valuation).min()
    }

    /// `|x|_p = max_j |x_j|_p`.
    pub fn abs(&self) -> Rational {
        match self.valuation() {
            None => Rational::zero(),
            Some(v) => p_pow(self.params.p, -v),
        }
    }

    pub fn coordinate_values(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| c.value(self.params.p)).collect()
    }
}

impl fmt::Display for PAdicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.params)?;
        for (j, c) in self.coords.iter().enumerate() {
            if j > 0 {
                write!(f, "|")?;
            }
            if let Some(v) = c.valuation() {
                write!(f, "{}@{}", format_digit_list(&c.d, self.params.p), v)?;
            }
        }
        Ok(())
    }
}

impl FromStr for PAdicPoint {
    type Err = Error;
    /// `p^n:c1|c2|…` where each coordinate is empty (zero), `digits@v` with the
    /// digit at index `v` first, or a rational such as `5/4`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("point '{s}': expected p^n:coords")))?;
        let params: FieldParams = head.parse()?;
        let mut coords = Vec::new();
        for part in body.split('|') {
            let part = part.trim();
            let c = if part.is_empty() {
                Digits::zero()
            } else if let Some((digits, v)) = part.split_once('@') {
                let v: i64 = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad valuation in '{part}'")))?;
                Digits::new(v, parse_digit_list(digits, params.p)?)
            } else {
                Digits::from_rational(&crate::numeric::parse_rational(part)?, params.p)
                    .map_err(|e| Error::Parse(e.to_string()))?
            };
            coords.push(c);
        }
        PAdicPoint::new(params, coords)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BallRelation {
    Disjoint,
    FirstInsideSecond,
    SecondInsideFirst,
    Equal,
}

/// The ball `a + p^(-γ) Z_p^n`, canonically addressed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BallAddress {
    params: FieldParams,
    level: i64,
    coords: Vec<Digits>,
}

/// Canonical ball order: by level, then center digits.
impl Ord for BallAddress {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.params, self.level, &self.coords).cmp(&(other.params, other.level, &other.coords))
    }
}

impl PartialOrd for BallAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BallAddress {
    /// Build from any center digits; digits at indices `>= -level` are dropped.
    pub fn new(params: FieldParams, level: i64, coords: Vec<Digits>) -> Result<Self> {
        if coords.len() != params.n {
            return Err(Error::Parameter(format!(
                "{} coordinates given for n = {}",
                coords.len(),
                params.n
            )));
        }
        for c in &coords {
            c.check_range(params.p)?;
        }
        let coords = coords.iter().map(|c| c.truncate_below(-level)).collect();
        Ok(BallAddress {
            params,
            level,
            coords,
        })
    }

    pub fn centered(params: FieldParams, level: i64) -> Self {
        BallAddress {
            params,
            level,
            coords: vec![Digits::zero(); params.n],
        }
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn coords(&self) -> &[Digits] {
        &self.coords
    }

    pub fn measure(&self) -> Rational {
        self.params.ball_measure(self.level)
    }

    /// The canonical center, the point whose digits are the address digits.
    pub fn center(&self) -> PAdicPoint {
        PAdicPoint {
            params: self.params,
            coords: self.coords.clone(),
        }
    }

    pub fn contains_origin(&self) -> bool {
        self.coords.iter().all(Digits::is_zero)
    }

    pub fn contains(&self, x: &PAdicPoint) -> bool {
        x.params == self.params
            && x.coords
                .iter()
                .zip(&self.coords)
                .all(|(xc, bc)| xc.truncate_below(-self.level) == *bc)
    }

    pub fn children(&self) -> Vec<BallAddress> {
        let p = self.params.p;
        let idx = -self.level;
        let count = self.params.branching();
        (0..count)
            .map(|mut m| {
                let coords = self
                    .coords
                    .iter()
                    .map(|c| {
                        let digit = (m % p as u64) as u32;
                        m /= p as u64;
                        with_digit(c, idx, digit)
                    })
                    .collect();
                BallAddress {
                    params: self.params,
                    level: self.level - 1,
                    coords,
                }
            })
            .collect()
    }

    pub fn parent(&self) -> BallAddress {
        self.ancestor(self.level + 1)
    }

    /// The unique ball of level `level >= self.level` containing this one.
    pub fn ancestor(&self, level: i64) -> BallAddress {
        assert!(level >= self.level);
        BallAddress {
            params: self.params,
            level,
            coords: self
                .coords
                .iter()
                .map(|c| c.truncate_below(-level))
                .collect(),
        }
    }
}

fn with_digit(c: &Digits, k: i64, digit: u32) -> Digits {
    if digit == 0 {
        return c.clone();
    }
    if c.is_zero() {
        return Digits::new(k, vec![digit]);
    }
    let low = c.low.min(k);
    let high = c.top().unwrap().max(k + 1);
    let d = (low..high)
        .map(|i| if i == k { digit } else { c.digit(i) })
        .collect();
    Digits::new(low, d)
}

pub fn ball_measure(b: &BallAddress) -> Rational {
    b.measure()
}

/// `S_γ(a) = B_γ(a) \ B_{γ-1}(a)`, addressed by the enclosing ball.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphereAddress(pub BallAddress);

impl SphereAddress {
    pub fn ball(&self) -> &BallAddress {
        &self.0
    }

    pub fn measure(&self) -> Rational {
        self.0.params.sphere_measure(self.0.level)
    }
}

pub fn sphere_measure(s: &SphereAddress) -> Rational {
    s.measure()
}

pub fn ball_relation(b1: &BallAddress, b2: &BallAddress) -> Result<BallRelation> {
    b1.params.check_same(&b2.params)?;
    let (small, big, first_small) = if b1.level <= b2.level {
        (b1, b2, true)
    } else {
        (b2, b1, false)
    };
    let nested = small.ancestor(big.level) == *big;
    Ok(match (nested, b1.level == b2.level, first_small) {
        (false, _, _) => BallRelation::Disjoint,
        (true, true, _) => BallRelation::Equal,
        (true, false, true) => BallRelation::FirstInsideSecond,
        (true, false, false) => BallRelation::SecondInsideFirst,
    })
}

pub fn ball_of_point(x: &PAdicPoint, level: i64) -> BallAddress {
    BallAddress {
        params: x.params,
        level,
        coords: x.coords.iter().map(|c| c.truncate_below(-level)).collect(),
    }
}

/// Smallest `γ*` such that the level-`γ*` ball around `x` contains `b`.
pub fn min_enclosing_level(x: &PAdicPoint, b: &BallAddress) -> i64 {
    let below = -b.level;
    x.coords
        .iter()
        .zip(&b.coords)
        .filter_map(|(xc, bc)| xc.lowest_difference(bc, below))
        .map(|k| -k)
        .fold(b.level, i64::max)
}

impl fmt::Display for BallAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:", self.params, self.level)?;
        for (j, c) in self.coords.iter().enumerate() {
            if j > 0 {
                write!(f, "|")?;
            }
            if let Some(v) = c.valuation() {
                let digits: Vec<u32> = (v..-self.level).map(|k| c.digit(k)).collect();
                write!(f, "{}", format_digit_list(&digits, self.params.p))?;
            }
        }
        Ok(())
    }
}

impl FromStr for BallAddress {
    type Err = Error;
    /// `p^n:γ:c1|c2|…`; each coordinate lists the digits ending at index
    /// `-γ-1`, lowest index first (most significant last).
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.splitn(3, ':');
        let (head, level, body) = match (parts.next(), parts.next(), parts.next()) {
            (Some(h), Some(l), Some(b)) => (h, l, b),
            _ => {
                return Err(Error::Parse(format!(
                    "ball '{s}': expected p^n:level:digits"
                )))
            }
        };
        let params: FieldParams = head.parse()?;
        let level: i64 = level
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad level '{level}' in '{s}'")))?;
        let mut coords = Vec::new();
        for part in body.split('|') {
            let digits = parse_digit_list(part.trim(), params.p)?;
            let low = -level - digits.len() as i64;
            coords.push(Digits::new(low, digits));
        }
        BallAddress::new(params, level, coords)
    }
}

impl Serialize for BallAddress {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BallAddress {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for PAdicPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn q2() -> FieldParams {
        FieldParams::new(2, 1).unwrap()
    }

    fn pt(params: FieldParams, x: Rational) -> PAdicPoint {
        PAdicPoint::from_rationals(params, &[x]).unwrap()
    }

    #[test]
    fn absolute_values() {
        assert_eq!(padic_abs(&int(0), 2), int(0));
        assert_eq!(padic_abs(&int(12), 2), rat(1, 4));
        assert_eq!(padic_abs(&rat(3, 2), 2), int(2));
        assert_eq!(padic_abs(&rat(5, 9), 3), int(9));
    }

    #[test]
    fn measures() {
        assert_eq!(q2().ball_measure(0), int(1));
        assert_eq!(FieldParams::new(3, 2).unwrap().ball_measure(2), int(81));
        assert_eq!(q2().ball_measure(-3), rat(1, 8));
        assert_eq!(q2().sphere_measure(0), rat(1, 2));
        assert_eq!(FieldParams::new(3, 1).unwrap().sphere_measure(1), int(2));
        assert_eq!(FieldParams::new(2, 2).unwrap().sphere_measure(0), rat(3, 4));
    }

    #[test]
    fn params_validation() {
        assert!(FieldParams::new(4, 1).is_err());
        assert!(FieldParams::new(2, 0).is_err());
        assert!(is_prime(97) && !is_prime(91));
    }

    #[test]
    fn relations() {
        let p = q2();
        let b = |lvl: i64, c: Rational| ball_of_point(&pt(p, c), lvl);
        assert_eq!(
            ball_relation(&b(0, int(0)), &b(1, int(0))).unwrap(),
            BallRelation::FirstInsideSecond
        );
        assert_eq!(
            ball_relation(&b(1, int(0)), &b(0, int(0))).unwrap(),
            BallRelation::SecondInsideFirst
        );
        assert_eq!(
            ball_relation(&b(0, int(0)), &b(0, int(1))).unwrap(),
            BallRelation::Equal
        );
        assert_eq!(
            ball_relation(&b(-1, int(0)), &b(-1, int(1))).unwrap(),
            BallRelation::Disjoint
        );
        let other = BallAddress::centered(FieldParams::new(3, 1).unwrap(), 0);
        assert!(matches!(
            ball_relation(&b(0, int(0)), &other),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn ball_of_point_truncates() {
        let p3 = FieldParams::new(3, 1).unwrap();
        let b = ball_of_point(&PAdicPoint::origin(p3), 2);
        assert_eq!(b, BallAddress::centered(p3, 2));
        assert_eq!(
            ball_of_point(&pt(q2(), int(1)), 0),
            BallAddress::centered(q2(), 0)
        );
        let half = ball_of_point(&pt(q2(), rat(1, 2)), 0);
        assert_eq!(half.coords()[0].digit(-1), 1);
        assert_eq!(half.to_string(), "2^1:0:1");
    }

    #[test]
    fn children_and_parent() {
        let b0 = BallAddress::centered(q2(), 0);
        let kids = b0.children();
        assert_eq!(kids.len(), 2);
        assert_eq!(kids[0], BallAddress::centered(q2(), -1));
        assert_eq!(kids[1], ball_of_point(&pt(q2(), int(1)), -1));
        assert_eq!(kids[1].parent(), b0);
        let total: Rational = kids.iter().map(BallAddress::measure).sum();
        assert_eq!(total, b0.measure());
    }

    #[test]
    fn enclosing_levels() {
        let b0 = BallAddress::centered(q2(), 0);
        assert_eq!(min_enclosing_level(&pt(q2(), rat(1, 4)), &b0), 2);
        assert_eq!(min_enclosing_level(&pt(q2(), int(2)), &b0), 0);
        assert_eq!(min_enclosing_level(&pt(q2(), rat(3, 8)), &b0), 3);
        let inner = ball_of_point(&pt(q2(), rat(5, 4)), -1);
        assert_eq!(min_enclosing_level(&pt(q2(), rat(5, 4)), &inner), -1);
        assert_eq!(min_enclosing_level(&pt(q2(), rat(1, 4)), &inner), 0);
    }

    #[test]
    fn text_forms_round_trip() {
        let p = FieldParams::new(3, 2).unwrap();
        let x = PAdicPoint::from_rationals(p, &[rat(7, 9), int(0)]).unwrap();
        let s = x.to_string();
        assert_eq!(s, "3^2:12@-2|");
        assert_eq!(s.parse::<PAdicPoint>().unwrap(), x);
        let b = ball_of_point(&x, -1);
        let t = b.to_string();
        assert_eq!(t, "3^2:-1:120|");
        assert_eq!(t.parse::<BallAddress>().unwrap(), b);
        assert_eq!(
            "2^1:0:10".parse::<BallAddress>().unwrap(),
            ball_of_point(&pt(q2(), rat(1, 4)), 0)
        );
        assert!("2^1:0:12".parse::<BallAddress>().is_err());
        assert!("2^1:1/3".parse::<PAdicPoint>().is_err());
        let p13 = FieldParams::new(13, 1).unwrap();
        let y = PAdicPoint::from_rationals(p13, &[rat(12 + 13 * 5, 13)]).unwrap();
        assert_eq!(y.to_string().parse::<PAdicPoint>().unwrap(), y);
    }
}
