//! Fractional, power and `L log L` maximal functions and the two commutators.
//!
//! Every supremum over balls is reduced to the finitely many balls the grid
//! resolves plus the chain of balls centered at the origin that contain the
//! structure ball; along that chain a closed-form upper bound decreases, so
//! enumeration stops once the bound falls below the best candidate.

mod commutator;
mod engine;
mod maximal;
mod profile;

pub use commutator::{
    maximal_commutator, maximal_commutator_field, nonlinear_commutator, nonlinear_commutator_field,
};
pub use maximal::{
    frac_maximal_at, frac_maximal_field, llogl_maximal, maximal_of_profile_at, power_maximal,
    restricted_frac_maximal, restricted_frac_maximal_many,
};
pub use profile::TailProfile;

pub(crate) use engine::SupEngine;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{format_rational, Precision, Rational, RealBound, Surd};
use crate::ultrametric::FieldParams;

/// Fractional order `0 <= α < n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alpha {
    value: Rational,
    n: usize,
}

impl Alpha {
    pub fn new(value: Rational, n: usize) -> Result<Self> {
        if value.is_negative() || value >= Rational::from_integer(n.into()) {
            return Err(Error::Parameter(format!(
                "α = {value} must satisfy 0 <= α < n = {n}"
            )));
        }
        if value.denom().to_u32().is_none() || value.numer().to_i64().is_none() {
            return Err(Error::Parameter(format!(
                "α = {value} is too large to represent"
            )));
        }
        Ok(Alpha { value, n })
    }

    pub fn zero(n: usize) -> Self {
        Alpha {
            value: Rational::zero(),
            n,
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `p^(γ(α-n))`, the normalizing factor `|B|^(α/n - 1)` of a level-`γ` ball.
    pub fn decay(&self, params: FieldParams, level: i64, prec: Precision) -> RealBound {
        let e = &self.value - Rational::from_integer(params.n().into());
        pow_p(
            params.p(),
            &(e * Rational::from_integer(level.into())),
            prec,
        )
    }

    /// `p^(γα) = |B|^(α/n)`.
    pub fn growth(&self, params: FieldParams, level: i64, prec: Precision) -> RealBound {
        pow_p(
            params.p(),
            &(&self.value * Rational::from_integer(level.into())),
            prec,
        )
    }
}

impl Serialize for Alpha {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.value))
    }
}

type PowKey = (u32, Rational, u32);

fn pow_cache() -> &'static RwLock<HashMap<PowKey, RealBound>> {
    static CACHE: OnceLock<RwLock<HashMap<PowKey, RealBound>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Entries kept before the memo table is flushed.
const POW_CACHE_LIMIT: usize = 1 << 16;

/// `p^r` for rational `r`, exact in `Q(p^(1/den r))`. Enclosures are memoized.
pub fn pow_p(p: u32, r: &Rational, prec: Precision) -> RealBound {
    if r.is_integer() {
        let e = r.numer().to_i64().expect("exponent fits i64");
        return RealBound::exact(crate::numeric::p_pow(p, e));
    }
    let key = (p, r.clone(), prec.power_bits);
    if let Some(v) = pow_cache().read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let d = r.denom().to_u32().expect("exponent denominator fits u32");
    let m = r.numer().to_i64().expect("exponent numerator fits i64");
    let v = RealBound::from_surd(Surd::theta_pow(p, d, m), prec.power_bits);
    let mut cache = pow_cache().write().expect("cache lock");
    if cache.len() >= POW_CACHE_LIMIT {
        cache.clear();
    }
    cache.insert(key, v.clone());
    v
}
