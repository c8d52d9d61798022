use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use super::{pow_p, Alpha, TailProfile};
use crate::error::{Error, Result};
use crate::numeric::{Precision, Rational, RealBound};
use crate::ultrametric::{FieldParams, PAdicPoint};

/// Centered levels enumerated before the remaining chain is folded into the bracket.
const MAX_CHAIN: usize = 256;

/// Suprema of `|B|^(α/n - 1) ∫_B g` over balls, for a nonnegative profile `g`.
pub(crate) struct SupEngine<'a> {
    g: &'a TailProfile,
    alpha: &'a Alpha,
    prec: Precision,
    params: FieldParams,
    sums: Vec<Vec<RealBound>>,
    limit: RealBound,
    /// `decay(level)` for the grid levels, resolution first.
    decays: Vec<RealBound>,
    inner: OnceLock<Vec<RealBound>>,
    outer: OnceLock<RealBound>,
}

impl<'a> SupEngine<'a> {
    pub fn new(g: &'a TailProfile, alpha: &'a Alpha, prec: Precision) -> Result<Self> {
        let params = g.grid().params();
        if alpha.n() != params.n() {
            return Err(Error::Parameter(format!(
                "α was built for n = {}, field has n = {}",
                alpha.n(),
                params.n()
            )));
        }
        if !alpha.is_zero() && g.base().signum() != Some(0) {
            return Err(Error::Divergence(
                "fractional maximal function of a function with nonzero value at infinity is infinite".into(),
            ));
        }
        if g.coeff().signum() != Some(0) && !(g.exponent() + alpha.value()).is_negative() {
            return Err(Error::Divergence(format!(
                "far field decaying like |x|^{} is too heavy for α = {}",
                Rational::from_integer(params.n().into()) * g.exponent(),
                alpha.value()
            )));
        }
        let cm = g.grid().cell_measure();
        let scaled: Vec<RealBound> = g.core().iter().map(|v| v.scale(&cm)).collect();
        let sums = g
            .grid()
            .level_sums(&scaled, RealBound::zero(), |a, b| a.add(b));
        let limit = if alpha.is_zero() {
            g.base().clone()
        } else {
            RealBound::zero()
        };
        let res = g.grid().resolution();
        let decays = (0..sums.len())
            .map(|k| alpha.decay(params, res + k as i64, prec))
            .collect();
        Ok(SupEngine {
            g,
            alpha,
            prec,
            params,
            sums,
            limit,
            decays,
            inner: OnceLock::new(),
            outer: OnceLock::new(),
        })
    }

    fn structure_level(&self) -> i64 {
        self.g.grid().structure_level()
    }

    fn decay(&self, level: i64) -> RealBound {
        self.alpha.decay(self.params, level, self.prec)
    }

    /// Best candidate among grid balls containing cell `i`.
    pub fn inner_at_cell(&self, i: usize) -> RealBound {
        self.inner_table()[i].clone()
    }

    /// Per-cell best grid-ball candidate, filled top-down once: the best over
    /// the balls containing an ancestor is shared by all of its cells.
    fn inner_table(&self) -> &[RealBound] {
        self.inner.get_or_init(|| {
            let mut best: Vec<RealBound> = Vec::new();
            for (k, row) in self.sums.iter().enumerate().rev() {
                best = row
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        let cand = self.decays[k].mul(s);
                        if best.is_empty() {
                            cand
                        } else {
                            cand.max(&best[j % best.len()])
                        }
                    })
                    .collect();
            }
            best
        })
    }

    /// `∫_{S_k} g` for `k > Γ`.
    fn shell(&self, k: i64) -> RealBound {
        self.g
            .far_value(k, self.prec)
            .scale(&self.params.sphere_measure(k))
    }

    /// Upper bound for `sup_{γ >= from} (candidate(γ) - limit)` along the centered chain.
    fn chain_bound(&self, from: i64) -> Option<RealBound> {
        let gamma = self.structure_level();
        let total = &self.sums.last().expect("structure level")[0];
        let excess = total.sub(&self.g.base().scale(&self.params.ball_measure(gamma)));
        let first = self.decay(from).mul(&excess.pos_part());
        let coeff = self.g.coeff();
        if coeff.is_zero() {
            return Some(first);
        }
        let n = Rational::from_integer(self.params.n().into());
        let p = self.params.p();
        let a = self.alpha.value() - &n;
        let s = &n + self.g.exponent();
        let one = RealBound::one();
        let t = if s.is_positive() {
            let head = pow_p(
                p,
                &((&s + &a) * Rational::from_integer(from.into())),
                self.prec,
            );
            head.div(&one.sub(&pow_p(p, &-s, self.prec)))
        } else if s.is_zero() {
            let steps = Rational::from_integer((from - gamma).into());
            let ratio = pow_p(p, &a, self.prec);
            let next = ratio.scale(&(&steps + Rational::from_integer(1.into())));
            if next.hi() > &steps {
                return None;
            }
            self.decay(from).scale(&steps)
        } else {
            let head = pow_p(
                p,
                &(&s * Rational::from_integer((gamma + 1).into())),
                self.prec,
            );
            self.decay(from)
                .mul(&head)
                .div(&one.sub(&pow_p(p, &s, self.prec)))
        };
        let sphere_ratio = self.params.sphere_measure(0);
        Some(first.add(&coeff.scale(&sphere_ratio).mul(&t)))
    }

    /// `sup_{γ >= from} |B_γ(0)|^(α/n - 1) ∫_{B_γ(0)} g`, including the limit as `γ → ∞`.
    pub fn centered_sup(&self, from: i64) -> RealBound {
        self.centered_sup_at(from).0
    }

    /// The centered supremum together with the level of the best ball, `None`
    /// when the limit at infinity is not beaten by any enumerated ball.
    pub fn centered_sup_at(&self, from: i64) -> (RealBound, Option<i64>) {
        let gamma = self.structure_level();
        debug_assert!(from > gamma);
        let bits = self.prec.power_bits + 16;
        let mut mass = self.sums.last().expect("structure level")[0].clone();
        for k in gamma + 1..from {
            mass = mass.add(&self.shell(k));
        }
        let mut best = self.limit.clone();
        let mut witness = None;
        let mut level = from;
        for step in 0.. {
            mass = mass.add(&self.shell(level)).tightened(bits);
            let cand = self.decay(level).mul(&mass);
            if best.lt(&cand).is_true() {
                witness = Some(level);
            }
            best = best.max(&cand).tightened(bits);
            if let Some(u) = self.chain_bound(level + 1) {
                let cap = self.limit.add(&u);
                if cap.hi() <= best.lo() {
                    return (best, witness);
                }
                if step >= MAX_CHAIN {
                    let hi = best.hi().clone().max(cap.hi().clone());
                    return (RealBound::interval(best.lo().clone(), hi), witness);
                }
            }
            level += 1;
        }
        unreachable!()
    }

    /// `M_α g(x)` for any point `x`.
    pub fn at_point(&self, x: &PAdicPoint) -> RealBound {
        let gamma = self.structure_level();
        match self.g.grid().index_of_point(x) {
            Some(i) => {
                let outer = self.outer.get_or_init(|| self.centered_sup(gamma + 1));
                self.inner_at_cell(i).max(outer)
            }
            None => {
                let k = -x.valuation().expect("outside point is nonzero");
                let near = self.g.far_value(k, self.prec);
                let near = if self.alpha.is_zero() {
                    near
                } else {
                    self.alpha.growth(self.params, k - 1, self.prec).mul(&near)
                };
                near.max(&self.centered_sup(k))
            }
        }
    }
}
