use num_traits::{Signed, Zero};

use super::pow_p;
use crate::error::{Error, Result};
use crate::lcfun::{CellGrid, LCFunction};
use crate::numeric::{Precision, Rational, RealBound};
use crate::ultrametric::PAdicPoint;

/// Cell values on a structure ball `B_Γ(0)` plus a radial far field: on the
/// sphere `S_k`, `k > Γ`, the value is `base + c·p^(k·e)`.
///
/// Locally constant functions are the case `c = 0`, `base = c_∞`; fractional
/// maximal functions of compactly supported data have `base = 0`, `e = α - n`.
#[derive(Clone, Debug)]
pub struct TailProfile {
    grid: CellGrid,
    core: Vec<RealBound>,
    base: RealBound,
    coeff: RealBound,
    exponent: Rational,
}

impl TailProfile {
    pub fn new(
        grid: CellGrid,
        core: Vec<RealBound>,
        base: RealBound,
        coeff: RealBound,
        exponent: Rational,
    ) -> Result<Self> {
        if core.len() != grid.cell_count() {
            return Err(Error::Parameter(format!(
                "{} core values for {} cells",
                core.len(),
                grid.cell_count()
            )));
        }
        let exponent = if coeff.is_zero() {
            Rational::zero()
        } else {
            exponent
        };
        if !coeff.is_zero() && !exponent.is_negative() {
            return Err(Error::Parameter(format!(
                "tail exponent {exponent} must be negative"
            )));
        }
        Ok(TailProfile {
            grid,
            core,
            base,
            coeff,
            exponent,
        })
    }

    pub fn from_lc(f: &LCFunction) -> Self {
        TailProfile {
            grid: *f.grid(),
            core: f.values().iter().cloned().map(RealBound::exact).collect(),
            base: RealBound::exact(f.tail().clone()),
            coeff: RealBound::zero(),
            exponent: Rational::zero(),
        }
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn core(&self) -> &[RealBound] {
        &self.core
    }

    pub fn base(&self) -> &RealBound {
        &self.base
    }

    /// Tail coefficient `c`.
    pub fn coeff(&self) -> &RealBound {
        &self.coeff
    }

    /// Tail exponent `e`.
    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    /// Value on the sphere `S_k` outside the structure ball.
    pub fn far_value(&self, k: i64, prec: Precision) -> RealBound {
        debug_assert!(k > self.grid.structure_level());
        if self.coeff.is_zero() {
            return self.base.clone();
        }
        let pk = pow_p(
            self.grid.params().p(),
            &(&self.exponent * Rational::from_integer(k.into())),
            prec,
        );
        self.base.add(&self.coeff.mul(&pk))
    }

    pub fn value_at(&self, x: &PAdicPoint, prec: Precision) -> RealBound {
        match self.grid.index_of_point(x) {
            Some(i) => self.core[i].clone(),
            None => self.far_value(-x.valuation().expect("outside point is nonzero"), prec),
        }
    }

    pub fn map_core(&self, f: impl Fn(&RealBound) -> RealBound) -> Vec<RealBound> {
        self.core.iter().map(f).collect()
    }

    /// `|g|`; needs the far field not to change sign.
    pub fn abs(&self) -> Result<Self> {
        let (bs, cs) = (self.base.signum(), self.coeff.signum());
        let (base, coeff) = match (bs, cs) {
            (_, Some(0)) => (self.base.abs(), self.coeff.clone()),
            (Some(0), _) => (self.base.clone(), self.coeff.abs()),
            (Some(a), Some(b)) if a == b => (self.base.abs(), self.coeff.abs()),
            _ => {
                return Err(Error::Domain(
                    "absolute value of a far field that may change sign is not representable"
                        .into(),
                ))
            }
        };
        Ok(TailProfile {
            grid: self.grid,
            core: self.map_core(RealBound::abs),
            base,
            coeff,
            exponent: self.exponent.clone(),
        })
    }

    /// The same function on a finer or larger grid.
    pub fn refine_to(&self, grid: &CellGrid, prec: Precision) -> Result<Self> {
        if grid == &self.grid {
            return Ok(self.clone());
        }
        if grid.resolution() > self.grid.resolution()
            || grid.structure_level() < self.grid.structure_level()
        {
            return Err(Error::Parameter(
                "refinement must not coarsen the grid".into(),
            ));
        }
        let core = (0..grid.cell_count())
            .map(|i| self.value_at(&grid.cell(i).center(), prec))
            .collect();
        Ok(TailProfile {
            grid: *grid,
            core,
            ..self.clone()
        })
    }

    /// Pointwise product with a locally constant function.
    pub fn mul_lc(&self, b: &LCFunction, prec: Precision) -> Result<Self> {
        let grid = self.grid.join(b.grid())?;
        let me = self.refine_to(&grid, prec)?;
        let b = b.refine_to(&grid)?;
        let bt = RealBound::exact(b.tail().clone());
        Ok(TailProfile {
            grid,
            core: me
                .core
                .iter()
                .zip(b.values())
                .map(|(v, w)| v.scale(w))
                .collect(),
            base: me.base.mul(&bt),
            coeff: me.coeff.mul(&bt),
            exponent: me.exponent,
        })
    }

    /// Pointwise difference; both far fields must decay at the same rate.
    pub fn sub(&self, other: &TailProfile, prec: Precision) -> Result<Self> {
        let grid = self.grid.join(&other.grid)?;
        let (a, b) = (self.refine_to(&grid, prec)?, other.refine_to(&grid, prec)?);
        let exponent = if a.coeff.is_zero() {
            b.exponent.clone()
        } else if b.coeff.is_zero() || a.exponent == b.exponent {
            a.exponent.clone()
        } else {
            return Err(Error::Domain(
                "far fields with different decay rates".into(),
            ));
        };
        TailProfile::new(
            grid,
            a.core.iter().zip(&b.core).map(|(x, y)| x.sub(y)).collect(),
            a.base.sub(&b.base),
            a.coeff.sub(&b.coeff),
            exponent,
        )
    }
}
