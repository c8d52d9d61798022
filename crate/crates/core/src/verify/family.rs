use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcfun::{CellGrid, LCFunction, MAX_CELLS};
use crate::numeric::{rat, Rational};
use crate::ultrametric::{BallAddress, FieldParams};

/// Sign constraint on generated cell values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConstraint {
    Any,
    Nonnegative,
}

/// Ranges for one randomly drawn locally constant function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSpec {
    /// Inclusive range of the structure level `Γ`.
    pub structure_levels: [i64; 2],
    /// Inclusive range of `Γ - γ_res`.
    pub depth: [i64; 2],
    /// Every level used must lie in this inclusive window.
    pub levels: [i64; 2],
    /// Cell values are `a/b` with `|a| <= numerator_bound`, `1 <= b <= denominator_bound`.
    pub numerator_bound: u32,
    pub denominator_bound: u32,
    pub sign: SignConstraint,
    /// A compactly supported function has tail value `0`.
    pub compact: bool,
}

impl FunctionSpec {
    pub fn validate(&self, params: FieldParams) -> Result<()> {
        let [g_lo, g_hi] = self.structure_levels;
        let [d_lo, d_hi] = self.depth;
        let [l_lo, l_hi] = self.levels;
        if g_lo > g_hi || d_lo > d_hi || l_lo > l_hi {
            return Err(Error::Config(
                "every range must be written [low, high] with low <= high".into(),
            ));
        }
        if d_lo < 0 {
            return Err(Error::Config(format!(
                "depth {d_lo} would put the resolution above the structure level (Γ < γ_res)"
            )));
        }
        if g_lo < l_lo || g_hi > l_hi || g_lo - d_hi < l_lo {
            return Err(Error::Config(format!(
                "structure levels {g_lo}..={g_hi} with depth up to {d_hi} leave the level window {l_lo}..={l_hi}"
            )));
        }
        let cells = (params.branching() as f64).powi(d_hi as i32);
        if cells > MAX_CELLS as f64 {
            return Err(Error::Config(format!(
                "depth {d_hi} needs {cells} cells, above the limit {MAX_CELLS}"
            )));
        }
        if self.denominator_bound == 0 {
            return Err(Error::Config("denominator bound must be at least 1".into()));
        }
        Ok(())
    }
}

fn draw_value(rng: &mut ChaCha8Rng, spec: &FunctionSpec) -> Rational {
    let bound = spec.numerator_bound as i64;
    let lo = match spec.sign {
        SignConstraint::Any => -bound,
        SignConstraint::Nonnegative => 0,
    };
    let a = rng.gen_range(lo..=bound);
    let b = rng.gen_range(1..=spec.denominator_bound as i64);
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn draw_grid(rng: &mut ChaCha8Rng, params: FieldParams, spec: &FunctionSpec) -> Result<CellGrid> {
    let gamma = rng.gen_range(spec.structure_levels[0]..=spec.structure_levels[1]);
    let depth = rng.gen_range(spec.depth[0]..=spec.depth[1]);
    CellGrid::new(params, gamma, gamma - depth)
}

/// Values on `grid`; a third of the cells are zero so that supports have holes.
fn fill(rng: &mut ChaCha8Rng, grid: CellGrid, spec: &FunctionSpec) -> Result<LCFunction> {
    let values = (0..grid.cell_count())
        .map(|_| {
            if rng.gen_ratio(1, 3) {
                Rational::zero()
            } else {
                draw_value(rng, spec)
            }
        })
        .collect();
    let tail = if spec.compact || rng.gen_bool(0.5) {
        Rational::zero()
    } else {
        draw_value(rng, spec)
    };
    LCFunction::new(grid, values, tail)
}

/// One function drawn from `spec`.
pub fn generate_function(
    rng: &mut ChaCha8Rng,
    params: FieldParams,
    spec: &FunctionSpec,
) -> Result<LCFunction> {
    let grid = draw_grid(rng, params, spec)?;
    fill(rng, grid, spec)
}

/// `count` functions from a fresh generator seeded with `seed`.
pub fn generate_family(
    params: FieldParams,
    spec: &FunctionSpec,
    count: usize,
    seed: u64,
) -> Result<Vec<LCFunction>> {
    spec.validate(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| generate_function(&mut rng, params, spec))
        .collect()
}

/// A uniformly chosen ball among the grid balls of `grid` and the two
/// centered balls just above its structure ball.
pub fn random_ball(rng: &mut ChaCha8Rng, grid: &CellGrid) -> BallAddress {
    let top = grid.structure_level();
    let level = rng.gen_range(grid.resolution()..=top + 2);
    if level > top {
        return BallAddress::centered(grid.params(), level);
    }
    let index = rng.gen_range(0..grid.count_at(level));
    grid.ball_at(level, index)
}

/// Exponent pairs `0 < r < q` for the distribution-function inequality.
fn random_exponent_pair(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    const R: [(i64, i64); 5] = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1)];
    const GAP: [(i64, i64); 4] = [(1, 4), (1, 2), (1, 1), (2, 1)];
    let (a, b) = R[rng.gen_range(0..R.len())];
    let (c, d) = GAP[rng.gen_range(0..GAP.len())];
    let r = rat(a, b);
    let q = &r + rat(c, d);
    (r, q)
}

/// Nonzero scalars for homogeneity checks.
fn random_scalar(rng: &mut ChaCha8Rng) -> Rational {
    let a = rng.gen_range(1..=5i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(a, rng.gen_range(1..=3))
}

/// One instance of the seeded verification family.
#[derive(Clone, Debug)]
pub struct Instance {
    /// Nonnegative symbol.
    pub b_plus: LCFunction,
    /// Signed symbol, possibly with a nonzero tail value.
    pub b: LCFunction,
    /// Compactly supported signed function.
    pub f: LCFunction,
    /// A ball adapted to the grid of `b`.
    pub ball: BallAddress,
    /// A ball adapted to the grid of `f`.
    pub f_ball: BallAddress,
    pub exponents: (Rational, Rational),
    pub scalar: Rational,
}

impl Instance {
    /// `b` with its tail value replaced by zero.
    pub fn b_compact(&self) -> LCFunction {
        LCFunction::new(*self.b.grid(), self.b.values().to_vec(), Rational::zero())
            .expect("same grid")
    }
}

/// The whole family, generated from one seed in a fixed order. The three
/// functions of an instance share one grid.
pub fn generate_instances(
    params: FieldParams,
    spec: &FunctionSpec,
    count: usize,
    seed: u64,
) -> Result<Vec<Instance>> {
    spec.validate(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plus = FunctionSpec {
        sign: SignConstraint::Nonnegative,
        compact: false,
        ..spec.clone()
    };
    let signed = FunctionSpec {
        sign: SignConstraint::Any,
        compact: false,
        ..spec.clone()
    };
    let compact = FunctionSpec {
        sign: SignConstraint::Any,
        compact: true,
        ..spec.clone()
    };
    (0..count)
        .map(|_| {
            let grid = draw_grid(&mut rng, params, spec)?;
            let b_plus = fill(&mut rng, grid, &plus)?;
            let b = fill(&mut rng, grid, &signed)?;
            let f = fill(&mut rng, grid, &compact)?;
            let ball = random_ball(&mut rng, &grid);
            let f_ball = random_ball(&mut rng, &grid);
            let exponents = random_exponent_pair(&mut rng);
            let scalar = random_scalar(&mut rng);
            Ok(Instance {
                b_plus,
                b,
                f,
                ball,
                f_ball,
                exponents,
                scalar,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> FunctionSpec {
        FunctionSpec {
            structure_levels: [-1, 1],
            depth: [1, 2],
            levels: [-3, 3],
            numerator_bound: 4,
            denominator_bound: 3,
            sign: SignConstraint::Nonnegative,
            compact: true,
        }
    }

    #[test]
    fn families_are_reproducible_and_respect_constraints() {
        let params = FieldParams::new(3, 2).unwrap();
        let a = generate_family(params, &spec(), 10, 7).unwrap();
        let b = generate_family(params, &spec(), 10, 7).unwrap();
        assert_eq!(a, b);
        for f in &a {
            assert!(f.is_nonnegative() && f.tail().is_zero());
            assert!(f.grid().resolution() >= -3 && f.grid().structure_level() <= 3);
        }
        assert_ne!(a, generate_family(params, &spec(), 10, 8).unwrap());
    }

    #[test]
    fn impossible_ranges_are_rejected() {
        let params = FieldParams::new(2, 1).unwrap();
        let bad = FunctionSpec {
            depth: [-1, 1],
            ..spec()
        };
        assert!(matches!(
            generate_family(params, &bad, 1, 0),
            Err(Error::Config(_))
        ));
        let bad = FunctionSpec {
            structure_levels: [-3, 0],
            depth: [1, 1],
            ..spec()
        };
        assert!(generate_family(params, &bad, 1, 0).is_err());
    }
}
