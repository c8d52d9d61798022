//! Locally constant functions: exact rational values on the level-`γ_res`
//! cells of a structure ball `B_Γ(0)` and a constant tail outside it.
//!
//! Cells are indexed by their digit tuples at indices `-Γ ..= -γ_res - 1`,
//! lowest index least significant. With `P = p^n`, the cells inside a ball of
//! level `γ` are then exactly the indices congruent to that ball's own index
//! modulo `P^(Γ-γ)`, which turns every ball sum into a residue-class sum.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational, Rational};
use crate::ultrametric::{
    ball_relation, BallAddress, BallRelation, Digits, FieldParams, PAdicPoint,
};

/// Largest number of cells a single grid may hold.
pub const MAX_CELLS: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellGrid {
    params: FieldParams,
    structure_level: i64,
    resolution: i64,
}

impl CellGrid {
    pub fn new(params: FieldParams, structure_level: i64, resolution: i64) -> Result<Self> {
        if resolution > structure_level {
            return Err(Error::Parameter(format!(
                "resolution {resolution} exceeds structure level {structure_level}"
            )));
        }
        let depth = (structure_level - resolution) as u32;
        let cells = params
            .branching()
            .checked_pow(depth)
            .filter(|&c| c <= MAX_CELLS);
        if cells.is_none() {
            return Err(Error::Parameter(format!(
                "grid {params} with levels {resolution}..{structure_level} exceeds {MAX_CELLS} cells"
            )));
        }
        Ok(CellGrid {
            params,
            structure_level,
            resolution,
        })
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    /// `Γ`, the level of the structure ball `B_Γ(0)`.
    pub fn structure_level(&self) -> i64 {
        self.structure_level
    }

    /// `γ_res`, the level of every cell.
    pub fn resolution(&self) -> i64 {
        self.resolution
    }

    pub fn structure_ball(&self) -> BallAddress {
        BallAddress::centered(self.params, self.structure_level)
    }

    /// Number of balls of level `γ` inside the structure ball.
    pub fn count_at(&self, level: i64) -> usize {
        debug_assert!(level <= self.structure_level);
        self.params
            .branching()
            .pow((self.structure_level - level) as u32) as usize
    }

    pub fn cell_count(&self) -> usize {
        self.count_at(self.resolution)
    }

    pub fn cell_measure(&self) -> Rational {
        self.params.ball_measure(self.resolution)
    }

    fn tuple_index(&self, coords: &[Digits], level: i64) -> usize {
        let (p, big) = (self.params.p() as usize, self.params.branching() as usize);
        let mut idx = 0usize;
        let mut scale = 1usize;
        for k in -self.structure_level..-level {
            let mut t = 0usize;
            let mut pj = 1usize;
            for c in coords {
                t += c.digit(k) as usize * pj;
                pj *= p;
            }
            idx += t * scale;
            scale *= big;
        }
        idx
    }

    fn inside(&self, coords: &[Digits]) -> bool {
        coords
            .iter()
            .all(|c| c.valuation().is_none_or(|v| v >= -self.structure_level))
    }

    /// Index of the cell containing `x`, `None` outside the structure ball.
    pub fn index_of_point(&self, x: &PAdicPoint) -> Option<usize> {
        self.inside(x.coords())
            .then(|| self.tuple_index(x.coords(), self.resolution))
    }

    /// Index of a ball with `γ_res <= level <= Γ` among the balls of its level.
    pub fn index_of_ball(&self, b: &BallAddress) -> Option<usize> {
        (b.level() >= self.resolution
            && b.level() <= self.structure_level
            && self.inside(b.coords()))
        .then(|| self.tuple_index(b.coords(), b.level()))
    }

    /// The ball of level `level` with the given index.
    pub fn ball_at(&self, level: i64, mut index: usize) -> BallAddress {
        let (p, big) = (self.params.p() as usize, self.params.branching() as usize);
        let n = self.params.n();
        let len = (self.structure_level - level) as usize;
        let mut per_coord = vec![Vec::with_capacity(len); n];
        for _ in 0..len {
            let mut t = index % big;
            index /= big;
            for col in per_coord.iter_mut() {
                col.push((t % p) as u32);
                t /= p;
            }
        }
        let coords = per_coord
            .into_iter()
            .map(|d| Digits::new(-self.structure_level, d))
            .collect();
        BallAddress::new(self.params, level, coords).expect("grid ball")
    }

    pub fn cell(&self, index: usize) -> BallAddress {
        self.ball_at(self.resolution, index)
    }

    pub fn cells(&self) -> Vec<BallAddress> {
        (0..self.cell_count()).map(|i| self.cell(i)).collect()
    }

    /// Cell indices inside the grid ball of level `level` with index `index`.
    pub fn cells_in(&self, level: i64, index: usize) -> impl Iterator<Item = usize> {
        let stride = self.count_at(level);
        let count = self.cell_count() / stride;
        (0..count).map(move |m| index + m * stride)
    }

    /// Index at level `to` of the ball containing ball `index` of level `from`.
    pub fn ancestor_index(&self, index: usize, to: i64) -> usize {
        index % self.count_at(to)
    }

    /// Sums of `values` over every grid ball, one vector per level from
    /// `γ_res` (the values themselves) up to `Γ` (a single total).
    pub fn level_sums<T: Clone>(
        &self,
        values: &[T],
        zero: T,
        add: impl Fn(&T, &T) -> T,
    ) -> Vec<Vec<T>> {
        assert_eq!(values.len(), self.cell_count());
        let mut out = vec![values.to_vec()];
        for level in self.resolution + 1..=self.structure_level {
            let prev = out.last().unwrap();
            let mut next = vec![zero.clone(); self.count_at(level)];
            let m = next.len();
            for (i, v) in prev.iter().enumerate() {
                next[i % m] = add(&next[i % m], v);
            }
            out.push(next);
        }
        out
    }

    /// Smallest grid containing both.
    pub fn join(&self, other: &CellGrid) -> Result<CellGrid> {
        if self.params != other.params {
            return Err(Error::Parameter(format!(
                "field parameters differ: {} vs {}",
                self.params, other.params
            )));
        }
        CellGrid::new(
            self.params,
            self.structure_level.max(other.structure_level),
            self.resolution.min(other.resolution),
        )
    }
}

/// Where a ball sits relative to a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallPlacement {
    /// Inside the structure ball at a level the grid resolves: `(level, index)`.
    Grid(i64, usize),
    /// Inside a single cell, strictly below the resolution.
    WithinCell(usize),
    /// Contains the structure ball strictly (level above `Γ`).
    Covers,
    /// Disjoint from the structure ball.
    Outside,
}

impl CellGrid {
    pub fn place(&self, b: &BallAddress) -> BallPlacement {
        if let Some(i) = self.index_of_ball(b) {
            return BallPlacement::Grid(b.level(), i);
        }
        match ball_relation(b, &self.structure_ball()).expect("same field") {
            BallRelation::Disjoint => BallPlacement::Outside,
            BallRelation::SecondInsideFirst => BallPlacement::Covers,
            BallRelation::Equal => BallPlacement::Grid(self.structure_level, 0),
            BallRelation::FirstInsideSecond => {
                BallPlacement::WithinCell(self.index_of_point(&b.center()).expect("inside"))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Max,
    Min,
}

impl BinaryOp {
    fn apply(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            BinaryOp::Add => a + b,
            BinaryOp::Sub => a - b,
            BinaryOp::Mul => a * b,
            BinaryOp::Max => a.max(b).clone(),
            BinaryOp::Min => a.min(b).clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LCFunction {
    grid: CellGrid,
    values: Vec<Rational>,
    tail: Rational,
}

impl LCFunction {
    pub fn new(grid: CellGrid, values: Vec<Rational>, tail: Rational) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::Parameter(format!(
                "{} values for a grid of {} cells",
                values.len(),
                grid.cell_count()
            )));
        }
        Ok(LCFunction { grid, values, tail })
    }

    pub fn from_cells(
        grid: CellGrid,
        tail: Rational,
        f: impl Fn(&BallAddress) -> Rational,
    ) -> Self {
        let values = (0..grid.cell_count()).map(|i| f(&grid.cell(i))).collect();
        LCFunction { grid, values, tail }
    }

    pub fn constant(params: FieldParams, c: Rational) -> Self {
        let grid = CellGrid::new(params, 0, 0).expect("single cell");
        LCFunction {
            grid,
            values: vec![c.clone()],
            tail: c,
        }
    }

    pub fn zero(params: FieldParams) -> Self {
        Self::constant(params, Rational::zero())
    }

    /// Indicator of a ball, on the coarsest grid resolving it.
    pub fn char_fn(b: &BallAddress) -> Self {
        let origin = PAdicPoint::origin(b.params());
        let big = crate::ultrametric::min_enclosing_level(&origin, b);
        let grid = CellGrid::new(b.params(), big, b.level()).expect("indicator grid");
        let idx = grid.index_of_ball(b).expect("ball inside its grid");
        let mut values = vec![Rational::zero(); grid.cell_count()];
        values[idx] = Rational::one();
        LCFunction {
            grid,
            values,
            tail: Rational::zero(),
        }
    }

    pub fn params(&self) -> FieldParams {
        self.grid.params
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn tail(&self) -> &Rational {
        &self.tail
    }

    pub fn value_at(&self, x: &PAdicPoint) -> &Rational {
        match self.grid.index_of_point(x) {
            Some(i) => &self.values[i],
            None => &self.tail,
        }
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.tail.is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.tail.is_negative() && self.values.iter().all(|v| !v.is_negative())
    }

    /// Largest `|f|` over the whole space.
    pub fn sup_abs(&self) -> Rational {
        self.values
            .iter()
            .map(|v| v.abs())
            .fold(self.tail.abs(), |a, b| a.max(b))
    }

    /// The same function on the finer/larger grid `(γ'_res, Γ')`.
    pub fn refine(&self, resolution: i64, structure_level: i64) -> Result<Self> {
        if resolution > self.grid.resolution || structure_level < self.grid.structure_level {
            return Err(Error::Parameter(format!(
                "refine to levels {resolution}..{structure_level} does not contain {}..{}",
                self.grid.resolution, self.grid.structure_level
            )));
        }
        let grid = CellGrid::new(self.params(), structure_level, resolution)?;
        let values = (0..grid.cell_count())
            .map(|i| {
                let cell = grid.cell(i);
                match self.grid.index_of_point(&cell.center()) {
                    Some(j) => self.values[j].clone(),
                    None => self.tail.clone(),
                }
            })
            .collect();
        Ok(LCFunction {
            grid,
            values,
            tail: self.tail.clone(),
        })
    }

    pub fn refine_to(&self, grid: &CellGrid) -> Result<Self> {
        if *grid == self.grid {
            return Ok(self.clone());
        }
        self.refine(grid.resolution, grid.structure_level)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        LCFunction {
            grid: self.grid,
            values: self.values.iter().map(&f).collect(),
            tail: f(&self.tail),
        }
    }

    pub fn combine(&self, other: &LCFunction, op: BinaryOp) -> Result<Self> {
        let grid = self.grid.join(&other.grid)?;
        let (a, b) = (self.refine_to(&grid)?, other.refine_to(&grid)?);
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| op.apply(x, y))
            .collect();
        Ok(LCFunction {
            grid,
            values,
            tail: op.apply(&a.tail, &b.tail),
        })
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v * c)
    }

    /// `b⁺ = max(b, 0)`.
    pub fn pos_part(&self) -> Self {
        self.map(|v| {
            if v.is_positive() {
                v.clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// `b⁻ = -min(b, 0)`.
    pub fn neg_part(&self) -> Self {
        self.map(|v| {
            if v.is_negative() {
                -v
            } else {
                Rational::zero()
            }
        })
    }

    /// `(value, measure)` pairs of `f` restricted to `b`, merged by value and
    /// sorted ascending.
    pub fn distribution(&self, b: &BallAddress) -> Vec<(Rational, Rational)> {
        let mut acc: BTreeMap<Rational, Rational> = BTreeMap::new();
        let mut put = |v: &Rational, m: Rational| {
            *acc.entry(v.clone()).or_insert_with(Rational::zero) += m;
        };
        match self.grid.place(b) {
            BallPlacement::Grid(level, idx) => {
                let cm = self.grid.cell_measure();
                for i in self.grid.cells_in(level, idx) {
                    put(&self.values[i], cm.clone());
                }
            }
            BallPlacement::WithinCell(i) => put(&self.values[i], b.measure()),
            BallPlacement::Covers => {
                let cm = self.grid.cell_measure();
                for v in &self.values {
                    put(v, cm.clone());
                }
                put(
                    &self.tail,
                    b.measure() - self.grid.structure_ball().measure(),
                );
            }
            BallPlacement::Outside => put(&self.tail, b.measure()),
        }
        acc.into_iter().filter(|(_, m)| !m.is_zero()).collect()
    }

    /// Exact Haar integral over a ball.
    pub fn integrate(&self, b: &BallAddress) -> Rational {
        let cm = self.grid.cell_measure();
        match self.grid.place(b) {
            BallPlacement::Grid(level, idx) => {
                self.grid
                    .cells_in(level, idx)
                    .map(|i| &self.values[i])
                    .sum::<Rational>()
                    * cm
            }
            BallPlacement::WithinCell(i) => &self.values[i] * b.measure(),
            BallPlacement::Covers => {
                self.values.iter().sum::<Rational>() * cm
                    + &self.tail * (b.measure() - self.grid.structure_ball().measure())
            }
            BallPlacement::Outside => &self.tail * b.measure(),
        }
    }

    /// Integral over `Q_p^n`; diverges unless the tail vanishes.
    pub fn integrate_global(&self) -> Result<Rational> {
        if !self.tail.is_zero() {
            return Err(Error::Divergence(format!(
                "global integral with tail value {} diverges",
                self.tail
            )));
        }
        Ok(self.values.iter().sum::<Rational>() * self.grid.cell_measure())
    }

    pub fn ball_mean(&self, b: &BallAddress) -> Rational {
        self.integrate(b) / b.measure()
    }

    /// Sums of the cell values times the cell measure over every grid ball.
    pub fn ball_integrals(&self) -> Vec<Vec<Rational>> {
        let cm = self.grid.cell_measure();
        let scaled: Vec<Rational> = self.values.iter().map(|v| v * &cm).collect();
        self.grid
            .level_sums(&scaled, Rational::zero(), |a, b| a + b)
    }
}

#[derive(Serialize, Deserialize)]
struct LCFunctionDoc {
    p: u32,
    n: usize,
    structure_level: i64,
    resolution: i64,
    tail: String,
    cells: Vec<(String, String)>,
}

impl LCFunction {
    fn to_doc(&self) -> LCFunctionDoc {
        LCFunctionDoc {
            p: self.params().p(),
            n: self.params().n(),
            structure_level: self.grid.structure_level,
            resolution: self.grid.resolution,
            tail: format_rational(&self.tail),
            cells: (0..self.values.len())
                .map(|i| {
                    (
                        self.grid.cell(i).to_string(),
                        format_rational(&self.values[i]),
                    )
                })
                .collect(),
        }
    }

    fn from_doc(doc: LCFunctionDoc) -> Result<Self> {
        let params = FieldParams::new(doc.p, doc.n).map_err(|e| Error::Parse(e.to_string()))?;
        let grid = CellGrid::new(params, doc.structure_level, doc.resolution)
            .map_err(|e| Error::Parse(e.to_string()))?;
        let tail = parse_rational(&doc.tail)?;
        let mut values: Vec<Option<Rational>> = vec![None; grid.cell_count()];
        for (k, (addr, val)) in doc.cells.iter().enumerate() {
            let at = |m: String| Error::Parse(format!("cell {k} ('{addr}'): {m}"));
            let b: BallAddress = addr.parse().map_err(|e: Error| at(e.to_string()))?;
            if b.params() != params || b.level() != grid.resolution {
                return Err(at(format!(
                    "expected a level-{} cell of {}",
                    grid.resolution, params
                )));
            }
            let i = grid
                .index_of_ball(&b)
                .ok_or_else(|| at("outside the structure ball".into()))?;
            if values[i].is_some() {
                return Err(at("duplicate cell".into()));
            }
            values[i] = Some(parse_rational(val).map_err(|e| at(e.to_string()))?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("missing cell {}", grid.cell(i)))))
            .collect::<Result<Vec<_>>>()?;
        LCFunction::new(grid, values, tail)
    }

    /// Structured JSON text: field parameters, both levels, the tail and one
    /// `[address, "num/den"]` pair per cell in grid order.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LCFunctionDoc = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "function document, line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        Self::from_doc(doc)
    }
}

impl Serialize for LCFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LCFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::from_doc(LCFunctionDoc::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};
    use crate::ultrametric::ball_of_point;

    fn q2() -> FieldParams {
        FieldParams::new(2, 1).unwrap()
    }

    fn pt(x: Rational) -> PAdicPoint {
        PAdicPoint::from_rationals(q2(), &[x]).unwrap()
    }

    fn chi_z2() -> LCFunction {
        LCFunction::char_fn(&BallAddress::centered(q2(), 0))
    }

    #[test]
    fn grid_indices_round_trip() {
        let grid = CellGrid::new(FieldParams::new(3, 2).unwrap(), 1, -1).unwrap();
        assert_eq!(grid.cell_count(), 81);
        for i in 0..grid.cell_count() {
            let c = grid.cell(i);
            assert_eq!(grid.index_of_ball(&c), Some(i));
            assert_eq!(grid.index_of_point(&c.center()), Some(i));
            let up = grid.ancestor_index(i, 0);
            assert_eq!(grid.ball_at(0, up), c.ancestor(0));
        }
    }

    #[test]
    fn refine_indicator() {
        let f = chi_z2().refine(-1, 1).unwrap();
        assert_eq!(f.values().len(), 4);
        let mut sorted: Vec<_> = f.values().to_vec();
        sorted.sort();
        assert_eq!(sorted, vec![int(0), int(0), int(1), int(1)]);
        assert!(matches!(chi_z2().refine(1, 1), Err(Error::Parameter(_))));
        assert_eq!(f.refine(-2, 2).unwrap(), chi_z2().refine(-2, 2).unwrap());
    }

    #[test]
    fn combine_parts() {
        let b = chi_z2()
            .combine(&LCFunction::constant(q2(), int(1)), BinaryOp::Sub)
            .unwrap();
        let want = LCFunction::constant(q2(), int(1))
            .combine(&chi_z2(), BinaryOp::Sub)
            .unwrap();
        assert_eq!(b.neg_part(), want);
        let back = b.pos_part().combine(&b.neg_part(), BinaryOp::Sub).unwrap();
        assert_eq!(back, b);
        assert_eq!(chi_z2().neg().abs(), chi_z2());
    }

    #[test]
    fn integrals() {
        let b1 = BallAddress::centered(q2(), 1);
        assert_eq!(chi_z2().integrate(&b1), int(1));
        assert_eq!(chi_z2().integrate_global().unwrap(), int(1));
        let g = LCFunction::char_fn(&b1)
            .scale(&int(2))
            .combine(&chi_z2(), BinaryOp::Sub)
            .unwrap();
        assert_eq!(g.integrate_global().unwrap(), int(3));
        assert!(matches!(
            LCFunction::constant(q2(), int(1)).integrate_global(),
            Err(Error::Divergence(_))
        ));
        let c = LCFunction::constant(q2(), rat(3, 2)).refine(0, 1).unwrap();
        assert_eq!(
            c.integrate(&BallAddress::centered(q2(), 3)),
            rat(3, 2) * int(8)
        );
        assert_eq!(chi_z2().ball_mean(&b1), rat(1, 2));
        for g in 0..5 {
            assert_eq!(
                chi_z2().ball_mean(&BallAddress::centered(q2(), g)),
                crate::numeric::p_pow(2, -g)
            );
        }
    }

    #[test]
    fn indicator_properties() {
        let b = ball_of_point(&pt(rat(3, 4)), -1);
        let f = LCFunction::char_fn(&b);
        assert_eq!(f.integrate(&b), b.measure());
        assert_eq!(f.value_at(&pt(int(2))), &int(0));
        assert_eq!(f.value_at(&pt(rat(3, 4))), &int(1));
        assert_eq!(f.refine(-3, 2).unwrap().integrate(&b), b.measure());
    }

    #[test]
    fn mean_below_resolution_is_cell_value() {
        let f = LCFunction::from_cells(CellGrid::new(q2(), 1, -1).unwrap(), int(0), |c| {
            Rational::from_integer(c.coords()[0].digit(-1).into()) + rat(1, 3)
        });
        let x = pt(rat(5, 2));
        for g in -4..=-1 {
            assert_eq!(&f.ball_mean(&ball_of_point(&x, g)), f.value_at(&x));
        }
    }

    #[test]
    fn json_round_trip() {
        let f = LCFunction::from_cells(
            CellGrid::new(FieldParams::new(3, 1).unwrap(), 1, -1).unwrap(),
            rat(-1, 7),
            |c| Rational::from_integer(c.coords()[0].digit(0).into()) - rat(1, 2),
        );
        let s = f.to_json();
        let g = LCFunction::from_json(&s).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_json(), s);
        let broken = s.replacen("3^1:-1:", "3^1:-1:9", 1);
        assert!(matches!(
            LCFunction::from_json(&broken),
            Err(Error::Parse(_))
        ));
    }
}
