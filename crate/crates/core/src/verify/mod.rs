//! Seeded verification suites.
//!
//! Every check turns an identity or inequality into per-instance verdicts.
//! An inequality passes only when the upper endpoint of its left side is at
//! most the lower endpoint of its right side (exact values compare exactly);
//! overlapping intervals are retried once at doubled precision and otherwise
//! reported as inconclusive. Identities with irrational sides pass when the
//! two enclosures overlap and both are narrower than the coincidence
//! tolerance.

mod checks;
mod family;
mod theorems;

pub use family::{
    generate_family, generate_function, generate_instances, random_ball, FunctionSpec, Instance,
    SignConstraint,
};
pub use theorems::{
    characteristic_balls, kolmogorov_constant, theorem_quantity_maximal,
    theorem_quantity_nonlinear, ExponentChoice, TheoremQuantity,
};

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcfun::{CellGrid, LCFunction};
use crate::norms::ExponentFunction;
use crate::numeric::{format_rational, rat, Precision, Rational, RealBound, Tri};
use crate::operators::Alpha;
use crate::ultrametric::FieldParams;

/// The checks a suite can run, in canonical report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    PointwiseNonnegative,
    PointwiseSigned,
    Sandwich,
    FieldSpotCheck,
    RestrictionIdentity,
    RestrictionAverage,
    RestrictionBalance,
    CommutatorRestriction,
    BmoHomogeneity,
    BmoQRelation,
    TheoremMaximal,
    TheoremNonlinear,
    Kolmogorov,
    MorreyProbe,
    MorreyCharacteristic,
    JohnNirenberg,
    CharacteristicVariable,
    ConjugateProduct,
    FractionalCharacteristic,
    GeneralizedHolder,
}

impl CheckKind {
    pub const ALL: [CheckKind; 20] = [
        CheckKind::PointwiseNonnegative,
        CheckKind::PointwiseSigned,
        CheckKind::Sandwich,
        CheckKind::FieldSpotCheck,
        CheckKind::RestrictionIdentity,
        CheckKind::RestrictionAverage,
        CheckKind::RestrictionBalance,
        CheckKind::CommutatorRestriction,
        CheckKind::BmoHomogeneity,
        CheckKind::BmoQRelation,
        CheckKind::TheoremMaximal,
        CheckKind::TheoremNonlinear,
        CheckKind::Kolmogorov,
        CheckKind::MorreyProbe,
        CheckKind::MorreyCharacteristic,
        CheckKind::JohnNirenberg,
        CheckKind::CharacteristicVariable,
        CheckKind::ConjugateProduct,
        CheckKind::FractionalCharacteristic,
        CheckKind::GeneralizedHolder,
    ];
}

fn d_family_size() -> usize {
    50
}
fn d_structure_levels() -> [i64; 2] {
    [-1, 1]
}
fn d_depth() -> [i64; 2] {
    [1, 2]
}
fn d_levels() -> [i64; 2] {
    [-3, 3]
}
fn d_numerator() -> u32 {
    4
}
fn d_denominator() -> u32 {
    3
}
fn d_r() -> Rational {
    rat(3, 2)
}
fn d_coincidence() -> u32 {
    40
}
fn d_theorem_family() -> usize {
    10
}
fn d_fraction() -> Rational {
    rat(1, 2)
}

/// Parameters of a verification run, read from JSON.
///
/// Absent optional fields are filled in by [`ProbeConfig::resolve`] and the
/// resolved values are echoed in the report: `q` from `1/q = 1/r - α/n`,
/// `λ` as half of `n - αr`, `μ = λq/r`, the Morrey target exponent as `q`,
/// the exponent function `r(·)` as `r` on the unit ball and `(1 + r)/2`
/// elsewhere, and the precision from the environment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub p: u32,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "d_family_size")]
    pub family_size: usize,
    #[serde(default = "d_structure_levels")]
    pub structure_levels: [i64; 2],
    #[serde(default = "d_depth")]
    pub depth: [i64; 2],
    #[serde(default = "d_levels")]
    pub levels: [i64; 2],
    #[serde(default = "d_numerator")]
    pub numerator_bound: u32,
    #[serde(default = "d_denominator")]
    pub denominator_bound: u32,
    #[serde(default = "Rational::zero", with = "crate::numeric::rational_text")]
    pub alpha: Rational,
    #[serde(default = "d_r", with = "crate::numeric::rational_text")]
    pub r: Rational,
    #[serde(default, with = "crate::numeric::rational_text::option")]
    pub q: Option<Rational>,
    #[serde(default, with = "crate::numeric::rational_text::option")]
    pub lambda: Option<Rational>,
    #[serde(default, with = "crate::numeric::rational_text::option")]
    pub mu: Option<Rational>,
    #[serde(default, with = "crate::numeric::rational_text::option")]
    pub morrey_q: Option<Rational>,
    #[serde(default)]
    pub r_exponent: Option<LCFunction>,
    #[serde(default)]
    pub checks: Option<Vec<CheckKind>>,
    #[serde(default)]
    pub precision: Option<Precision>,
    /// Identities with irrational sides pass when both enclosures are
    /// narrower than `2^-coincidence_bits` relative.
    #[serde(default = "d_coincidence")]
    pub coincidence_bits: u32,
    /// Instances used by the ball-sweeping theorem quantities and the
    /// variable-exponent probes.
    #[serde(default = "d_theorem_family")]
    pub theorem_family: usize,
    /// Multiplier of the fitted rate used for the exponential oscillation mean.
    #[serde(default = "d_fraction", with = "crate::numeric::rational_text")]
    pub exponential_fraction: Rational,
    #[serde(default)]
    pub self_test: bool,
}

impl ProbeConfig {
    /// The default suite at `(p, n)`: `α = 1/2`, `r = 3/2`.
    pub fn default_for(p: u32, n: usize) -> Self {
        let mut cfg: ProbeConfig =
            serde_json::from_value(serde_json::json!({ "p": p, "n": n, "alpha": "1/2" }))
                .expect("default config");
        cfg.seed = 20240607;
        cfg
    }

    /// Parses and resolves a JSON configuration.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ProbeConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {} column {}: {e}", e.line(), e.column())))?;
        cfg.resolve()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn params(&self) -> Result<FieldParams> {
        FieldParams::new(self.p, self.n).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn alpha_value(&self) -> Result<Alpha> {
        Alpha::new(self.alpha.clone(), self.n).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn function_spec(&self) -> FunctionSpec {
        FunctionSpec {
            structure_levels: self.structure_levels,
            depth: self.depth,
            levels: self.levels,
            numerator_bound: self.numerator_bound,
            denominator_bound: self.denominator_bound,
            sign: SignConstraint::Any,
            compact: false,
        }
    }

    /// The resolved `q`.
    pub fn q_value(&self) -> Rational {
        self.q.clone().expect("resolved configuration")
    }

    /// Fills derived fields and enforces the parameter relations.
    pub fn resolve(mut self) -> Result<Self> {
        let params = self.params()?;
        let alpha = self.alpha_value()?;
        let n = Rational::from_integer(self.n.into());
        let one = Rational::one();
        self.function_spec().validate(params)?;
        if self.r <= one {
            return Err(Error::Config(format!("r = {} must exceed 1", self.r)));
        }
        let a = alpha.value().clone();
        if !a.is_zero() && &self.r * &a >= n {
            return Err(Error::Config(format!(
                "r = {} must stay below n/α = {}",
                self.r,
                &n / &a
            )));
        }
        let q = (self.r.recip() - &a / &n).recip();
        match &self.q {
            Some(given) if given != &q => {
                return Err(Error::Config(format!(
                    "q = {given} violates 1/q = 1/r - α/n, which gives q = {q}"
                )));
            }
            _ => self.q = Some(q.clone()),
        }
        let room = &n - &a * &self.r;
        let lambda = self
            .lambda
            .clone()
            .unwrap_or_else(|| &room / Rational::from_integer(2.into()));
        if !lambda.is_positive() || lambda >= room {
            return Err(Error::Config(format!(
                "λ = {lambda} must satisfy 0 < λ < n - αr = {room}"
            )));
        }
        let morrey_q = self.morrey_q.clone().unwrap_or_else(|| q.clone());
        let shifted = (self.r.recip() - &a / (&n - &lambda)).recip();
        let mu = match &self.mu {
            Some(mu) => mu.clone(),
            None if morrey_q == q => &lambda * &q / &self.r,
            None => lambda.clone(),
        };
        let same_space = morrey_q == shifted && mu == lambda;
        let scaled_space = morrey_q == q && &mu * &self.r == &lambda * &q;
        if !same_space && !scaled_space {
            return Err(Error::Config(format!(
                "Morrey exponents (q = {morrey_q}, μ = {mu}) need either 1/q = 1/r - α/(n-λ) = 1/{shifted} with μ = λ, \
                 or q = {q} with λ/r = μ/q"
            )));
        }
        if mu >= n {
            return Err(Error::Config(format!("μ = {mu} must stay below n = {n}")));
        }
        self.lambda = Some(lambda);
        self.mu = Some(mu);
        self.morrey_q = Some(morrey_q);
        let r_fn = match self.r_exponent.take() {
            Some(f) => f,
            None => {
                let grid = CellGrid::new(params, 0, 0)?;
                LCFunction::new(
                    grid,
                    vec![self.r.clone()],
                    (&self.r + &one) / Rational::from_integer(2.into()),
                )?
            }
        };
        if r_fn.params() != params {
            return Err(Error::Config(format!(
                "r(·) lives on {} but the suite runs on {params}",
                r_fn.params()
            )));
        }
        let r_exp =
            ExponentFunction::new(r_fn.clone()).map_err(|e| Error::Config(e.to_string()))?;
        if !a.is_zero() && r_exp.q_plus() * &a >= n {
            return Err(Error::Config(format!(
                "r(·)_+ = {} must stay below n/α",
                r_exp.q_plus()
            )));
        }
        self.r_exponent = Some(r_fn);
        if self.precision.is_none() {
            self.precision = Some(Precision::from_env());
        }
        if self.coincidence_bits == 0 {
            return Err(Error::Config("coincidence_bits must be positive".into()));
        }
        if !self.exponential_fraction.is_positive() {
            return Err(Error::Config(
                "exponential_fraction must be positive".into(),
            ));
        }
        Ok(self)
    }

    /// `r(·)` and `q(·)` with `1/q(·) = 1/r(·) - α/n`.
    pub fn exponent_pair(&self) -> Result<(ExponentFunction, ExponentFunction)> {
        let r_fn = self
            .r_exponent
            .clone()
            .ok_or_else(|| Error::Config("configuration is not resolved".into()))?;
        let shift = &self.alpha / Rational::from_integer(self.n.into());
        let q_fn = r_fn.map(|r| (r.recip() - &shift).recip());
        Ok((ExponentFunction::new(r_fn)?, ExponentFunction::new(q_fn)?))
    }

    fn selected(&self) -> Vec<CheckKind> {
        let mut kinds = self
            .checks
            .clone()
            .unwrap_or_else(|| CheckKind::ALL.to_vec());
        kinds.sort();
        kinds.dedup();
        kinds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

/// Inputs and both sides of the comparison that decided a record.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub instance: String,
    pub at: String,
    pub lhs: RealBound,
    pub rhs: RealBound,
}

/// One check aggregated over its instances.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub instances: usize,
    pub failures: usize,
    pub inconclusive: usize,
    pub skipped: usize,
    pub witness: Option<Witness>,
    /// Empirical constant, or the computed quantity for checks that report one.
    pub constant: Option<RealBound>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub total: usize,
}

/// The outcome of [`run_suite`].
///
/// `wall_time` is kept out of the serialized document so that reports for
/// the same configuration are byte-identical.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub config: ProbeConfig,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// One row per record: check, verdict, both sides of the witness and the
    /// upper endpoint of the constant.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "check", "verdict", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "constant",
        ])
        .expect("in memory");
        for r in &self.records {
            let verdict = serde_json::to_value(r.verdict).expect("serializable");
            let (a, b, c, d) = match &r.witness {
                Some(w) => (
                    format_rational(w.lhs.lo()),
                    format_rational(w.lhs.hi()),
                    format_rational(w.rhs.lo()),
                    format_rational(w.rhs.hi()),
                ),
                None => Default::default(),
            };
            let constant = r
                .constant
                .as_ref()
                .map(|c| format_rational(c.hi()))
                .unwrap_or_default();
            w.write_record([
                r.name.as_str(),
                verdict.as_str().unwrap_or(""),
                &a,
                &b,
                &c,
                &d,
                &constant,
            ])
            .expect("in memory");
        }
        String::from_utf8(w.into_inner().expect("in memory")).expect("utf-8")
    }
}

/// How the two sides of a sample are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    /// `lhs <= rhs`.
    Le,
    /// `lhs = rhs`.
    Eq,
    /// `lhs / rhs` must be finite; the ratio feeds the record's constant.
    Ratio,
}

pub(crate) struct Sample {
    pub at: String,
    pub lhs: RealBound,
    pub rhs: RealBound,
    pub relation: Relation,
}

impl Sample {
    pub fn le(at: impl Into<String>, lhs: RealBound, rhs: RealBound) -> Self {
        Sample {
            at: at.into(),
            lhs,
            rhs,
            relation: Relation::Le,
        }
    }

    pub fn eq(at: impl Into<String>, lhs: RealBound, rhs: RealBound) -> Self {
        Sample {
            at: at.into(),
            lhs,
            rhs,
            relation: Relation::Eq,
        }
    }

    pub fn ratio(at: impl Into<String>, lhs: RealBound, rhs: RealBound) -> Self {
        Sample {
            at: at.into(),
            lhs,
            rhs,
            relation: Relation::Ratio,
        }
    }

    fn witness(&self, instance: &str) -> Witness {
        Witness {
            instance: instance.to_string(),
            at: self.at.clone(),
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }

    /// Certified enclosure of `lhs / rhs` when the denominator is positive.
    fn ratio_bound(&self) -> Option<RealBound> {
        if self.lhs.is_zero() {
            return Some(RealBound::zero());
        }
        if !self.rhs.lo().is_positive() {
            return None;
        }
        Some(self.lhs.div(&self.rhs))
    }

    /// How close the sample came to failing, for picking representative witnesses.
    fn slack(&self) -> f64 {
        match self.relation {
            Relation::Le => self.rhs.mid_f64() - self.lhs.mid_f64(),
            Relation::Eq => 0.0,
            Relation::Ratio => -self
                .ratio_bound()
                .map(|r| r.mid_f64())
                .unwrap_or(f64::INFINITY),
        }
    }
}

fn coincident(a: &RealBound, b: &RealBound, bits: u32) -> bool {
    let tol = Rational::new(BigInt::one(), BigInt::one() << bits);
    let narrow = |x: &RealBound| {
        let scale = x.lo().abs().max(x.hi().abs()).max(Rational::one());
        x.width() <= &tol * scale
    };
    a.overlaps(b) && narrow(a) && narrow(b)
}

fn judge(s: &Sample, bits: u32) -> Verdict {
    match s.relation {
        Relation::Le => match s.lhs.le(&s.rhs) {
            Tri::True => Verdict::Pass,
            Tri::False => Verdict::Fail,
            Tri::Unknown => Verdict::Inconclusive,
        },
        Relation::Eq => match s.lhs.equals(&s.rhs) {
            Tri::True => Verdict::Pass,
            Tri::False => Verdict::Fail,
            Tri::Unknown if coincident(&s.lhs, &s.rhs, bits) => Verdict::Pass,
            Tri::Unknown => Verdict::Inconclusive,
        },
        Relation::Ratio => {
            if s.ratio_bound().is_some() {
                Verdict::Pass
            } else if s.rhs.is_zero() && s.lhs.lo().is_positive() {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

enum Outcome {
    Skipped(String),
    Judged {
        verdict: Verdict,
        witness: Witness,
        slack: f64,
        constant: Option<RealBound>,
    },
}

fn judge_all(label: &str, samples: &[Sample], bits: u32) -> Outcome {
    let verdicts: Vec<Verdict> = samples.iter().map(|s| judge(s, bits)).collect();
    let verdict = verdicts.iter().copied().max().expect("nonempty");
    let pick = if verdict == Verdict::Pass {
        (0..samples.len())
            .min_by(|&i, &j| samples[i].slack().total_cmp(&samples[j].slack()))
            .expect("nonempty")
    } else {
        verdicts
            .iter()
            .position(|v| *v == verdict)
            .expect("present")
    };
    let mut constant: Option<RealBound> = None;
    for s in samples.iter().filter(|s| s.relation == Relation::Ratio) {
        if let Some(r) = s.ratio_bound() {
            constant = Some(match constant {
                None => r,
                Some(c) => c.max(&r),
            });
        }
    }
    Outcome::Judged {
        verdict,
        witness: samples[pick].witness(label),
        slack: samples[pick].slack(),
        constant,
    }
}

fn evaluate(
    label: &str,
    eval: &(dyn Fn(Precision) -> Result<Vec<Sample>> + Sync),
    prec: Precision,
    bits: u32,
) -> Outcome {
    let first = match eval(prec) {
        Ok(s) if s.is_empty() => return Outcome::Skipped(format!("{label}: nothing to compare")),
        Ok(s) => judge_all(label, &s, bits),
        Err(e) => return Outcome::Skipped(format!("{label}: {e}")),
    };
    match first {
        Outcome::Judged {
            verdict: Verdict::Inconclusive,
            ..
        } => match eval(prec.doubled()) {
            Ok(s) if !s.is_empty() => judge_all(label, &s, bits),
            _ => first,
        },
        other => other,
    }
}

/// Shared state of one suite run.
pub(crate) struct Ctx {
    pub cfg: ProbeConfig,
    pub params: FieldParams,
    pub alpha: Alpha,
    pub prec: Precision,
    pub instances: Vec<Instance>,
}

impl Ctx {
    /// Runs `eval` on every item in parallel and folds the outcomes in order.
    pub fn check<T: Sync>(
        &self,
        name: &str,
        anchor: &str,
        items: &[T],
        label: impl Fn(usize, &T) -> String + Sync,
        eval: impl Fn(&T, Precision) -> Result<Vec<Sample>> + Sync,
    ) -> CheckRecord {
        let bits = self.cfg.coincidence_bits;
        let outcomes: Vec<Outcome> = items
            .par_iter()
            .enumerate()
            .map(|(i, item)| {
                let l = label(i, item);
                evaluate(&l, &|prec| eval(item, prec), self.prec, bits)
            })
            .collect();
        fold_outcomes(name, anchor, outcomes)
    }
}

fn fold_outcomes(name: &str, anchor: &str, outcomes: Vec<Outcome>) -> CheckRecord {
    let mut rec = CheckRecord {
        name: name.to_string(),
        anchor: anchor.to_string(),
        verdict: Verdict::Pass,
        instances: 0,
        failures: 0,
        inconclusive: 0,
        skipped: 0,
        witness: None,
        constant: None,
        note: None,
    };
    let mut best: Option<(Verdict, f64)> = None;
    for o in outcomes {
        match o {
            Outcome::Skipped(reason) => {
                rec.skipped += 1;
                if rec.note.is_none() {
                    rec.note = Some(format!("skipped {reason}"));
                }
            }
            Outcome::Judged {
                verdict,
                witness,
                slack,
                constant,
            } => {
                rec.instances += 1;
                match verdict {
                    Verdict::Fail => rec.failures += 1,
                    Verdict::Inconclusive => rec.inconclusive += 1,
                    Verdict::Pass => {}
                }
                let better = match best {
                    None => true,
                    Some((v, s)) => {
                        verdict > v || (verdict == v && verdict == Verdict::Pass && slack < s)
                    }
                };
                if better {
                    best = Some((verdict, slack));
                    rec.witness = Some(witness);
                }
                if let Some(c) = constant {
                    rec.constant = Some(match rec.constant.take() {
                        None => c,
                        Some(old) => old.max(&c),
                    });
                }
            }
        }
    }
    rec.verdict = if rec.failures > 0 {
        Verdict::Fail
    } else if rec.inconclusive > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    rec
}

/// Runs every selected check on the seeded family.
///
/// With an empty family no check runs. In self-test mode a deliberately
/// corrupted inequality is appended, and it must fail.
pub fn run_suite(cfg: &ProbeConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let cfg = cfg.clone().resolve()?;
    let params = cfg.params()?;
    let alpha = cfg.alpha_value()?;
    let instances = generate_instances(params, &cfg.function_spec(), cfg.family_size, cfg.seed)?;
    let prec = cfg.precision.expect("resolved");
    let ctx = Ctx {
        cfg: cfg.clone(),
        params,
        alpha,
        prec,
        instances,
    };
    let mut records = Vec::new();
    if !ctx.instances.is_empty() {
        for kind in cfg.selected() {
            records.extend(checks::run(&ctx, kind)?);
        }
        if cfg.self_test {
            records.push(checks::planted_violation(&ctx));
        }
    }
    let mut summary = Summary {
        total: records.len(),
        ..Summary::default()
    };
    for r in &records {
        match r.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::Inconclusive => summary.inconclusive += 1,
        }
    }
    Ok(VerificationReport {
        config: cfg,
        records,
        summary,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn defaults_resolve_with_derived_exponents() {
        let cfg = ProbeConfig::default_for(2, 1).resolve().unwrap();
        assert_eq!(cfg.q, Some(int(6)));
        assert_eq!(cfg.lambda, Some(rat(1, 8)));
        assert_eq!(cfg.mu, Some(rat(1, 2)));
        let back = ProbeConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back.to_json(), cfg.to_json());
    }

    #[test]
    fn relation_violations_are_configuration_errors() {
        let bad = r#"{"p": 2, "n": 1, "alpha": "1/2", "r": "2"}"#;
        assert!(matches!(ProbeConfig::from_json(bad), Err(Error::Config(_))));
        let bad = r#"{"p": 2, "n": 1, "alpha": "1/2", "r": "3/2", "q": "3"}"#;
        assert!(matches!(ProbeConfig::from_json(bad), Err(Error::Config(_))));
        let bad = r#"{"p": 2, "n": 1, "alpha": "1/2", "lambda": "1/2"}"#;
        assert!(matches!(ProbeConfig::from_json(bad), Err(Error::Config(_))));
        let bad = r#"{"p": 2, "n": 1, "bogus": 1}"#;
        assert!(matches!(ProbeConfig::from_json(bad), Err(Error::Config(_))));
        let shifted = r#"{"p": 2, "n": 1, "alpha": "1/2", "lambda": "1/8", "morrey_q": "21/2"}"#;
        let cfg = ProbeConfig::from_json(shifted).unwrap();
        assert_eq!(cfg.mu, Some(rat(1, 8)));
    }

    #[test]
    fn verdicts_are_interval_sound() {
        let one = RealBound::one();
        let wide = RealBound::interval(rat(1, 2), rat(3, 2));
        assert_eq!(
            judge(&Sample::le("x", one.clone(), one.clone()), 40),
            Verdict::Pass
        );
        assert_eq!(
            judge(&Sample::le("x", wide.clone(), one.clone()), 40),
            Verdict::Inconclusive
        );
        assert_eq!(
            judge(&Sample::le("x", RealBound::exact(int(2)), one.clone()), 40),
            Verdict::Fail
        );
        assert_eq!(
            judge(&Sample::eq("x", wide.clone(), one.clone()), 40),
            Verdict::Inconclusive
        );
        assert_eq!(
            judge(&Sample::ratio("x", one.clone(), RealBound::zero()), 40),
            Verdict::Fail
        );
        assert_eq!(
            judge(
                &Sample::ratio("x", RealBound::zero(), RealBound::zero()),
                40
            ),
            Verdict::Pass
        );
    }

    #[test]
    fn empty_family_gives_empty_passing_report() {
        let mut cfg = ProbeConfig::default_for(2, 1);
        cfg.family_size = 0;
        let rep = run_suite(&cfg).unwrap();
        assert!(rep.records.is_empty() && rep.passed());
    }
}
