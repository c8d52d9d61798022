//! Command-line front end behind the `padic-harmonic` binary.
//!
//! Exit statuses: `0` success, `1` a verification record failed, `2` bad
//! input (parse, parameter, configuration, missing file), `3` a quantity
//! that diverges for the given input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lcfun::LCFunction;
use crate::norms::{
    bmo_norm, bmo_q_norm, lq_norm_lc, luxemburg_variable_norm_lc, morrey_norm_lc, orlicz_average,
    weak_lq_norm, ExponentFunction, MorreyParams, NormValue, YoungKind,
};
use crate::numeric::{parse_rational, Precision, Rational, RealBound};
use crate::operators::{
    frac_maximal_at, llogl_maximal, maximal_commutator, nonlinear_commutator, power_maximal,
    restricted_frac_maximal, Alpha,
};
use crate::ultrametric::{BallAddress, FieldParams, PAdicPoint};
use crate::verify::{generate_family, run_suite, FunctionSpec, ProbeConfig, SignConstraint};

#[derive(Debug, Parser)]
#[command(
    name = "padic-harmonic",
    version,
    about = "p-adic maximal operators, commutators and norms"
)]
pub struct Cli {
    /// Precision as POWER[:BISECT] bits; defaults to $PADIC_PRECISION_BITS or 60:40.
    #[arg(long, global = true)]
    pub precision: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an operator at a point.
    Eval(EvalArgs),
    /// Compute a norm of a function.
    Norm(NormArgs),
    /// Write a seeded family of random functions.
    Gen(GenArgs),
    /// Run the verification suite and write its report.
    Verify(VerifyArgs),
    /// Summarize a saved verification report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    #[value(name = "M")]
    M,
    #[value(name = "M_alpha")]
    MAlpha,
    #[value(name = "M_restricted")]
    MRestricted,
    #[value(name = "M_commutator")]
    MCommutator,
    #[value(name = "commutator")]
    Commutator,
    #[value(name = "M_eps")]
    MEps,
    #[value(name = "M_llogl")]
    MLlogl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    Lq,
    Weak,
    Morrey,
    Bmo,
    Bmoq,
    Orlicz,
    Luxvar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ValueFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Young {
    Llogl,
    Expl,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub op: Operator,
    /// Function file (`f`); for the commutators the function the commutator acts on.
    #[arg(long = "fn", value_name = "FILE")]
    pub function: PathBuf,
    /// Point such as `2^1:1/4` or `3^2:1@-1|`.
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value = "0")]
    pub alpha: String,
    /// Symbol file `b` for `M_commutator` and `commutator`.
    #[arg(long, value_name = "FILE")]
    pub symbol: Option<PathBuf>,
    /// Restricting ball for `M_restricted`, e.g. `2^1:0:`.
    #[arg(long)]
    pub ball: Option<String>,
    /// Exponent for `M_eps`.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: ValueFormat,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    pub kind: NormKind,
    #[arg(long = "fn", value_name = "FILE")]
    pub function: PathBuf,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    /// Exponent function file for `luxvar`; a constant `--q` is used otherwise.
    #[arg(long, value_name = "FILE")]
    pub qfun: Option<PathBuf>,
    /// Ball for `weak` and `orlicz`; defaults to the structure ball.
    #[arg(long)]
    pub ball: Option<String>,
    #[arg(long, value_enum, default_value = "llogl")]
    pub young: Young,
    #[arg(long, value_enum, default_value_t)]
    pub format: ValueFormat,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated `key=value` list: `sign=any|nonnegative`,
    /// `compact=true|false`, `structure=LO..HI`, `depth=LO..HI`,
    /// `levels=LO..HI`, `gamma=G`, `resolution=R`, `num=N`, `den=D`.
    #[arg(long, default_value = "")]
    pub constraints: String,
    /// Output directory, created when missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON configuration; without it the default suite at `--p`, `--n` runs.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: ReportFormat,
    /// Append the planted violation, which must fail.
    #[arg(long)]
    pub self_test: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A JSON report written by `verify`.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
}

/// Status for an error: `3` for divergence, `2` for everything else.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Divergence(_) => 3,
        _ => 2,
    }
}

/// Runs one command, printing results to `out`; returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    let prec = match &cli.precision {
        Some(s) => Precision::parse(s)?,
        None => Precision::from_env(),
    };
    match cli.command {
        Command::Eval(a) => cmd_eval(&a, prec, out),
        Command::Norm(a) => cmd_norm(&a, prec, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Verify(a) => cmd_verify(&a, cli.precision.is_some().then_some(prec), out),
        Command::Report(a) => cmd_report(&a, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn load_function(path: &Path) -> Result<LCFunction> {
    LCFunction::from_json(&read(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn rational_arg(name: &str, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| Error::Parse(format!("--{name}: {e}")))
}

fn required<'a>(name: &str, v: &'a Option<String>) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::Parameter(format!("--{name} is required here")))
}

fn ball_arg(s: &str, params: FieldParams) -> Result<BallAddress> {
    let b: BallAddress = s.parse()?;
    if b.params() != params {
        return Err(Error::Parameter(format!("ball {b} is not in {params}")));
    }
    Ok(b)
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// `num/den` with integers written bare, as in `1/4` or `0`.
fn plain_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        r.to_string()
    }
}

fn print_value(
    out: &mut dyn Write,
    format: ValueFormat,
    value: &RealBound,
    witness: Option<&BallAddress>,
) -> Result<()> {
    match format {
        ValueFormat::Text => {
            writeln!(
                out,
                "{} {}",
                plain_rational(value.lo()),
                plain_rational(value.hi())
            )?;
            if let Some(w) = witness {
                writeln!(out, "witness {w}")?;
            }
        }
        ValueFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                value: &'a RealBound,
                witness: Option<&'a BallAddress>,
            }
            writeln!(
                out,
                "{}",
                serde_json::to_string(&Doc { value, witness }).expect("serializable")
            )?;
        }
    }
    Ok(())
}

pub fn cmd_eval(a: &EvalArgs, prec: Precision, out: &mut dyn Write) -> Result<u8> {
    let f = load_function(&a.function)?;
    let params = f.params();
    let x: PAdicPoint = a.point.parse()?;
    if x.params() != params {
        return Err(Error::Parameter(format!("point {x} is not in {params}")));
    }
    let alpha = match a.op {
        Operator::M => Alpha::zero(params.n()),
        _ => Alpha::new(rational_arg("alpha", &a.alpha)?, params.n())?,
    };
    let symbol = || -> Result<LCFunction> {
        let path = a
            .symbol
            .as_ref()
            .ok_or_else(|| Error::Parameter("--symbol is required for commutators".into()))?;
        let b = load_function(path)?;
        if b.params() != params {
            return Err(Error::Parameter(format!(
                "symbol lives in {}, function in {params}",
                b.params()
            )));
        }
        Ok(b)
    };
    let value = match a.op {
        Operator::M | Operator::MAlpha => frac_maximal_at(&f, &alpha, &x, prec)?,
        Operator::MRestricted => {
            let ball = ball_arg(required("ball", &a.ball)?, params)?;
            restricted_frac_maximal(&f, &alpha, &ball, &x, prec)?
        }
        Operator::MCommutator => maximal_commutator(&symbol()?, &f, &alpha, &x, prec)?,
        Operator::Commutator => nonlinear_commutator(&symbol()?, &f, &alpha, &x, prec)?,
        Operator::MEps => power_maximal(
            &f,
            &rational_arg("eps", required("eps", &a.eps)?)?,
            &x,
            prec,
        )?,
        Operator::MLlogl => llogl_maximal(&f, &alpha, &x, prec)?,
    };
    print_value(out, a.format, &value, None)?;
    Ok(0)
}

pub fn cmd_norm(a: &NormArgs, prec: Precision, out: &mut dyn Write) -> Result<u8> {
    let f = load_function(&a.function)?;
    let params = f.params();
    let q = || rational_arg("q", required("q", &a.q)?);
    let ball = || match &a.ball {
        Some(s) => ball_arg(s, params),
        None => Ok(f.grid().structure_ball()),
    };
    let plain = |value| NormValue {
        value,
        witness: None,
    };
    let v = match a.kind {
        NormKind::Lq => plain(lq_norm_lc(&f, &q()?, prec)?),
        NormKind::Weak => plain(weak_lq_norm(&f, &q()?, &ball()?, prec)?),
        NormKind::Morrey => {
            let lambda = rational_arg("lambda", required("lambda", &a.lambda)?)?;
            morrey_norm_lc(&f, &MorreyParams::new(q()?, lambda, params.n())?, prec)?
        }
        NormKind::Bmo => bmo_norm(&f)?,
        NormKind::Bmoq => bmo_q_norm(&f, &q()?, prec)?,
        NormKind::Orlicz => {
            let kind = match a.young {
                Young::Llogl => YoungKind::LlogL,
                Young::Expl => YoungKind::ExpL,
            };
            let b = ball()?;
            NormValue {
                value: orlicz_average(&f, &b, kind, prec)?,
                witness: Some(b),
            }
        }
        NormKind::Luxvar => {
            let qfun = match &a.qfun {
                Some(path) => ExponentFunction::new(load_function(path)?)?,
                None => ExponentFunction::constant(params, q()?)?,
            };
            if qfun.params() != params {
                return Err(Error::Parameter(format!(
                    "exponent lives in {}, function in {params}",
                    qfun.params()
                )));
            }
            plain(luxemburg_variable_norm_lc(&f, &qfun, prec)?)
        }
    };
    print_value(out, a.format, &v.value, v.witness.as_ref())?;
    Ok(0)
}

fn parse_range(key: &str, v: &str) -> Result<[i64; 2]> {
    let bad = || {
        Error::Parameter(format!(
            "constraint {key}={v}: expected LO..HI or a single integer"
        ))
    };
    let (lo, hi) = v.split_once("..").unwrap_or((v, v));
    Ok([
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ])
}

/// Applies a `key=value,…` constraint list on top of the suite's default ranges.
pub fn parse_constraints(s: &str) -> Result<FunctionSpec> {
    let mut spec = ProbeConfig::default_for(2, 1).function_spec();
    let (mut gamma, mut resolution) = (None, None);
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (key, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("constraint '{item}': expected key=value")))?;
        let bad = || Error::Parameter(format!("constraint '{item}' has an invalid value"));
        match key.trim() {
            "sign" => {
                spec.sign = match v {
                    "any" => SignConstraint::Any,
                    "nonnegative" => SignConstraint::Nonnegative,
                    _ => return Err(bad()),
                }
            }
            "compact" => spec.compact = v.parse().map_err(|_| bad())?,
            "structure" => spec.structure_levels = parse_range(key, v)?,
            "depth" => spec.depth = parse_range(key, v)?,
            "levels" => spec.levels = parse_range(key, v)?,
            "gamma" => gamma = Some(v.parse::<i64>().map_err(|_| bad())?),
            "resolution" => resolution = Some(v.parse::<i64>().map_err(|_| bad())?),
            "num" => spec.numerator_bound = v.parse().map_err(|_| bad())?,
            "den" => spec.denominator_bound = v.parse().map_err(|_| bad())?,
            other => return Err(Error::Parameter(format!("unknown constraint '{other}'"))),
        }
    }
    if let Some(g) = gamma {
        spec.structure_levels = [g, g];
    }
    if let Some(r) = resolution {
        let g = gamma.ok_or_else(|| Error::Parameter("resolution=R needs gamma=G".into()))?;
        spec.depth = [g - r, g - r];
    }
    Ok(spec)
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<u8> {
    let params = FieldParams::new(a.p, a.n)?;
    let spec = parse_constraints(&a.constraints)?;
    spec.validate(params)?;
    let family = generate_family(params, &spec, a.count, a.seed)?;
    fs::create_dir_all(&a.out)?;
    let width = a.count.saturating_sub(1).to_string().len().max(3);
    for (i, f) in family.iter().enumerate() {
        let path = a.out.join(format!("fn_{i:0width$}.json"));
        write_atomic(&path, f.to_json().as_bytes())?;
        writeln!(out, "{}", path.display())?;
    }
    writeln!(out, "wrote {} functions with seed {}", family.len(), a.seed)?;
    Ok(0)
}

pub fn cmd_verify(a: &VerifyArgs, precision: Option<Precision>, out: &mut dyn Write) -> Result<u8> {
    let mut cfg = match &a.config {
        Some(path) => ProbeConfig::from_json(&read(path)?)?,
        None => ProbeConfig::default_for(a.p, a.n),
    };
    if precision.is_some() {
        cfg.precision = precision;
    }
    cfg.self_test |= a.self_test;
    let report = run_suite(&cfg)?;
    let body = match a.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Text => render_text(&serde_json::to_value(&report).expect("serializable")),
    };
    write_atomic(&a.out, body.as_bytes())?;
    for r in report
        .records
        .iter()
        .filter(|r| r.verdict != crate::verify::Verdict::Pass)
    {
        let verdict = serde_json::to_value(r.verdict).expect("serializable");
        writeln!(out, "{} {}", r.name, verdict.as_str().unwrap_or(""))?;
        if let Some(w) = &r.witness {
            writeln!(
                out,
                "  witness {} at {}: lhs [{}] rhs [{}]",
                w.instance, w.at, w.lhs, w.rhs
            )?;
        }
    }
    let s = &report.summary;
    writeln!(
        out,
        "{} pass, {} fail, {} inconclusive of {}",
        s.pass, s.fail, s.inconclusive, s.total
    )?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn render_text(doc: &serde_json::Value) -> String {
    let mut s = String::new();
    let empty = Vec::new();
    for r in doc["records"].as_array().unwrap_or(&empty) {
        let text = |k: &str| r[k].as_str().unwrap_or("").to_string();
        let constant = match &r["constant"] {
            serde_json::Value::Null => String::new(),
            c => format!(" constant<={}", c["hi"].as_str().unwrap_or("")),
        };
        s += &format!(
            "{:<40} {:<12} instances={} failures={} inconclusive={} skipped={}{constant}\n",
            text("name"),
            text("verdict"),
            r["instances"],
            r["failures"],
            r["inconclusive"],
            r["skipped"],
        );
        if let Some(note) = r["note"].as_str() {
            s += &format!("    note: {note}\n");
        }
    }
    let sum = &doc["summary"];
    s += &format!(
        "{} pass, {} fail, {} inconclusive of {}\n",
        sum["pass"], sum["fail"], sum["inconclusive"], sum["total"]
    );
    s
}

pub fn cmd_report(a: &ReportArgs, out: &mut dyn Write) -> Result<u8> {
    let text = read(&a.input)?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!(
            "{}: line {} column {}: {e}",
            a.input.display(),
            e.line(),
            e.column()
        ))
    })?;
    if !doc["records"].is_array() || !doc["summary"].is_object() {
        return Err(Error::Parse(format!(
            "{}: not a verification report",
            a.input.display()
        )));
    }
    write!(out, "{}", render_text(&doc))?;
    let fail = doc["summary"]["fail"].as_u64().unwrap_or(0);
    Ok(if fail == 0 { 0 } else { 1 })
}
