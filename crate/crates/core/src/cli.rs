//! Command-line front end. Every sub-command builds one JSON report; the
//! text format is a flattened rendering of the same report.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::motclass::rational_string;
use crate::algebra::{BivarPoly, Field, FieldElem};
use crate::curve::{parse_curve, primes_in, reduce_mod_p, CurveGerm, GlobalCurve};
use crate::error::{Error, Result};
use crate::oracle::brute_force_fibers;
use crate::resolution::{good_reduction_scan, resolve_germ};
use crate::semigroup::{reduction_semigroup_scan, semigroup_of, LocalRing};
use crate::zeta_global::{unit_index, verify_global_factorization};
use crate::zeta_local::{ideal_class, local_zeta, poincare_series, series_json};

pub const DEFAULT_BUDGET: u128 = 10_000_000;
const DEFAULT_GLOBAL_BOUND: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "germzeta", version, about = "Invariants and zeta functions of plane curve singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Resolution, branches and value semigroup of a germ.
    Analyze(GermArgs),
    /// Compare resolution and semigroup across reductions modulo primes.
    ReduceScan(ScanArgs),
    /// Local zeta function and generalized Poincaré series.
    Zeta(ZetaArgs),
    /// Brute-force counts of fibers and principal ideals over F_p.
    Oracle(OracleArgs),
    /// Check the global zeta factorization of a projective curve over F_p.
    GlobalVerify(GlobalArgs),
    /// Unit index of a germ over F_p, by formula and by enumeration.
    UnitIndex(GermArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Ground field: `Q` or a prime.
    #[arg(long, default_value = "Q")]
    pub field: String,
    /// Enumeration budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct GermArgs {
    /// Affine equation, for example `y^2 - x^3`.
    pub curve: String,
    /// Point `a,b` at which to take the germ; the origin by default.
    #[arg(long)]
    pub point: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    pub curve: String,
    /// Prime range `A..B`, both ends included.
    #[arg(long, default_value = "2..31")]
    pub primes: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub germ: GermArgs,
    /// Largest total degree; `|γ| + 4` by default.
    #[arg(long)]
    pub bound: Option<usize>,
    /// Comma-separated values of q for the counting specialization.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub germ: GermArgs,
    #[arg(long)]
    pub bound: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    pub curve: String,
    /// Series bound, `6` by default.
    #[arg(long)]
    pub bound: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Exit code and the text for standard output and standard error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv`, program name first.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let format = match &cli.command {
        Command::Analyze(a) | Command::UnitIndex(a) => a.common.format,
        Command::ReduceScan(a) => a.format,
        Command::Zeta(a) => a.germ.common.format,
        Command::Oracle(a) => a.germ.common.format,
        Command::GlobalVerify(a) => a.common.format,
    };
    match run(&cli.command) {
        Ok((report, verified)) => Outcome {
            code: if verified { 0 } else { 4 },
            stdout: render(&report, format),
            stderr: if verified { String::new() } else { "verification failed\n".into() },
        },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).expect("serializable")),
        Format::Text => {
            let mut out = String::new();
            flatten("", report, &mut out);
            out
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            items.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out))
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

pub fn parse_field(text: &str) -> Result<Field> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Rationals);
    }
    let p = t.parse::<u64>().map_err(|_| Error::InvalidInput(format!("unknown field {t:?}")))?;
    Field::prime(p)
}

pub fn parse_prime_range(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidInput(format!("prime range {text:?} is not of the form A..B"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse::<u64>().map_err(|_| bad())?;
    let hi = hi.trim().parse::<u64>().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(primes_in(lo, hi))
}

fn equation_in(text: &str, field: Field) -> Result<BivarPoly> {
    let f = parse_curve(text)?;
    match field {
        Field::Rationals => Ok(f),
        Field::Prime(p) => reduce_mod_p(&f, p),
    }
}

fn germ_of(args: &GermArgs) -> Result<CurveGerm> {
    let field = parse_field(&args.common.field)?;
    if args.common.budget == 0 {
        return Err(Error::InvalidInput("the budget must be positive".into()));
    }
    let f = equation_in(&args.curve, field)?;
    match &args.point {
        None => CurveGerm::new(f),
        Some(pt) => {
            let bad = || Error::InvalidInput(format!("point {pt:?} is not of the form a,b"));
            let (a, b) = pt.split_once(',').ok_or_else(bad)?;
            let a = FieldElem::parse_in(field, a).ok_or_else(bad)?;
            let b = FieldElem::parse_in(field, b).ok_or_else(bad)?;
            CurveGerm::at_point(&f, &a, &b)
        }
    }
}

fn finite_order(ring: &LocalRing) -> Result<u64> {
    ring.field().order().ok_or_else(|| Error::InvalidInput("this command needs --field p for a prime p".into()))
}

fn default_bound(ring: &LocalRing) -> usize {
    ring.conductor().iter().sum::<usize>() + 4
}

/// The report and whether every verification in it passed.
fn run(command: &Command) -> Result<(Value, bool)> {
    match command {
        Command::Analyze(args) => analyze(args).map(|v| (v, true)),
        Command::ReduceScan(args) => reduce_scan(args).map(|v| (v, true)),
        Command::Zeta(args) => zeta(args).map(|v| (v, true)),
        Command::Oracle(args) => oracle(args),
        Command::GlobalVerify(args) => global_verify(args),
        Command::UnitIndex(args) => {
            let ring = LocalRing::new(&germ_of(args)?)?;
            finite_order(&ring)?;
            let index = unit_index(&ring, args.common.budget)?;
            Ok((serde_json::to_value(index).expect("serializable"), true))
        }
    }
}

fn analyze(args: &GermArgs) -> Result<Value> {
    let germ = germ_of(args)?;
    let process = resolve_germ(&germ)?;
    let ring = LocalRing::new(&germ)?;
    let semigroup = semigroup_of(&ring)?;
    let branches: Vec<Value> = ring.branches().iter().map(|b| b.to_json()).collect();
    Ok(json!({
        "field": field_name(germ.field()),
        "equation": germ.equation().to_string(),
        "multiplicity": germ.multiplicity(),
        "delta": semigroup.delta,
        "conductor": semigroup.conductor,
        "generators": semigroup.generators,
        "resolution": process.to_json(),
        "semigroup": semigroup.to_json(),
        "branches": branches,
    }))
}

fn field_name(field: Field) -> String {
    match field {
        Field::Rationals => "Q".into(),
        Field::Prime(p) => p.to_string(),
    }
}

fn reduce_scan(args: &ScanArgs) -> Result<Value> {
    let f = parse_curve(&args.curve)?;
    let primes = parse_prime_range(&args.primes)?;
    let process = good_reduction_scan(&f, &primes)?;
    let semigroup = reduction_semigroup_scan(&f, &primes)?;
    let bad: Vec<u64> = process
        .iter()
        .zip(&semigroup)
        .filter(|(a, b)| !a.is_good() || !b.is_good())
        .map(|(a, _)| a.prime)
        .collect();
    Ok(json!({
        "equation": f.to_string(),
        "primes": primes,
        "bad": bad,
        "process": process,
        "semigroup": semigroup,
    }))
}

fn zeta(args: &ZetaArgs) -> Result<Value> {
    let ring = LocalRing::new(&germ_of(&args.germ)?)?;
    let bound = args.bound.unwrap_or_else(|| default_bound(&ring));
    let z = local_zeta(&ring, bound)?;
    let p = poincare_series(&z);
    let with_q = |s| -> Vec<Value> {
        if args.q.is_empty() {
            vec![series_json(s, None)]
        } else {
            args.q.iter().map(|&q| series_json(s, Some(q))).collect()
        }
    };
    Ok(json!({
        "delta": z.delta,
        "conductor": z.conductor,
        "q": args.q,
        "zeta": with_q(&z.joint),
        "poincare": with_q(&p),
    }))
}

fn oracle(args: &OracleArgs) -> Result<(Value, bool)> {
    let ring = LocalRing::new(&germ_of(&args.germ)?)?;
    let q = finite_order(&ring)?;
    let bound = args.bound.unwrap_or_else(|| default_bound(&ring));
    let fibers = brute_force_fibers(&ring, bound, args.germ.common.budget)?;
    let mut agree = true;
    let mut rows = Vec::with_capacity(fibers.len());
    for c in &fibers {
        let formula = ideal_class(&ring, &c.n)?.evaluate(q);
        let matches = formula == crate::algebra::Rational::from_integer(c.ideals.into())
            && (q - 1) * c.projectivized == c.fiber;
        agree &= matches;
        let mut row = serde_json::to_value(c).expect("serializable");
        row["formula"] = Value::String(rational_string(&formula));
        row["agree"] = Value::Bool(matches);
        rows.push(row);
    }
    Ok((json!({"q": q, "bound": bound, "agree": agree, "fibers": rows}), agree))
}

fn global_verify(args: &GlobalArgs) -> Result<(Value, bool)> {
    let p = match parse_field(&args.common.field)? {
        Field::Prime(p) => p,
        Field::Rationals => return Err(Error::InvalidInput("global-verify needs --field p for a prime p".into())),
    };
    if args.common.budget == 0 {
        return Err(Error::InvalidInput("the budget must be positive".into()));
    }
    let curve = GlobalCurve::parse(&args.curve, p, args.common.budget)?;
    let report = verify_global_factorization(&curve, args.bound.unwrap_or(DEFAULT_GLOBAL_BOUND), args.common.budget)?;
    let mut v = report.to_json();
    v["singular_points"] = curve.singular_points().iter().map(|s| Value::String(s.point.to_string())).collect();
    Ok((v, report.equal && report.unit_index_form))
}

/// Entry point of the binary.
pub fn main_exit() -> ! {
    let outcome = execute(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Value {
        let mut argv = vec!["germzeta"];
        argv.extend_from_slice(args);
        let out = execute(argv);
        assert_eq!(out.code, 0, "{}", out.stderr);
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn analyze_cusp() {
        let v = run_ok(&["analyze", "y^2 - x^3"]);
        assert_eq!(v["delta"], 1);
        assert_eq!(v["generators"], json!([2, 3]));
        assert_eq!(v["conductor"], json!([2]));
    }

    #[test]
    fn scan_nodal_cubic() {
        let v = run_ok(&["reduce-scan", "y^2 - x^3 - x^2", "--primes", "2..13"]);
        assert_eq!(v["bad"], json!([2]));
    }

    #[test]
    fn zeta_of_node() {
        let v = run_ok(&["zeta", "x*y", "--bound", "4", "--q", "3"]);
        let terms = v["zeta"][0]["terms"].as_array().unwrap();
        let t = terms.iter().find(|t| t["n"] == json!([1, 1])).unwrap();
        assert_eq!(t["factored"], "(L-1)L^-2");
        assert_eq!(t["specialized"], "2/9");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(execute(["germzeta", "analyze", "y^2 +* x"]).code, 2);
        assert_eq!(execute(["germzeta", "analyze", "y^2 - x^3", "--field", "4"]).code, 2);
        assert_eq!(execute(["germzeta", "oracle", "y^2 - x^3", "--field", "3", "--budget", "5"]).code, 3);
        assert_eq!(execute(["germzeta", "bogus"]).code, 2);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_prime_range("2..13").unwrap(), vec![2, 3, 5, 7, 11, 13]);
        assert!(parse_prime_range("13..2").is_err());
        assert!(parse_prime_range("2-13").is_err());
    }

    #[test]
    fn text_format_is_flat() {
        let out = execute(["germzeta", "unit-index", "x*y", "--field", "3", "--format", "text"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.lines().any(|l| l == "direct: 2"));
    }
}
