//! The `semidist` command line: catalog tests and confidence intervals on
//! data files, and Monte Carlo experiments.
//!
//! Exit status is 0 whenever a command ran, whatever the decision, and 2 for
//! usage, parse and validation errors.

mod data;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub use data::{parse_columns, read_columns};

use crate::error::Error;
use crate::framework::{confidence_region, run_test, CatalogTest, Estimator, Hypothesis, Nuisance, TestProblem};
use crate::measurement::{Measured, Sample, State, Truth, TwoSampleState};
use crate::montecarlo::{coverage_experiment, power_curve, size_experiment, ExperimentPlan, ExperimentReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "semidist", version, about = "Semi-distance confidence intervals and hypothesis tests for normal data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a catalog test on a data file.
    Test(TestArgs),
    /// Confidence interval on a data file.
    Ci(CiArgs),
    /// Monte Carlo coverage, size or power.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Args)]
pub struct KnownSigmas {
    /// Known population sigma (mean-z, mean-z-upper).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Known sigma of the first population (diff-means*).
    #[arg(long)]
    pub sigma1: Option<f64>,
    /// Known sigma of the second population (diff-means*).
    #[arg(long)]
    pub sigma2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Data file; one column, or two columns for the two-sample tests.
    #[arg(long)]
    pub data: PathBuf,
    /// Second sample for the two-sample tests, as a one-column file.
    #[arg(long)]
    pub data2: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(value_parser = parse_test)]
    pub test: CatalogTest,
    #[command(flatten)]
    pub data: DataArgs,
    /// Null value: mu0, sigma0, theta0 or r0 depending on the test.
    #[arg(long, allow_negative_numbers = true)]
    pub null: f64,
    #[arg(long, value_parser = parse_level)]
    pub alpha: f64,
    #[command(flatten)]
    pub sigmas: KnownSigmas,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[arg(value_parser = parse_test)]
    pub test: CatalogTest,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_parser = parse_level)]
    pub gamma: f64,
    #[command(flatten)]
    pub sigmas: KnownSigmas,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Fraction of simulated intervals containing the true value.
    Coverage(CoverageArgs),
    /// Rejection rate at a true state inside the null.
    Size(SizeArgs),
    /// Rejection rates over a grid of true values.
    Power(PowerArgs),
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, value_parser = parse_test)]
    pub test: CatalogTest,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Second sample size (two-sample tests; defaults to n).
    #[arg(long)]
    pub m: Option<usize>,
    /// True mean of the (first) population.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    /// True sigma of the (first) population; also the known sigma of z tests.
    #[arg(long, default_value_t = 1.0)]
    pub sd: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sd2: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    #[arg(long, env = "SEMIDIST_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; results are identical for any value.
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long, value_parser = parse_level, default_value_t = 0.95)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Null boundary value; defaults to the true value.
    #[arg(long, allow_negative_numbers = true)]
    pub null: Option<f64>,
    #[arg(long, value_parser = parse_level, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub null: f64,
    #[arg(long, value_parser = parse_level, default_value_t = 0.05)]
    pub alpha: f64,
    /// True values of the tested quantity, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub grid: Vec<f64>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn parse_test(s: &str) -> Result<CatalogTest, String> {
    s.parse::<CatalogTest>().map_err(|e| e.to_string())
}

fn parse_level(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} must lie strictly between 0 and 1"))
    }
}

/// A failure to report on stderr with exit status 2.
#[derive(Debug)]
struct Failure(String);

impl Failure {
    fn flag(flag: &str, e: impl std::fmt::Display) -> Self {
        Failure(format!("{flag}: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Test(a) => cmd_test(&a),
        Command::Ci(a) => cmd_ci(&a),
        Command::Experiment(e) => cmd_experiment(&e),
    };
    match result {
        Ok(text) => {
            let _ = writeln!(out, "{}", text.trim_end());
            EXIT_OK
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn nuisance(test: CatalogTest, s: &KnownSigmas) -> Result<Nuisance, Failure> {
    match test.known_sigmas() {
        1 => match s.sigma {
            Some(v) => Ok(Nuisance::Sigma(v)),
            None => Err(Failure::flag(
                "--sigma",
                format!("{test} needs the known population sigma; when sigma is unknown use the t test (mean-t{})", if test.is_one_sided() { "-upper" } else { "" }),
            )),
        },
        2 => match (s.sigma1, s.sigma2) {
            (Some(a), Some(b)) => Ok(Nuisance::Sigmas(a, b)),
            (None, _) => Err(Failure::flag("--sigma1", format!("{test} needs both known population sigmas"))),
            (_, None) => Err(Failure::flag("--sigma2", format!("{test} needs both known population sigmas"))),
        },
        _ => Ok(Nuisance::None),
    }
}

fn sample(values: Vec<f64>, flag: &str) -> Result<Sample, Failure> {
    Sample::new(values).map_err(|e| Failure::flag(flag, e))
}

fn load(test: CatalogTest, d: &DataArgs) -> Result<Measured, Failure> {
    let mut cols = read_columns(&d.data).map_err(|e| Failure::flag("--data", e))?;
    if let Some(path) = &d.data2 {
        if !test.is_two_sample() {
            return Err(Failure::flag("--data2", format!("{test} is a one-sample test")));
        }
        if cols.len() != 1 {
            return Err(Failure::flag("--data", "with --data2 each file must have a single column"));
        }
        let mut second = read_columns(path).map_err(|e| Failure::flag("--data2", e))?;
        if second.len() != 1 {
            return Err(Failure::flag("--data2", "expected a single column"));
        }
        return Ok(Measured::Two(sample(cols.remove(0), "--data")?, sample(second.remove(0), "--data2")?));
    }
    match (test.is_two_sample(), cols.len()) {
        (false, 1) => Ok(Measured::One(sample(cols.remove(0), "--data")?)),
        (false, _) => Err(Failure::flag("--data", format!("{test} expects a single column"))),
        (true, 2) => {
            let y = cols.pop().unwrap_or_default();
            let x = cols.pop().unwrap_or_default();
            Ok(Measured::Two(sample(x, "--data")?, sample(y, "--data")?))
        }
        (true, _) => Err(Failure::flag("--data", format!("{test} needs two columns, or a second file via --data2"))),
    }
}

fn problem_for(test: CatalogTest, x: &Measured, sigmas: &KnownSigmas) -> Result<TestProblem, Failure> {
    let nuisance = nuisance(test, sigmas)?;
    let flag = if test.known_sigmas() == 2 { "--sigma1/--sigma2" } else { "--sigma" };
    TestProblem::new(test, x.first().len(), x.second().map(Sample::len), nuisance).map_err(|e| match e {
        Error::InvalidArgument(_) if test.known_sigmas() > 0 => Failure::flag(flag, e),
        Error::SampleTooSmall { .. } => Failure::flag("--data", e),
        other => other.into(),
    })
}

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn json_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    json!(rounded)
}

/// Six significant digits for tables.
pub fn table_number(x: f64) -> String {
    if !x.is_finite() {
        return if x > 0.0 { "inf".into() } else if x < 0.0 { "-inf".into() } else { "nan".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn estimator_name(e: Estimator) -> &'static str {
    match e {
        Estimator::MuBar | Estimator::MuBarStudentized => "mean",
        Estimator::SigmaBar => "sigma-bar",
        Estimator::DiffMuBar => "mean difference",
        Estimator::SigmaPrimeRatio => "sample sd ratio",
    }
}

fn hypothesis_text(h: Hypothesis) -> String {
    match h {
        Hypothesis::Point(v) => format!("= {}", table_number(v)),
        Hypothesis::LowerHalfLine(v) => format!("<= {}", table_number(v)),
    }
}

fn cmd_test(a: &TestArgs) -> Result<String, Failure> {
    let x = load(a.test, &a.data)?;
    let problem = problem_for(a.test, &x, &a.sigmas)?;
    let null = a.test.default_hypothesis(a.null);
    let r = run_test(&problem, null, a.alpha, &x).map_err(|e| match e {
        Error::EmptyRegion(_) => Failure::flag("--null", e),
        other => other.into(),
    })?;
    if a.json {
        let v = json!({
            "test": a.test.name(),
            "null": json_number(a.null),
            "hypothesis": if matches!(null, Hypothesis::Point(_)) { "point" } else { "lower-half-line" },
            "estimate": json_number(r.estimate),
            "statistic": json_number(r.statistic),
            "eta": json_number(r.eta),
            "alpha": json_number(r.alpha),
            "reject": r.reject,
        });
        return Ok(v.to_string());
    }
    Ok(table(&[
        ("test", a.test.name().to_string()),
        ("null", hypothesis_text(null)),
        (estimator_name(a.test.estimator()), table_number(r.estimate)),
        ("statistic", table_number(r.statistic)),
        ("eta", table_number(r.eta)),
        ("alpha", table_number(r.alpha)),
        ("decision", if r.reject { "reject".into() } else { "do not reject".into() }),
    ]))
}

fn cmd_ci(a: &CiArgs) -> Result<String, Failure> {
    let x = load(a.test, &a.data)?;
    let problem = problem_for(a.test, &x, &a.sigmas)?;
    let ci = confidence_region(&problem, &x, a.gamma)?;
    if a.json {
        let v = json!({
            "test": a.test.name(),
            "lo": json_number(ci.lo),
            "hi": json_number(ci.hi),
            "gamma": json_number(ci.gamma),
            "estimator": estimator_name(a.test.estimator()),
            "estimate": json_number(ci.estimate),
            "eta": json_number(ci.eta),
        });
        return Ok(v.to_string());
    }
    Ok(table(&[
        ("test", a.test.name().to_string()),
        (estimator_name(a.test.estimator()), table_number(ci.estimate)),
        ("gamma", table_number(ci.gamma)),
        ("eta", table_number(ci.eta)),
        ("interval", format!("({}, {})", table_number(ci.lo), table_number(ci.hi))),
    ]))
}

/// The true state with the tested quantity moved to `value`, other
/// coordinates taken from the flags.
fn truth_with(p: &PlanArgs, value: Option<f64>) -> Result<Truth, Failure> {
    let state = |mu: f64, sd: f64, flag: &str| State::new(mu, sd).map_err(|e| Failure::flag(flag, e));
    let q = p.test.quantity();
    use crate::framework::Quantity::*;
    let truth = match (q, value) {
        (Mu, v) => Truth::One(state(v.unwrap_or(p.mu), p.sd, "--mu/--sd")?),
        (Sigma, v) => Truth::One(state(p.mu, v.unwrap_or(p.sd), "--sd")?),
        (MuDiff, v) => Truth::Two(TwoSampleState {
            first: state(v.map_or(p.mu, |d| p.mu2 + d), p.sd, "--mu/--sd")?,
            second: state(p.mu2, p.sd2, "--mu2/--sd2")?,
        }),
        (SigmaRatio, v) => Truth::Two(TwoSampleState {
            first: state(p.mu, v.map_or(p.sd, |r| r * p.sd2), "--sd")?,
            second: state(p.mu2, p.sd2, "--mu2/--sd2")?,
        }),
    };
    Ok(truth)
}

fn plan_for(p: &PlanArgs, truth: Truth, hypothesis: Option<Hypothesis>, level: f64) -> Result<ExperimentPlan, Failure> {
    let test = p.test;
    let nuisance = match test.known_sigmas() {
        1 => Nuisance::Sigma(p.sd),
        2 => Nuisance::Sigmas(p.sd, p.sd2),
        _ => Nuisance::None,
    };
    let m = test.is_two_sample().then_some(p.m.unwrap_or(p.n));
    if !test.is_two_sample() && p.m.is_some() {
        return Err(Failure::flag("--m", format!("{test} is a one-sample test")));
    }
    let problem = TestProblem::new(test, p.n, m, nuisance).map_err(|e| Failure::flag("--n/--m", e))?;
    if p.reps == 0 {
        return Err(Failure::flag("--reps", "at least one replication is required"));
    }
    if p.workers == 0 {
        return Err(Failure::flag("--workers", "at least one worker is required"));
    }
    Ok(ExperimentPlan { problem, truth, hypothesis, level, replications: p.reps, seed: p.seed, workers: p.workers })
}

fn report_json(test: CatalogTest, r: &ExperimentReport) -> Value {
    json!({
        "kind": r.kind,
        "test": test.name(),
        "rate": json_number(r.rate),
        "hits": r.hits,
        "J": r.replications,
        "band": [json_number(r.band.0), json_number(r.band.1)],
        "pass": r.pass,
        "seed": r.seed,
        "level": json_number(r.level),
        "truth": json_number(r.truth_value),
    })
}

fn report_rows(test: CatalogTest, r: &ExperimentReport) -> Vec<(&'static str, String)> {
    vec![
        ("test", test.name().to_string()),
        ("truth", table_number(r.truth_value)),
        ("level", table_number(r.level)),
        ("J", r.replications.to_string()),
        ("hits", r.hits.to_string()),
        ("rate", table_number(r.rate)),
        ("band", format!("[{}, {}]", table_number(r.band.0), table_number(r.band.1))),
        ("pass", r.pass.to_string()),
        ("seed", r.seed.to_string()),
    ]
}

fn cmd_experiment(e: &ExperimentCommand) -> Result<String, Failure> {
    let (plan_args, reports) = match e {
        ExperimentCommand::Coverage(a) => {
            let plan = plan_for(&a.plan, truth_with(&a.plan, None)?, None, a.gamma)?;
            (&a.plan, vec![coverage_experiment(&plan)?])
        }
        ExperimentCommand::Size(a) => {
            let truth = truth_with(&a.plan, None)?;
            let value = a.null.unwrap_or(a.plan.test.quantity().of(&truth)?);
            let plan = plan_for(&a.plan, truth, Some(a.plan.test.default_hypothesis(value)), a.alpha)?;
            let r = size_experiment(&plan).map_err(|e| match e {
                Error::NullViolated(_) => Failure::flag("--null", e),
                other => other.into(),
            })?;
            (&a.plan, vec![r])
        }
        ExperimentCommand::Power(a) => {
            let truths = a.grid.iter().map(|v| truth_with(&a.plan, Some(*v))).collect::<Result<Vec<_>, _>>()?;
            let plan = plan_for(&a.plan, truths[0], Some(a.plan.test.default_hypothesis(a.null)), a.alpha)?;
            (&a.plan, power_curve(&plan, &truths)?)
        }
    };
    let test = plan_args.test;
    if plan_args.json {
        let v = if let ExperimentCommand::Power(_) = e {
            json!({ "kind": "power", "test": test.name(), "points": reports.iter().map(|r| report_json(test, r)).collect::<Vec<_>>() })
        } else {
            report_json(test, &reports[0])
        };
        return Ok(v.to_string());
    }
    Ok(reports.iter().map(|r| table(&report_rows(test, r))).collect::<Vec<_>>().join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digit_json() {
        assert_eq!(json_number(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(json_number(f64::INFINITY), Value::Null);
        assert_eq!(json_number(2.0), json!(2.0));
    }

    #[test]
    fn six_digit_tables() {
        assert_eq!(table_number(1.959963984540054), "1.95996");
        assert_eq!(table_number(0.05), "0.05");
        assert_eq!(table_number(123456.7), "123457");
        assert_eq!(table_number(1234567.0), "1.23457e6");
        assert_eq!(table_number(-0.000123456789), "-0.000123457");
        assert_eq!(table_number(f64::INFINITY), "inf");
    }

    #[test]
    fn levels_are_checked() {
        assert!(parse_level("0.05").is_ok());
        assert!(parse_level("1").is_err());
        assert!(parse_level("x").is_err());
    }
}
