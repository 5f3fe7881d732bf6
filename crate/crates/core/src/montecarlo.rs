//! Coverage, size and power by repeated simulated measurement.
//!
//! Replication `j` draws its data from stream `j` of the plan's seed, so the
//! hit count is the same for any number of workers and any scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_level, Error, Result};
use crate::framework::{confidence_procedure, rejection_region, Hypothesis, TestProblem};
use crate::measurement::{draw_measured, Measured, Streams, Truth};

/// Replications handed to a worker at a time.
const CHUNK: u64 = 2048;

/// Width of the acceptance band in binomial standard deviations.
pub const BAND_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Coverage,
    Size,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentPlan {
    pub problem: TestProblem,
    pub truth: Truth,
    pub hypothesis: Option<Hypothesis>,
    /// `γ` for coverage, `α` for size and power.
    pub level: f64,
    pub replications: u64,
    pub seed: u64,
    /// Threads used; results do not depend on it.
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub hits: u64,
    #[serde(rename = "J")]
    pub replications: u64,
    pub rate: f64,
    /// `level ± 4·√(level(1 − level)/J)`, clipped to `[0, 1]`.
    pub band: (f64, f64),
    pub pass: bool,
    pub seed: u64,
    pub level: f64,
    /// `π(truth)`.
    pub truth_value: f64,
}

fn band(level: f64, j: u64) -> (f64, f64) {
    let half = BAND_SIGMAS * (level * (1.0 - level) / j as f64).sqrt();
    ((level - half).max(0.0), (level + half).min(1.0))
}

fn validate(plan: &ExperimentPlan) -> Result<()> {
    if plan.replications == 0 {
        return Err(Error::InvalidPlan("at least one replication is required".into()));
    }
    if plan.workers == 0 {
        return Err(Error::InvalidPlan("at least one worker is required".into()));
    }
    check_level(plan.level).map_err(|_| Error::InvalidPlan(format!("level {} must lie in (0, 1)", plan.level)))?;
    plan.truth.validated()?;
    plan.problem.quantity().of(&plan.truth).map_err(|e| Error::InvalidPlan(e.to_string()))?;
    Ok(())
}

/// Counts replications whose measured value satisfies `hit`.
fn count_hits<F>(plan: &ExperimentPlan, hit: F) -> Result<u64>
where
    F: Fn(&Measured) -> Result<bool> + Sync,
{
    let streams = Streams::new(plan.seed);
    let (n, m) = (plan.problem.n(), plan.problem.m());
    let total = plan.replications;
    let run = |first: u64, end: u64| -> Result<u64> {
        let mut hits = 0;
        for j in first..end {
            let x = draw_measured(&plan.truth, n, m, &mut streams.stream(j))?;
            if hit(&x)? {
                hits += 1;
            }
        }
        Ok(hits)
    };
    if plan.workers == 1 {
        return run(0, total);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::InvalidPlan(format!("could not start {} workers: {e}", plan.workers)))?;
    let chunks = total.div_ceil(CHUNK);
    pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| run(c * CHUNK, ((c + 1) * CHUNK).min(total)))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })
}

fn report(plan: &ExperimentPlan, kind: ExperimentKind, hits: u64, pass: impl Fn(f64, (f64, f64)) -> bool) -> Result<ExperimentReport> {
    let rate = hits as f64 / plan.replications as f64;
    let band = band(plan.level, plan.replications);
    Ok(ExperimentReport {
        kind,
        hits,
        replications: plan.replications,
        rate,
        band,
        pass: pass(rate, band),
        seed: plan.seed,
        level: plan.level,
        truth_value: plan.problem.quantity().of(&plan.truth)?,
    })
}

/// Fraction of replications whose `γ`-confidence interval contains
/// `π(truth)`; passes when the rate is at least the lower band edge.
pub fn coverage_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    validate(plan)?;
    if plan.hypothesis.is_some() {
        return Err(Error::InvalidPlan("a coverage experiment takes no hypothesis".into()));
    }
    let procedure = confidence_procedure(&plan.problem, plan.level)?;
    let theta = plan.problem.quantity().of(&plan.truth)?;
    let hits = count_hits(plan, |x| Ok(procedure.interval(x)?.contains(theta)))?;
    report(plan, ExperimentKind::Coverage, hits, |rate, (lo, _)| rate >= lo)
}

fn rejection_hits(plan: &ExperimentPlan) -> Result<u64> {
    let null = plan.hypothesis.ok_or_else(|| Error::InvalidPlan("a null hypothesis is required".into()))?;
    let region = rejection_region(&plan.problem, null, plan.level)?;
    count_hits(plan, |x| region.contains(x))
}

/// Rejection rate at a state inside the null; passes when the rate is at
/// most the upper band edge.
pub fn size_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    validate(plan)?;
    let null = plan.hypothesis.ok_or_else(|| Error::InvalidPlan("a size experiment needs a null hypothesis".into()))?;
    let theta = plan.problem.quantity().of(&plan.truth)?;
    let slack = 1e-12 * null.value().abs().max(1.0);
    let inside = match null {
        Hypothesis::Point(v) => (theta - v).abs() <= slack,
        Hypothesis::LowerHalfLine(v) => theta <= v + slack,
    };
    if !inside {
        return Err(Error::NullViolated(format!("the true value {theta} is not in {null:?}")));
    }
    let hits = rejection_hits(plan)?;
    report(plan, ExperimentKind::Size, hits, |rate, (_, hi)| rate <= hi)
}

/// Rejection rates across `truths`. Each report passes when its rate is at
/// least the lower edge of the `α` band, i.e. the test rejects no less
/// often than it does at the null boundary.
pub fn power_curve(plan: &ExperimentPlan, truths: &[Truth]) -> Result<Vec<ExperimentReport>> {
    if truths.is_empty() {
        return Err(Error::InvalidPlan("the truth grid is empty".into()));
    }
    truths
        .iter()
        .map(|truth| {
            let point = ExperimentPlan { truth: *truth, ..*plan };
            validate(&point)?;
            let hits = rejection_hits(&point)?;
            report(&point, ExperimentKind::Power, hits, |rate, (lo, _)| rate >= lo)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{CatalogTest, Nuisance};
    use crate::measurement::State;

    fn plan(workers: usize) -> ExperimentPlan {
        ExperimentPlan {
            problem: TestProblem::new(CatalogTest::MeanT, 6, None, Nuisance::None).unwrap(),
            truth: Truth::One(State::new(0.0, 1.0).unwrap()),
            hypothesis: None,
            level: 0.9,
            replications: 5000,
            seed: 11,
            workers,
        }
    }

    #[test]
    fn workers_do_not_change_results() {
        let a = coverage_experiment(&plan(1)).unwrap();
        let b = coverage_experiment(&plan(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn one_replication_gives_zero_or_one() {
        let r = coverage_experiment(&ExperimentPlan { replications: 1, ..plan(1) }).unwrap();
        assert!(r.rate == 0.0 || r.rate == 1.0);
    }

    #[test]
    fn invalid_plans() {
        assert!(coverage_experiment(&ExperimentPlan { replications: 0, ..plan(1) }).is_err());
        assert!(coverage_experiment(&ExperimentPlan { level: 1.0, ..plan(1) }).is_err());
        let outside = ExperimentPlan { hypothesis: Some(Hypothesis::Point(1.0)), level: 0.05, ..plan(1) };
        assert!(matches!(size_experiment(&outside), Err(Error::NullViolated(_))));
        assert!(power_curve(&plan(1), &[]).is_err());
    }
}
