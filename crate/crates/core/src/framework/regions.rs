use super::{eta_alpha, eta_gamma, Hypothesis, SemiDistance, TestProblem};
use crate::error::{check_level, Error, Result};
use crate::measurement::{Interval, IntervalSet, Measured};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    /// Estimates at distance `≥ η` from every null value.
    Rejection,
    /// Estimates within distance `< η` of some sure value.
    Sure,
}

/// A rejection or sure region over measured values, described by its
/// hypothesis, radius and semi-distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    problem: TestProblem,
    hypothesis: Hypothesis,
    eta: f64,
    level: f64,
    kind: RegionKind,
}

impl Region {
    pub fn problem(&self) -> &TestProblem {
        &self.problem
    }

    pub fn hypothesis(&self) -> Hypothesis {
        self.hypothesis
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `α` for a rejection region, `γ` for a sure region.
    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    /// Only large estimates can fall in a rejection region of this shape.
    pub fn is_one_sided(&self) -> bool {
        self.problem.test().is_one_sided() || matches!(self.hypothesis, Hypothesis::LowerHalfLine(_))
    }

    /// Distance from `E(x)` to the hypothesis boundary, `d(E(x), θ₀)`; for a
    /// half-line hypothesis estimates below `θ₀` count as distance zero.
    pub fn statistic(&self, x: &Measured) -> Result<f64> {
        let theta0 = self.hypothesis.value();
        let e = self.problem.estimate(x)?;
        let d = self.problem.semidistance(Some(x), theta0)?;
        Ok(match self.hypothesis {
            Hypothesis::Point(_) => d.eval(e, theta0),
            Hypothesis::LowerHalfLine(_) => d.eval(e.max(theta0), theta0),
        })
    }

    pub fn contains(&self, x: &Measured) -> Result<bool> {
        let d = self.statistic(x)?;
        Ok(match self.kind {
            RegionKind::Rejection => d >= self.eta,
            RegionKind::Sure => d < self.eta,
        })
    }

    /// The region as a set of estimator values. Studentized problems need
    /// `x` for the scale; other problems ignore it.
    pub fn estimate_set(&self, x: Option<&Measured>) -> Result<IntervalSet> {
        let theta0 = self.hypothesis.value();
        let d = self.problem.semidistance(x, theta0)?;
        let mut far = d.far_set(theta0, self.eta);
        if let Hypothesis::LowerHalfLine(_) = self.hypothesis {
            far = far.intersect(&Interval::at_least(theta0).into());
        }
        Ok(match self.kind {
            RegionKind::Rejection => far,
            RegionKind::Sure => {
                let domain = if self.problem.quantity().is_positive() {
                    Interval::open(0.0, f64::INFINITY).into()
                } else {
                    IntervalSet::real_line()
                };
                far.complement().intersect(&domain)
            }
        })
    }
}

fn checked_hypothesis(problem: &TestProblem, h: Hypothesis) -> Result<Hypothesis> {
    let v = h.value();
    if !v.is_finite() || (problem.quantity().is_positive() && !(v > 0.0)) {
        return Err(Error::EmptyRegion(format!("hypothesis value {v} is not a valid {:?} value", problem.quantity())));
    }
    Ok(h)
}

/// `R̂^α_{H_N}`: estimates at least `η^α` from every null value.
pub fn rejection_region(problem: &TestProblem, null: Hypothesis, alpha: f64) -> Result<Region> {
    let null = checked_hypothesis(problem, null)?;
    let eta = eta_alpha(problem, &problem.state_for(null.value())?, alpha)?;
    Ok(Region { problem: *problem, hypothesis: null, eta, level: alpha, kind: RegionKind::Rejection })
}

/// `D̂^γ_{H_S}`: the union over sure values of the `η^γ` balls. For a point
/// hypothesis it is the complement of the rejection region at `α = 1 − γ`.
pub fn sure_region(problem: &TestProblem, sure: Hypothesis, gamma: f64) -> Result<Region> {
    let sure = checked_hypothesis(problem, sure)?;
    let eta = eta_gamma(problem, &problem.state_for(sure.value())?, gamma)?;
    Ok(Region { problem: *problem, hypothesis: sure, eta, level: gamma, kind: RegionKind::Sure })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub reject: bool,
    /// `d(E(x), θ₀)` as in [`Region::statistic`].
    pub statistic: f64,
    pub eta: f64,
    pub alpha: f64,
    pub estimate: f64,
    pub region: Region,
}

pub fn run_test(problem: &TestProblem, null: Hypothesis, alpha: f64, x: &Measured) -> Result<TestResult> {
    let region = rejection_region(problem, null, alpha)?;
    let statistic = region.statistic(x)?;
    Ok(TestResult {
        reject: statistic >= region.eta,
        statistic,
        eta: region.eta,
        alpha,
        estimate: problem.estimate(x)?,
        region,
    })
}

/// A calibrated confidence procedure: the radius is computed once and reused
/// for every measured value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceProcedure {
    problem: TestProblem,
    gamma: f64,
    eta: f64,
}

pub fn confidence_procedure(problem: &TestProblem, gamma: f64) -> Result<ConfidenceProcedure> {
    check_level(gamma)?;
    let eta = eta_gamma(problem, &problem.reference_state()?, gamma)?;
    Ok(ConfidenceProcedure { problem: *problem, gamma, eta })
}

impl ConfidenceProcedure {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn interval(&self, x: &Measured) -> Result<ConfidenceInterval> {
        let estimate = self.problem.estimate(x)?;
        let distance = self.problem.semidistance(Some(x), estimate)?;
        let kind = distance.kind();
        let r = self.eta * distance.scale();
        let (lo, hi) = if kind.is_log() {
            (estimate * (-r).exp(), estimate * r.exp())
        } else {
            (estimate - r, estimate + r)
        };
        let hi = if kind.is_half_line() { f64::INFINITY } else { hi };
        Ok(ConfidenceInterval { lo, hi, gamma: self.gamma, eta: self.eta, estimate, distance })
    }
}

/// `D^γ_x = {θ : d(E(x), θ) < η^γ}`, an open interval `(lo, hi)`; `hi` is
/// infinite for the one-sided problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub gamma: f64,
    pub eta: f64,
    pub estimate: f64,
    distance: SemiDistance,
}

impl ConfidenceInterval {
    /// Membership decided by the semi-distance itself (half-line kinds use
    /// the candidate as their reference point), not by the endpoints.
    pub fn contains(&self, theta: f64) -> bool {
        if self.distance.kind().is_log() && !(theta > 0.0) {
            return false;
        }
        self.distance.anchored_at(theta).eval(self.estimate, theta) < self.eta
    }

    pub fn distance(&self) -> SemiDistance {
        self.distance
    }
}

pub fn confidence_region(problem: &TestProblem, x: &Measured, gamma: f64) -> Result<ConfidenceInterval> {
    confidence_procedure(problem, gamma)?.interval(x)
}
