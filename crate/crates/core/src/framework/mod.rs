//! Confidence intervals and hypothesis tests built from one semi-distance
//! construction, and the catalog of normal-model tests.
//!
//! A problem fixes an estimator `E`, a quantity `π` and a semi-distance `d`.
//! Its radius `η` is calibrated so that `P_ω(d(E(x), π(ω)) ≥ η) = α`; the
//! test rejects when `d ≥ η` and the confidence interval keeps the values
//! with `d < η`. Both decisions read the same number, so they are exact
//! complements of each other.

pub mod generic;
mod regions;
mod semidistance;

use std::fmt;
use std::str::FromStr;

pub use regions::{
    confidence_procedure, confidence_region, rejection_region, run_test, sure_region, ConfidenceInterval,
    ConfidenceProcedure, Region, RegionKind, TestResult,
};
pub use semidistance::{SemiDistance, SemiDistanceKind};

use crate::distributions::{symmetric_log_interval_eta, upper_tail_log_eta, z_alpha, Distribution, Tails};
use crate::error::{check_level, Error, Result};
use crate::measurement::{mu_bar, sigma_bar, sigma_bar_prime, Measured, Sample, State, Truth, TwoSampleState};

/// The ten tests of the catalog; `*Upper` variants test a lower half-line
/// null against larger values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogTest {
    MeanZ,
    MeanZUpper,
    Var,
    VarUpper,
    DiffMeans,
    DiffMeansUpper,
    VarRatio,
    VarRatioUpper,
    MeanT,
    MeanTUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// `μ̄(x)`
    MuBar,
    /// `σ̄(x)`
    SigmaBar,
    /// `μ̄(x) − μ̄(y)`
    DiffMuBar,
    /// `σ̄′(x) / σ̄′(y)`
    SigmaPrimeRatio,
    /// `μ̄(x)`, measured in units of `σ̄′(x)/√n`
    MuBarStudentized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Mu,
    Sigma,
    MuDiff,
    SigmaRatio,
}

impl Quantity {
    pub fn of(self, truth: &Truth) -> Result<f64> {
        match (self, truth) {
            (Quantity::Mu, Truth::One(s)) => Ok(s.mu),
            (Quantity::Sigma, Truth::One(s)) => Ok(s.sigma),
            (Quantity::MuDiff, Truth::Two(p)) => Ok(p.first.mu - p.second.mu),
            (Quantity::SigmaRatio, Truth::Two(p)) => Ok(p.first.sigma / p.second.sigma),
            _ => Err(Error::InvalidArgument(format!("quantity {self:?} does not apply to {truth:?}"))),
        }
    }

    /// Whether Θ is `(0, ∞)` rather than ℝ.
    pub fn is_positive(self) -> bool {
        matches!(self, Quantity::Sigma | Quantity::SigmaRatio)
    }
}

impl CatalogTest {
    pub const ALL: [CatalogTest; 10] = [
        CatalogTest::MeanZ,
        CatalogTest::MeanZUpper,
        CatalogTest::Var,
        CatalogTest::VarUpper,
        CatalogTest::DiffMeans,
        CatalogTest::DiffMeansUpper,
        CatalogTest::VarRatio,
        CatalogTest::VarRatioUpper,
        CatalogTest::MeanT,
        CatalogTest::MeanTUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogTest::MeanZ => "mean-z",
            CatalogTest::MeanZUpper => "mean-z-upper",
            CatalogTest::Var => "var",
            CatalogTest::VarUpper => "var-upper",
            CatalogTest::DiffMeans => "diff-means",
            CatalogTest::DiffMeansUpper => "diff-means-upper",
            CatalogTest::VarRatio => "var-ratio",
            CatalogTest::VarRatioUpper => "var-ratio-upper",
            CatalogTest::MeanT => "mean-t",
            CatalogTest::MeanTUpper => "mean-t-upper",
        }
    }

    pub fn estimator(self) -> Estimator {
        match self {
            CatalogTest::MeanZ | CatalogTest::MeanZUpper => Estimator::MuBar,
            CatalogTest::Var | CatalogTest::VarUpper => Estimator::SigmaBar,
            CatalogTest::DiffMeans | CatalogTest::DiffMeansUpper => Estimator::DiffMuBar,
            CatalogTest::VarRatio | CatalogTest::VarRatioUpper => Estimator::SigmaPrimeRatio,
            CatalogTest::MeanT | CatalogTest::MeanTUpper => Estimator::MuBarStudentized,
        }
    }

    pub fn quantity(self) -> Quantity {
        match self.estimator() {
            Estimator::MuBar | Estimator::MuBarStudentized => Quantity::Mu,
            Estimator::SigmaBar => Quantity::Sigma,
            Estimator::DiffMuBar => Quantity::MuDiff,
            Estimator::SigmaPrimeRatio => Quantity::SigmaRatio,
        }
    }

    pub fn semidistance_kind(self) -> SemiDistanceKind {
        use SemiDistanceKind::*;
        match (self.estimator(), self.is_one_sided()) {
            (Estimator::MuBar | Estimator::DiffMuBar, false) => Absolute,
            (Estimator::MuBar | Estimator::DiffMuBar, true) => HalfLineAbsolute,
            (Estimator::SigmaBar | Estimator::SigmaPrimeRatio, false) => LogRatio,
            (Estimator::SigmaBar | Estimator::SigmaPrimeRatio, true) => HalfLineLogRatio,
            (Estimator::MuBarStudentized, false) => Studentized,
            (Estimator::MuBarStudentized, true) => HalfLineStudentized,
        }
    }

    pub fn is_one_sided(self) -> bool {
        matches!(
            self,
            CatalogTest::MeanZUpper
                | CatalogTest::VarUpper
                | CatalogTest::DiffMeansUpper
                | CatalogTest::VarRatioUpper
                | CatalogTest::MeanTUpper
        )
    }

    pub fn is_two_sample(self) -> bool {
        matches!(self.quantity(), Quantity::MuDiff | Quantity::SigmaRatio)
    }

    /// Number of known standard deviations the test needs.
    pub fn known_sigmas(self) -> usize {
        match self.estimator() {
            Estimator::MuBar => 1,
            Estimator::DiffMuBar => 2,
            _ => 0,
        }
    }

    /// The null this test is designed for: a point for two-sided tests, a
    /// lower half-line for the `*-upper` variants.
    pub fn default_hypothesis(self, value: f64) -> Hypothesis {
        if self.is_one_sided() {
            Hypothesis::LowerHalfLine(value)
        } else {
            Hypothesis::Point(value)
        }
    }

    fn min_size(self) -> usize {
        match self.estimator() {
            Estimator::MuBar | Estimator::DiffMuBar => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CatalogTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogTest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogTest::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = CatalogTest::ALL.iter().map(|t| t.name()).collect();
                Error::InvalidArgument(format!("unknown test '{s}'; expected one of {}", names.join(", ")))
            })
    }
}

/// A null (or sure) hypothesis on Θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hypothesis {
    /// `{θ₀}`
    Point(f64),
    /// `{θ ∈ Θ : θ ≤ θ₀}`
    LowerHalfLine(f64),
}

impl Hypothesis {
    pub fn value(self) -> f64 {
        match self {
            Hypothesis::Point(v) | Hypothesis::LowerHalfLine(v) => v,
        }
    }

    pub fn contains(self, theta: f64) -> bool {
        match self {
            Hypothesis::Point(v) => theta == v,
            Hypothesis::LowerHalfLine(v) => theta <= v,
        }
    }
}

/// Standard deviations treated as known.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Nuisance {
    #[default]
    None,
    Sigma(f64),
    Sigmas(f64, f64),
}

/// A catalog test together with its sample sizes and known nuisance values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestProblem {
    test: CatalogTest,
    n: usize,
    m: Option<usize>,
    nuisance: Nuisance,
}

impl TestProblem {
    pub fn new(test: CatalogTest, n: usize, m: Option<usize>, nuisance: Nuisance) -> Result<Self> {
        let need = test.min_size();
        if n < need {
            return Err(Error::SampleTooSmall { need, got: n });
        }
        match (test.is_two_sample(), m) {
            (true, None) => {
                return Err(Error::InvalidArgument(format!("{test} compares two samples; a second sample size is required")))
            }
            (true, Some(m)) if m < need => return Err(Error::SampleTooSmall { need, got: m }),
            (false, Some(_)) => {
                return Err(Error::InvalidArgument(format!("{test} is a one-sample test; no second sample is allowed")))
            }
            _ => {}
        }
        let positive = |s: f64| s.is_finite() && s > 0.0;
        match (test.known_sigmas(), nuisance) {
            (0, _) => {}
            (1, Nuisance::Sigma(s)) if positive(s) => {}
            (2, Nuisance::Sigmas(a, b)) if positive(a) && positive(b) => {}
            (1, Nuisance::Sigma(s)) => {
                return Err(Error::InvalidArgument(format!("known standard deviation must be positive, got {s}")))
            }
            (2, Nuisance::Sigmas(a, b)) => {
                return Err(Error::InvalidArgument(format!("known standard deviations must be positive, got {a} and {b}")))
            }
            (1, _) => {
                return Err(Error::MissingNuisance(format!(
                    "{test} assumes the population sigma is known; supply it, or use mean-t{} when sigma is unknown",
                    if test.is_one_sided() { "-upper" } else { "" }
                )))
            }
            _ => {
                return Err(Error::MissingNuisance(format!(
                    "{test} assumes both population sigmas are known; supply sigma1 and sigma2"
                )))
            }
        }
        Ok(Self { test, n, m, nuisance })
    }

    pub fn test(&self) -> CatalogTest {
        self.test
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> Option<usize> {
        self.m
    }

    pub fn nuisance(&self) -> Nuisance {
        self.nuisance
    }

    pub fn estimator(&self) -> Estimator {
        self.test.estimator()
    }

    pub fn quantity(&self) -> Quantity {
        self.test.quantity()
    }

    /// Checks that `x` has the shape and sizes this problem was built for.
    pub fn check_data(&self, x: &Measured) -> Result<()> {
        let (nx, ny) = (x.first().len(), x.second().map(Sample::len));
        if nx != self.n || ny != self.m {
            return Err(Error::InvalidArgument(format!(
                "{} was set up for sizes (n, m) = ({}, {:?}) but the data have ({nx}, {ny:?})",
                self.test, self.n, self.m
            )));
        }
        Ok(())
    }

    /// `E(x)`.
    pub fn estimate(&self, x: &Measured) -> Result<f64> {
        self.check_data(x)?;
        let first = x.first();
        Ok(match self.estimator() {
            Estimator::MuBar | Estimator::MuBarStudentized => mu_bar(first),
            Estimator::SigmaBar => sigma_bar(first),
            Estimator::DiffMuBar => mu_bar(first) - mu_bar(x.second().expect("checked shape")),
            Estimator::SigmaPrimeRatio => {
                let den = sigma_bar_prime(x.second().expect("checked shape"))?;
                if den == 0.0 {
                    return Err(Error::DegenerateSample("the second sample is constant, so the variance ratio is undefined"));
                }
                sigma_bar_prime(first)? / den
            }
        })
    }

    /// The problem's semi-distance with its half-line reference at `theta0`;
    /// the studentized kinds take their scale from `x`.
    pub fn semidistance(&self, x: Option<&Measured>, theta0: f64) -> Result<SemiDistance> {
        let kind = self.test.semidistance_kind();
        let scale = if kind.is_studentized() {
            let x = x.ok_or_else(|| Error::InvalidArgument(format!("{} uses a data-dependent distance; data are required", self.test)))?;
            self.check_data(x)?;
            SemiDistance::studentized(x.first())?.scale()
        } else {
            1.0
        };
        SemiDistance::with_parts(kind, theta0, scale)
    }

    /// A state with `π(ω) = θ`, using the known sigmas where the problem
    /// has them. The radius of every catalog problem depends on ω only
    /// through those known values.
    pub fn state_for(&self, theta: f64) -> Result<Truth> {
        let (s1, s2) = match self.nuisance {
            Nuisance::Sigma(s) => (s, 1.0),
            Nuisance::Sigmas(a, b) => (a, b),
            Nuisance::None => (1.0, 1.0),
        };
        let truth = match self.quantity() {
            Quantity::Mu => Truth::One(State::new(theta, s1)?),
            Quantity::Sigma => Truth::One(State::new(0.0, theta)?),
            Quantity::MuDiff => Truth::Two(TwoSampleState::new(State::new(theta, s1)?, State::new(0.0, s2)?)?),
            Quantity::SigmaRatio => Truth::Two(TwoSampleState::new(State::new(0.0, theta)?, State::new(0.0, 1.0)?)?),
        };
        Ok(truth)
    }

    /// A reference state used when only the radius is needed.
    pub fn reference_state(&self) -> Result<Truth> {
        self.state_for(if self.quantity().is_positive() { 1.0 } else { 0.0 })
    }

    fn one_state(&self, omega: &Truth) -> Result<State> {
        match omega {
            Truth::One(s) if !self.test.is_two_sample() => s.validated(),
            _ => Err(Error::InvalidArgument(format!("{} needs a single-population state", self.test))),
        }
    }

    fn two_state(&self, omega: &Truth) -> Result<TwoSampleState> {
        match omega {
            Truth::Two(p) if self.test.is_two_sample() => TwoSampleState::new(p.first, p.second),
            _ => Err(Error::InvalidArgument(format!("{} needs a two-population state", self.test))),
        }
    }

    fn n_u32(&self) -> Result<u32> {
        u32::try_from(self.n).map_err(|_| Error::InvalidArgument("sample size too large".into()))
    }
}

/// `η^γ_ω`: the smallest radius with `P_ω(d(E(x), π(ω)) < η) ≥ γ`, from the
/// exact sampling law of each catalog statistic.
pub fn eta_gamma(problem: &TestProblem, omega: &Truth, gamma: f64) -> Result<f64> {
    let alpha = 1.0 - check_level(gamma)?;
    let tails = if problem.test.is_one_sided() { Tails::One } else { Tails::Two };
    let n = problem.n as f64;
    match problem.estimator() {
        Estimator::MuBar => {
            let s = problem.one_state(omega)?;
            Ok(s.sigma / n.sqrt() * z_alpha(alpha, tails)?)
        }
        Estimator::DiffMuBar => {
            let p = problem.two_state(omega)?;
            let m = problem.m.expect("validated") as f64;
            let sd = (p.first.sigma.powi(2) / n + p.second.sigma.powi(2) / m).sqrt();
            Ok(sd * z_alpha(alpha, tails)?)
        }
        Estimator::SigmaBar => {
            problem.one_state(omega)?;
            let chi = Distribution::chi_squared(problem.n_u32()? - 1)?;
            match tails {
                Tails::Two => symmetric_log_interval_eta(chi, problem.n_u32()?, alpha),
                Tails::One => upper_tail_log_eta(chi, problem.n_u32()?, alpha),
            }
        }
        Estimator::SigmaPrimeRatio => {
            problem.two_state(omega)?;
            let n = problem.n_u32()?;
            let m = u32::try_from(problem.m.expect("validated")).map_err(|_| Error::InvalidArgument("sample size too large".into()))?;
            let f = Distribution::fisher_f(n - 1, m - 1)?;
            match tails {
                Tails::Two => symmetric_log_interval_eta(f, n, alpha),
                Tails::One => upper_tail_log_eta(f, n, alpha),
            }
        }
        Estimator::MuBarStudentized => {
            problem.one_state(omega)?;
            Distribution::student_t(problem.n_u32()? - 1)?.critical_value(alpha, tails)
        }
    }
}

/// `η^α_ω = η^{1−α}_ω`.
pub fn eta_alpha(problem: &TestProblem, omega: &Truth, alpha: f64) -> Result<f64> {
    check_level(alpha)?;
    eta_gamma(problem, omega, 1.0 - alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for t in CatalogTest::ALL {
            assert_eq!(t.name().parse::<CatalogTest>().unwrap(), t);
        }
        assert!("mean".parse::<CatalogTest>().is_err());
    }

    #[test]
    fn z_problems_demand_sigma() {
        let err = TestProblem::new(CatalogTest::MeanZ, 5, None, Nuisance::None).unwrap_err();
        assert!(matches!(err, Error::MissingNuisance(ref m) if m.contains("mean-t")));
        assert!(TestProblem::new(CatalogTest::DiffMeans, 5, Some(5), Nuisance::Sigma(1.0)).is_err());
        assert!(TestProblem::new(CatalogTest::MeanZ, 5, None, Nuisance::Sigma(-1.0)).is_err());
        assert!(TestProblem::new(CatalogTest::MeanT, 1, None, Nuisance::None).is_err());
        assert!(TestProblem::new(CatalogTest::VarRatio, 5, None, Nuisance::None).is_err());
    }

    #[test]
    fn mean_z_radius() {
        let p = TestProblem::new(CatalogTest::MeanZ, 4, None, Nuisance::Sigma(1.0)).unwrap();
        let eta = eta_alpha(&p, &p.reference_state().unwrap(), 0.05).unwrap();
        assert!((eta - 0.5 * 1.959_963_984_540_054).abs() < 1e-14);
    }

    #[test]
    fn mean_t_radius_is_t_quantile() {
        let p = TestProblem::new(CatalogTest::MeanT, 10, None, Nuisance::None).unwrap();
        let eta = eta_gamma(&p, &p.reference_state().unwrap(), 0.95).unwrap();
        assert!((eta - 2.262_157_162_798_205_5).abs() < 1e-12);
    }

    #[test]
    fn state_shape_is_checked() {
        let p = TestProblem::new(CatalogTest::Var, 10, None, Nuisance::None).unwrap();
        let two = TestProblem::new(CatalogTest::VarRatio, 10, Some(10), Nuisance::None).unwrap();
        assert!(eta_alpha(&p, &two.reference_state().unwrap(), 0.05).is_err());
    }
}
