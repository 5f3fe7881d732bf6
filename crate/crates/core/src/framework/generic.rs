//! Radius calibration and region construction without closed forms.
//!
//! The radius is found by inverting the exact probability that the estimator
//! lands at distance `≥ η`, and a rejection region is the intersection of
//! the per-state far sets over an explicit list of null states. For the
//! catalog problems this reproduces the closed forms, which makes it a
//! check on them.

use super::{Estimator, SemiDistance, TestProblem};
use crate::distributions::Distribution;
use crate::error::{check_level, Error, Result};
use crate::measurement::{image_prob_mean, image_prob_ss, normal_prob, Interval, IntervalSet, State, Truth};
use crate::roots;

/// `P_ω(d(E(x), π(ω)) ≥ η)`, with the half-line reference (if any) at
/// `anchor`. Studentized problems are pivotal only when `anchor = π(ω)`.
pub fn far_probability(problem: &TestProblem, omega: &Truth, anchor: f64, eta: f64) -> Result<f64> {
    let theta = problem.quantity().of(omega)?;
    let kind = problem.test().semidistance_kind();
    let d = SemiDistance::with_parts(kind, anchor, 1.0)?;
    let n = problem.n();
    let positive: IntervalSet = Interval::open(0.0, f64::INFINITY).into();
    match (problem.estimator(), omega) {
        (Estimator::MuBar, Truth::One(s)) => image_prob_mean(*s, n, &d.far_set(theta, eta)),
        (Estimator::SigmaBar, Truth::One(s)) => {
            let nf = n as f64;
            let set = d.far_set(theta, eta).intersect(&positive).map_increasing(|t| nf * t * t);
            image_prob_ss(*s, n, &set)
        }
        (Estimator::DiffMuBar, Truth::Two(p)) => {
            let m = problem.m().expect("two-sample problem") as f64;
            let sd = (p.first.sigma.powi(2) / n as f64 + p.second.sigma.powi(2) / m).sqrt();
            normal_prob(State::new(theta, sd)?, &d.far_set(theta, eta))
        }
        (Estimator::SigmaPrimeRatio, Truth::Two(_)) => {
            let m = problem.m().expect("two-sample problem");
            let f = Distribution::fisher_f(n as u32 - 1, m as u32 - 1)?;
            let set = d.far_set(theta, eta).intersect(&positive).map_increasing(|t| (t / theta).powi(2));
            Ok(set.mass_under(|v| f.cdf(v).unwrap_or(f64::NAN)))
        }
        (Estimator::MuBarStudentized, Truth::One(_)) => {
            if kind.is_half_line() && anchor != theta {
                return Err(Error::InvalidArgument(
                    "the studentized half-line distance is pivotal only at its reference point".into(),
                ));
            }
            let t = Distribution::student_t(n as u32 - 1)?;
            // in units of σ̄′/√n the statistic is |T| (or max(T, 0)) with T ~ t(n − 1)
            let pivot = SemiDistance::with_parts(kind, 0.0, 1.0)?;
            Ok(pivot.far_set(0.0, eta).mass_under(|v| t.cdf(v).unwrap_or(f64::NAN)))
        }
        _ => Err(Error::InvalidArgument(format!("{} does not match the shape of {omega:?}", problem.test()))),
    }
}

/// `inf {η ≥ 0 : P_ω(d(E(x), π(ω)) ≥ η) ≤ α}` by bisection.
pub fn eta_by_inversion(problem: &TestProblem, omega: &Truth, anchor: f64, alpha: f64) -> Result<f64> {
    check_level(alpha)?;
    let excess = |eta: f64| far_probability(problem, omega, anchor, eta).map(|p| p - alpha);
    if excess(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while excess(hi)? > 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoRoot("far probability never drops to alpha".into()));
        }
    }
    roots::bisect_increasing(|eta| -excess(eta).unwrap_or(f64::NAN), 0.0, hi, 1e-14 * hi)
}

/// A rejection region given as the intersection of `{E : d(E, θ_k) ≥ η_k}`
/// over a finite list of null states.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRegion {
    distance: SemiDistance,
    cells: Vec<(f64, f64)>,
}

/// Builds the intersection over `null_states`, each with its own radius from
/// [`eta_by_inversion`]. Studentized problems are excluded because their
/// far sets depend on the data.
pub fn grid_rejection_region(problem: &TestProblem, null_states: &[Truth], anchor: f64, alpha: f64) -> Result<GridRegion> {
    if null_states.is_empty() {
        return Err(Error::EmptyRegion("no null states given".into()));
    }
    let kind = problem.test().semidistance_kind();
    if kind.is_studentized() {
        return Err(Error::InvalidArgument("grid regions are not defined for data-dependent distances".into()));
    }
    let distance = SemiDistance::with_parts(kind, anchor, 1.0)?;
    let cells = null_states
        .iter()
        .map(|omega| Ok((problem.quantity().of(omega)?, eta_by_inversion(problem, omega, anchor, alpha)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridRegion { distance, cells })
}

impl GridRegion {
    /// `(π(ω_k), η_k)` for every null state.
    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    pub fn contains_estimate(&self, e: f64) -> bool {
        self.cells.iter().all(|&(theta, eta)| self.distance.eval(e, theta) >= eta)
    }

    /// The boundary between an estimate outside the region and one inside,
    /// by bisection on membership.
    pub fn boundary(&self, outside: f64, inside: f64) -> Result<f64> {
        if self.contains_estimate(outside) || !self.contains_estimate(inside) {
            return Err(Error::NoRoot("boundary search needs one point outside and one inside".into()));
        }
        let (mut out, mut inn) = (outside, inside);
        for _ in 0..400 {
            let mid = 0.5 * (out + inn);
            if mid == out || mid == inn {
                break;
            }
            if self.contains_estimate(mid) {
                inn = mid;
            } else {
                out = mid;
            }
        }
        Ok(inn)
    }
}
