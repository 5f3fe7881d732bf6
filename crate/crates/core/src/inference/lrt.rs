//! Likelihood-ratio test for the mean with known σ, built from the sample
//! mean's likelihood `L(θ, ω) = exp(−n(θ − μ)²/(2σ²))` (the density of
//! `μ̄(x)` at `θ`, divided by its peak).

use crate::error::{check_level, Error, Result};
use crate::framework::Hypothesis;
use crate::measurement::{image_prob_mean, mu_bar, Interval, IntervalSet, Sample, State};

/// `μ̄(x)` for `n` draws with known `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanModel {
    n: usize,
    sigma: f64,
}

impl MeanModel {
    pub fn new(n: usize, sigma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        State::new(0.0, sigma)?;
        Ok(Self { n, sigma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Standard deviation of `μ̄(x)`.
    pub fn sd(&self) -> f64 {
        self.sigma / (self.n as f64).sqrt()
    }

    pub fn likelihood(&self, theta: f64, mu: f64) -> f64 {
        let z = (theta - mu) / self.sd();
        (-0.5 * z * z).exp()
    }

    /// Null states used for the worst case over a half-line: the boundary and
    /// points up to eight standard errors below it.
    fn null_means(&self, null: Hypothesis) -> Vec<f64> {
        match null {
            Hypothesis::Point(mu0) => vec![mu0],
            Hypothesis::LowerHalfLine(mu0) => (0..=64).map(|k| mu0 - k as f64 * 0.125 * self.sd()).collect(),
        }
    }
}

fn check_null(null: Hypothesis) -> Result<Hypothesis> {
    if null.value().is_finite() {
        Ok(null)
    } else {
        Err(Error::EmptyRegion(format!("{null:?}")))
    }
}

/// `Λ(θ) = sup_{μ ∈ H_N} L(θ, μ)`.
pub fn lrt_lambda(theta: f64, model: &MeanModel, null: Hypothesis) -> Result<f64> {
    let null = check_null(null)?;
    let mu = match null {
        Hypothesis::Point(mu0) => mu0,
        // the unconstrained peak θ is attainable below μ₀; otherwise the
        // closest null mean is μ₀ itself
        Hypothesis::LowerHalfLine(mu0) => theta.min(mu0),
    };
    Ok(model.likelihood(theta, mu))
}

/// `{θ : Λ(θ) ≤ ε}`, located by bisection on `Λ` along each side of `μ₀`.
pub fn lrt_level_set(model: &MeanModel, null: Hypothesis, epsilon: f64) -> Result<IntervalSet> {
    let null = check_null(null)?;
    if epsilon >= 1.0 {
        return Ok(IntervalSet::real_line());
    }
    if !(epsilon > 0.0) {
        return Ok(IntervalSet::empty());
    }
    let mu0 = null.value();
    let lambda = |t: f64| lrt_lambda(t, model, null).unwrap_or(f64::NAN);
    // Λ decreases as θ moves up from μ₀
    let mut hi = model.sd();
    while lambda(mu0 + hi) > epsilon {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lambda(mu0 + mid) > epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let up = Interval::at_least(mu0 + hi);
    Ok(match null {
        Hypothesis::Point(_) => IntervalSet::from_intervals([Interval::at_most(mu0 - hi), up]),
        Hypothesis::LowerHalfLine(_) => up.into(),
    })
}

/// `sup_{ω ∈ H_N} P_ω(μ̄(x) ∈ R^ε)`.
fn exceedance(model: &MeanModel, null: Hypothesis, epsilon: f64) -> Result<f64> {
    let set = lrt_level_set(model, null, epsilon)?;
    let mut worst = 0.0f64;
    for mu in model.null_means(null) {
        worst = worst.max(image_prob_mean(State::new(mu, model.sigma)?, model.n, &set)?);
    }
    Ok(worst)
}

/// `ε(α) = sup {ε : sup_{ω ∈ H_N} P_ω(μ̄(x) ∈ R^ε) ≤ α}`, by bisection in
/// `ln ε`. The returned value always satisfies the size bound.
pub fn calibrate_epsilon(model: &MeanModel, null: Hypothesis, alpha: f64) -> Result<f64> {
    let alpha = check_level(alpha)?;
    let ok = |u: f64| exceedance(model, null, u.exp()).map(|p| p <= alpha);
    let mut lo = -1.0;
    while !ok(lo)? {
        lo *= 2.0;
        if lo < -1e6 {
            return Err(Error::NoRoot("no likelihood level meets the size bound".into()));
        }
    }
    let mut hi = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo.exp())
}

/// A calibrated likelihood-ratio rejection region for `μ̄(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LrtRegion {
    pub model: MeanModel,
    pub null: Hypothesis,
    pub alpha: f64,
    pub epsilon: f64,
    pub set: IntervalSet,
}

impl LrtRegion {
    /// Distance from `μ₀` to the nearest rejected value above it.
    pub fn threshold(&self) -> f64 {
        let mu0 = self.null.value();
        self.set.intervals().iter().filter(|i| i.lo >= mu0).map(|i| i.lo - mu0).fold(f64::INFINITY, f64::min)
    }

    pub fn contains_estimate(&self, theta: f64) -> bool {
        lrt_lambda(theta, &self.model, self.null).is_ok_and(|l| l <= self.epsilon)
    }

    pub fn contains(&self, x: &Sample) -> bool {
        self.contains_estimate(mu_bar(x))
    }
}

pub fn lrt_region(model: &MeanModel, null: Hypothesis, alpha: f64) -> Result<LrtRegion> {
    let epsilon = calibrate_epsilon(model, null, alpha)?;
    let set = lrt_level_set(model, null, epsilon)?;
    Ok(LrtRegion { model: *model, null, alpha, epsilon, set })
}
