//! The normal measurement model: states, measured values, estimator maps,
//! and the probabilities the normal observable and its images assign to
//! interval sets.

mod interval;
pub mod sampler;

pub use interval::{Interval, IntervalSet};
pub use sampler::{draw, draw_measured, sample, Streams};

use crate::distributions::Distribution;
use crate::error::{Error, Result};

/// A point `(μ, σ)` of the state space `ℝ × (0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub mu: f64,
    pub sigma: f64,
}

impl State {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        Self { mu, sigma }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.mu.is_finite() && self.sigma.is_finite() && self.sigma > 0.0 {
            Ok(self)
        } else {
            Err(Error::InvalidState(format!("(mu, sigma) = ({}, {}) needs finite mu and sigma > 0", self.mu, self.sigma)))
        }
    }
}

/// States of two independently measured populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSampleState {
    pub first: State,
    pub second: State,
}

impl TwoSampleState {
    pub fn new(first: State, second: State) -> Result<Self> {
        Ok(Self { first: first.validated()?, second: second.validated()? })
    }
}

/// The true state behind an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truth {
    One(State),
    Two(TwoSampleState),
}

impl Truth {
    pub fn validated(self) -> Result<Self> {
        match self {
            Truth::One(s) => Ok(Truth::One(s.validated()?)),
            Truth::Two(p) => Ok(Truth::Two(TwoSampleState::new(p.first, p.second)?)),
        }
    }
}

/// A measured value `x = (x₁, …, x_n)`: nonempty and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample(Vec<f64>);

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain { what: "a sample (values must be finite)", value: *bad });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

impl TryFrom<&[f64]> for Sample {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Sample::new(values.to_vec())
    }
}

/// Measured data for a one- or two-sample problem.
#[derive(Debug, Clone, PartialEq)]
pub enum Measured {
    One(Sample),
    Two(Sample, Sample),
}

impl Measured {
    pub fn first(&self) -> &Sample {
        match self {
            Measured::One(x) | Measured::Two(x, _) => x,
        }
    }

    pub fn second(&self) -> Option<&Sample> {
        match self {
            Measured::One(_) => None,
            Measured::Two(_, y) => Some(y),
        }
    }
}

pub fn mu_bar(x: &Sample) -> f64 {
    let v = x.values();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    // one refinement pass absorbs the rounding of the first sum
    mean + v.iter().map(|xi| xi - mean).sum::<f64>() / n
}

/// Sum of squared deviations from the sample mean.
pub fn ss_bar(x: &Sample) -> f64 {
    let mean = mu_bar(x);
    let n = x.len() as f64;
    let (sq, lin) = x.values().iter().fold((0.0, 0.0), |(sq, lin), xi| {
        let d = xi - mean;
        (sq + d * d, lin + d)
    });
    (sq - lin * lin / n).max(0.0)
}

/// `√(SS̄/n)`, the maximum-likelihood standard deviation.
pub fn sigma_bar(x: &Sample) -> f64 {
    (ss_bar(x) / x.len() as f64).sqrt()
}

/// `√(SS̄/(n − 1))`; needs at least two values.
pub fn sigma_bar_prime(x: &Sample) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::SampleTooSmall { need: 2, got: x.len() });
    }
    Ok((ss_bar(x) / (x.len() - 1) as f64).sqrt())
}

fn normal_cdf(mu: f64, sd: f64) -> impl Fn(f64) -> f64 {
    move |t| Distribution::Normal.cdf((t - mu) / sd).unwrap_or(f64::NAN)
}

/// `[N(Ξ)](ω)`: probability the normal observable assigns to `set` at `state`.
pub fn normal_prob(state: State, set: &IntervalSet) -> Result<f64> {
    let s = state.validated()?;
    Ok(set.mass_under(normal_cdf(s.mu, s.sigma)))
}

/// Probability that `μ̄(x) ∈ set` for `n` draws at `state`; `μ̄` is
/// `N(μ, σ/√n)`.
pub fn image_prob_mean(state: State, n: usize, set: &IntervalSet) -> Result<f64> {
    let s = state.validated()?;
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok(set.mass_under(normal_cdf(s.mu, s.sigma / (n as f64).sqrt())))
}

/// Probability that `SS̄(x) ∈ set` for `n ≥ 2` draws at `state`, using
/// `SS̄/σ² ~ χ²(n − 1)`. Parts of `set` below zero carry no mass.
pub fn image_prob_ss(state: State, n: usize, set: &IntervalSet) -> Result<f64> {
    let s = state.validated()?;
    if n < 2 {
        return Err(Error::SampleTooSmall { need: 2, got: n });
    }
    let chi = Distribution::chi_squared((n - 1) as u32)?;
    let var = s.sigma * s.sigma;
    let positive = set.intersect(&Interval::open(0.0, f64::INFINITY).into());
    Ok(positive.mass_under(|t| chi.cdf(t / var).unwrap_or(f64::NAN)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Sample {
        Sample::try_from(v).unwrap()
    }

    #[test]
    fn estimators_on_one_two_three() {
        let x = s(&[1.0, 2.0, 3.0]);
        assert_eq!(mu_bar(&x), 2.0);
        assert_eq!(ss_bar(&x), 2.0);
        assert!((sigma_bar(&x) - (2.0f64 / 3.0).sqrt()).abs() < 1e-16);
        assert_eq!(sigma_bar_prime(&x).unwrap(), 1.0);
    }

    #[test]
    fn constant_sample_has_zero_spread() {
        let x = s(&[4.25; 7]);
        assert_eq!(mu_bar(&x), 4.25);
        assert_eq!(ss_bar(&x), 0.0);
        assert_eq!(sigma_bar_prime(&s(&[3.0, 3.0])).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
        assert!(sigma_bar_prime(&s(&[1.0])).is_err());
        assert!(State::new(0.0, 0.0).is_err());
        assert!(State::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn normal_probabilities() {
        let st = State::new(0.0, 1.0).unwrap();
        assert_eq!(normal_prob(st, &Interval::at_most(0.0).into()).unwrap(), 0.5);
        assert_eq!(normal_prob(st, &IntervalSet::real_line()).unwrap(), 1.0);
        let p = normal_prob(State::new(1.0, 2.0).unwrap(), &Interval::closed(1.0, 3.0).into()).unwrap();
        assert!((p - 0.341_344_746_068_542_9).abs() < 1e-14);
    }

    #[test]
    fn image_of_sum_of_squares_normalises() {
        let st = State::new(3.0, 1.7).unwrap();
        let p = image_prob_ss(st, 5, &Interval::open(0.0, f64::INFINITY).into()).unwrap();
        assert_eq!(p, 1.0);
        assert!(image_prob_ss(st, 1, &IntervalSet::real_line()).is_err());
    }
}
