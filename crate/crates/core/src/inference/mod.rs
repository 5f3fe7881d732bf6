//! Maximum likelihood for the normal model, with optional constraints on the
//! state, and the likelihood-ratio test for the mean.

mod lrt;
mod nelder_mead;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub use lrt::{calibrate_epsilon, lrt_lambda, lrt_level_set, lrt_region, LrtRegion, MeanModel};

use crate::error::{Error, Result};
use crate::measurement::{mu_bar, sigma_bar, ss_bar, Sample, State};

/// Smallest standard deviation the numerical maximiser will consider.
pub const SIGMA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `μ ≤ μ₀`
    AtMost,
    /// `μ ≥ μ₀`
    AtLeast,
}

/// A constraint set `K ⊆ Ω` for the maximisation.
#[derive(Clone)]
pub enum ParameterRegion {
    Full,
    MuFixed(f64),
    MuHalfLine { mu0: f64, side: Side },
    SigmaFixed(f64),
    /// An arbitrary membership test with a known member to start from.
    Custom { contains: Arc<dyn Fn(State) -> bool + Send + Sync>, start: State },
}

impl fmt::Debug for ParameterRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Full => write!(f, "Full"),
            Self::MuFixed(m) => write!(f, "MuFixed({m})"),
            Self::MuHalfLine { mu0, side } => write!(f, "MuHalfLine {{ mu0: {mu0}, side: {side:?} }}"),
            Self::SigmaFixed(s) => write!(f, "SigmaFixed({s})"),
            Self::Custom { start, .. } => write!(f, "Custom {{ start: {start:?} }}"),
        }
    }
}

impl ParameterRegion {
    pub fn custom(contains: impl Fn(State) -> bool + Send + Sync + 'static, start: State) -> Self {
        Self::Custom { contains: Arc::new(contains), start }
    }

    pub fn contains(&self, s: State) -> bool {
        if s.validated().is_err() {
            return false;
        }
        match self {
            Self::Full => true,
            Self::MuFixed(m) => s.mu == *m,
            Self::MuHalfLine { mu0, side: Side::AtMost } => s.mu <= *mu0,
            Self::MuHalfLine { mu0, side: Side::AtLeast } => s.mu >= *mu0,
            Self::SigmaFixed(sig) => s.sigma == *sig,
            Self::Custom { contains, .. } => contains(s),
        }
    }
}

/// `ln L_x(μ, σ) = −n ln σ − (n/2) ln 2π − Σ(x_k − μ)²/(2σ²)`.
pub fn log_likelihood(x: &Sample, state: State) -> Result<f64> {
    let s = state.validated()?;
    let n = x.len() as f64;
    let dev = mu_bar(x) - s.mu;
    let sq = ss_bar(x) + n * dev * dev;
    Ok(-n * s.sigma.ln() - 0.5 * n * (2.0 * PI).ln() - sq / (2.0 * s.sigma * s.sigma))
}

/// Log-likelihood and its ratio to the maximum over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodValue {
    pub log_likelihood: f64,
    pub normalized_ratio: f64,
}

/// Likelihood of `state` relative to the best state in `region`.
pub fn likelihood(x: &Sample, state: State, region: &ParameterRegion) -> Result<LikelihoodValue> {
    if !region.contains(state) {
        return Err(Error::InvalidState(format!("{state:?} lies outside {region:?}")));
    }
    let ll = log_likelihood(x, state)?;
    let best = log_likelihood(x, mle_normal(x, region)?)?;
    Ok(LikelihoodValue { log_likelihood: ll, normalized_ratio: (ll - best).exp().min(1.0) })
}

/// `L_x(ω) / sup_Ω L_x`, in `[0, 1]` and equal to 1 at `(μ̄(x), σ̄(x))`.
pub fn normalized_likelihood(x: &Sample, state: State) -> Result<f64> {
    let best = mle_normal(x, &ParameterRegion::Full)?;
    Ok((log_likelihood(x, state)? - log_likelihood(x, best)?).exp().min(1.0))
}

fn sigma_about(x: &Sample, mu: f64) -> f64 {
    let n = x.len() as f64;
    let dev = mu_bar(x) - mu;
    ((ss_bar(x) + n * dev * dev) / n).sqrt()
}

fn nondegenerate(mu: f64, sigma: f64) -> Result<State> {
    if sigma > 0.0 {
        State::new(mu, sigma)
    } else {
        Err(Error::DegenerateSample("the likelihood is unbounded because the maximising sigma is zero"))
    }
}

/// The state maximising the likelihood of `x` within `region`.
pub fn mle_normal(x: &Sample, region: &ParameterRegion) -> Result<State> {
    match region {
        ParameterRegion::Full => nondegenerate(mu_bar(x), sigma_bar(x)),
        ParameterRegion::MuFixed(mu0) => {
            if !mu0.is_finite() {
                return Err(Error::EmptyRegion(format!("mu fixed at {mu0}")));
            }
            nondegenerate(*mu0, sigma_about(x, *mu0))
        }
        ParameterRegion::SigmaFixed(s) => {
            if !(s.is_finite() && *s > 0.0) {
                return Err(Error::EmptyRegion(format!("sigma fixed at {s}")));
            }
            State::new(mu_bar(x), *s)
        }
        ParameterRegion::MuHalfLine { mu0, side } => {
            if mu0.is_nan() {
                return Err(Error::EmptyRegion("mu half-line at NaN".into()));
            }
            let m = mu_bar(x);
            let mu = match side {
                Side::AtMost => m.min(*mu0),
                Side::AtLeast => m.max(*mu0),
            };
            nondegenerate(mu, sigma_about(x, mu))
        }
        ParameterRegion::Custom { contains, start } => {
            if !region.contains(*start) {
                return Err(Error::EmptyRegion(format!("the start state {start:?} is not in the custom region")));
            }
            maximize_custom(x, contains.as_ref(), *start)
        }
    }
}

fn maximize_custom(x: &Sample, contains: &(dyn Fn(State) -> bool + Send + Sync), start: State) -> Result<State> {
    let ll = |s: State| log_likelihood(x, s).unwrap_or(f64::NEG_INFINITY);
    let mut best = start;
    if let Some(s) = ray_search(x, contains) {
        if ll(s) > ll(best) {
            best = s;
        }
    }
    let polished = polish(x, contains, best);
    if ll(polished) > ll(best) {
        best = polished;
    }
    if !ll(best).is_finite() {
        return Err(Error::EmptyRegion("no state in the custom region has finite likelihood".into()));
    }
    State::new(best.mu, best.sigma)
}

/// Along any ray in `(μ, σ)` leaving the unconstrained maximiser the
/// log-likelihood strictly decreases, so the constrained maximum is the best
/// of the first members met along each ray. Rays are scanned on a grid of
/// angles and the best angle is then refined.
fn ray_search(x: &Sample, contains: &(dyn Fn(State) -> bool + Send + Sync)) -> Option<State> {
    let (m, s) = (mu_bar(x), sigma_bar(x));
    if !(s > 0.0) {
        return None;
    }
    let free = State { mu: m, sigma: s };
    if contains(free) {
        return Some(free);
    }
    let ll = |st: State| log_likelihood(x, st).unwrap_or(f64::NEG_INFINITY);
    let first_member = |phi: f64| -> Option<State> {
        let (dc, ds) = (phi.cos(), phi.sin());
        let at = |t: f64| State { mu: m + s * t * dc, sigma: s * (1.0 + t * ds) };
        // σ stays above the floor
        let t_max = if ds < 0.0 { (1.0 - SIGMA_FLOOR / s) / -ds } else { 1e4 };
        let mut prev = 0.0;
        let mut t = 1e-6f64.min(0.5 * t_max);
        while t <= t_max {
            if contains(at(t)) {
                let (mut out, mut inn) = (prev, t);
                for _ in 0..100 {
                    let mid = 0.5 * (out + inn);
                    if mid <= out || mid >= inn {
                        break;
                    }
                    if contains(at(mid)) {
                        inn = mid;
                    } else {
                        out = mid;
                    }
                }
                return Some(at(inn));
            }
            if t >= t_max {
                break;
            }
            prev = t;
            t = (t * 1.05).min(t_max);
        }
        None
    };
    let value = |phi: f64| first_member(phi).map_or(f64::NEG_INFINITY, ll);
    let k = 1440;
    let step = 2.0 * PI / k as f64;
    let (mut phi, mut top) = (0.0, f64::NEG_INFINITY);
    for i in 0..k {
        let a = i as f64 * step;
        let v = value(a);
        if v > top {
            (phi, top) = (a, v);
        }
    }
    if !top.is_finite() {
        return None;
    }
    // golden-section refinement within one grid step either side
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (phi - step, phi + step);
    for _ in 0..80 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if value(c) >= value(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let refined = 0.5 * (a + b);
    let pick = if value(refined) > top { refined } else { phi };
    first_member(pick)
}

/// Derivative-free search in `(μ, ln σ)` from `seed`, restarted from the
/// previous optimum until the value stops improving.
fn polish(x: &Sample, contains: &(dyn Fn(State) -> bool + Send + Sync), seed: State) -> State {
    let ln_floor = SIGMA_FLOOR.ln();
    let objective = |p: [f64; 2]| -> f64 {
        if p[1] < ln_floor || !p[0].is_finite() || !p[1].is_finite() {
            return f64::INFINITY;
        }
        let s = State { mu: p[0], sigma: p[1].exp() };
        if !contains(s) {
            return f64::INFINITY;
        }
        log_likelihood(x, s).map(|v| -v).unwrap_or(f64::INFINITY)
    };
    let scale = sigma_bar(x).max(seed.sigma).max(1e-6);
    let mut step = [0.25 * scale, 0.25];
    let mut best = [seed.mu, seed.sigma.ln()];
    let mut best_value = objective(best);
    for _ in 0..8 {
        let out = nelder_mead::minimize(objective, best, step, 20_000);
        let improved = out.value < best_value - 1e-14 * best_value.abs();
        if out.value <= best_value {
            best = out.point;
            best_value = out.value;
        }
        if !improved {
            break;
        }
        step = [step[0] * 0.5, step[1] * 0.5];
    }
    State { mu: best[0], sigma: best[1].exp() }
}
