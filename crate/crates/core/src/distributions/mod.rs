//! Densities, distribution functions and quantiles for the four sampling laws
//! the test catalog needs: standard normal, χ², Student t and Fisher F.
//!
//! Distribution functions are built on the regularized incomplete gamma
//! (normal, χ²) and incomplete beta (t, F). Quantiles are found by safeguarded
//! Newton iteration on the log of whichever tail is being inverted, so both
//! tails are resolved to full relative precision.

pub mod special;

use std::f64::consts::PI;

use crate::error::{check_level, Error, Result};
use crate::roots;
use special::{beta_pair, gamma_pq, ln_beta, ln_gamma};

/// Tail probabilities below this are refused rather than inverted.
pub const TAIL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    /// Standard normal N(0, 1).
    Normal,
    ChiSquared { dof: u32 },
    StudentT { dof: u32 },
    FisherF { dof1: u32, dof2: u32 },
}

/// Whether a critical value splits α over one tail or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tails {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    Lower,
    Upper,
}

impl Distribution {
    pub fn chi_squared(dof: u32) -> Result<Self> {
        Self::ChiSquared { dof }.validated()
    }

    pub fn student_t(dof: u32) -> Result<Self> {
        Self::StudentT { dof }.validated()
    }

    pub fn fisher_f(dof1: u32, dof2: u32) -> Result<Self> {
        Self::FisherF { dof1, dof2 }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Normal => true,
            Self::ChiSquared { dof } | Self::StudentT { dof } => dof >= 1,
            Self::FisherF { dof1, dof2 } => dof1 >= 1 && dof2 >= 1,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidDof(format!("{self:?}")))
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Normal => "the normal distribution",
            Self::ChiSquared { .. } => "the chi-squared distribution",
            Self::StudentT { .. } => "the t distribution",
            Self::FisherF { .. } => "the F distribution",
        }
    }

    fn has_positive_support(self) -> bool {
        matches!(self, Self::ChiSquared { .. } | Self::FisherF { .. })
    }

    /// Density at `x`. χ² and F require `x > 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.validated()?;
        if !x.is_finite() || (self.has_positive_support() && x <= 0.0) {
            return Err(Error::Domain { what: self.name(), value: x });
        }
        Ok(self.density(x))
    }

    /// Density with zero outside the support; assumes valid dof.
    fn density(self, x: f64) -> f64 {
        match self {
            Self::Normal => (-0.5 * x * x).exp() / (2.0 * PI).sqrt(),
            Self::ChiSquared { dof } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let h = 0.5 * dof as f64;
                ((h - 1.0) * x.ln() - 0.5 * x - h * std::f64::consts::LN_2 - ln_gamma(h)).exp()
            }
            Self::StudentT { dof } => {
                let v = dof as f64;
                let log_norm = ln_gamma(0.5 * (v + 1.0)) - ln_gamma(0.5 * v) - 0.5 * (v * PI).ln();
                (log_norm - 0.5 * (v + 1.0) * (x * x / v).ln_1p()).exp()
            }
            Self::FisherF { dof1, dof2 } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let (a, b) = (dof1 as f64, dof2 as f64);
                (0.5 * a * (a / b).ln() + (0.5 * a - 1.0) * x.ln()
                    - 0.5 * (a + b) * (a * x / b).ln_1p()
                    - ln_beta(0.5 * a, 0.5 * b))
                .exp()
            }
        }
    }

    /// `(P(X ≤ x), P(X > x))`, each computed without cancellation in its tail.
    fn tails(self, x: f64) -> Result<(f64, f64)> {
        match self {
            Self::Normal => {
                let (_, q) = gamma_pq(0.5, 0.5 * x * x)?;
                let small = 0.5 * q;
                Ok(if x < 0.0 { (small, 1.0 - small) } else { (1.0 - small, small) })
            }
            Self::ChiSquared { dof } => {
                if x <= 0.0 {
                    return Ok((0.0, 1.0));
                }
                gamma_pq(0.5 * dof as f64, 0.5 * x)
            }
            Self::StudentT { dof } => {
                let v = dof as f64;
                let (w, w_comp) = if x.abs() > 1e100 {
                    (v / x / x, 1.0)
                } else {
                    let t2 = x * x;
                    (v / (v + t2), t2 / (v + t2))
                };
                let (i, _) = beta_pair(0.5 * v, 0.5, w, w_comp)?;
                let small = 0.5 * i;
                Ok(if x < 0.0 { (small, 1.0 - small) } else { (1.0 - small, small) })
            }
            Self::FisherF { dof1, dof2 } => {
                if x <= 0.0 {
                    return Ok((0.0, 1.0));
                }
                let (a, b) = (dof1 as f64, dof2 as f64);
                let ax = a * x;
                let (z, z_comp) = if ax > 1e300 { (1.0, b / ax) } else { (ax / (ax + b), b / (ax + b)) };
                beta_pair(0.5 * a, 0.5 * b, z, z_comp)
            }
        }
    }

    /// P(X ≤ x).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validated()?;
        if x.is_nan() {
            return Err(Error::Domain { what: self.name(), value: x });
        }
        Ok(self.tails(x)?.0)
    }

    /// P(X > x).
    pub fn sf(&self, x: f64) -> Result<f64> {
        self.validated()?;
        if x.is_nan() {
            return Err(Error::Domain { what: self.name(), value: x });
        }
        Ok(self.tails(x)?.1)
    }

    /// The `x` with `cdf(x) = p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.validated()?;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        if p < 0.5 {
            self.invert_tail(Tail::Lower, p)
        } else {
            self.invert_tail(Tail::Upper, 1.0 - p)
        }
    }

    /// The `x` with `sf(x) = q`; keeps full precision for tiny upper tails.
    pub fn upper_quantile(&self, q: f64) -> Result<f64> {
        self.validated()?;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ProbabilityOutOfRange(q));
        }
        if q <= 0.5 {
            self.invert_tail(Tail::Upper, q)
        } else {
            self.invert_tail(Tail::Lower, 1.0 - q)
        }
    }

    /// Upper critical value: `upper_quantile(α)` for one tail, `α/2` for two.
    pub fn critical_value(&self, alpha: f64, tails: Tails) -> Result<f64> {
        check_level(alpha)?;
        match tails {
            Tails::One => self.upper_quantile(alpha),
            Tails::Two => self.upper_quantile(0.5 * alpha),
        }
    }

    fn invert_tail(self, tail: Tail, target: f64) -> Result<f64> {
        if target < TAIL_FLOOR {
            return Err(Error::TailUnderflow(target));
        }
        if !self.has_positive_support() {
            // symmetric about zero
            if target == 0.5 {
                return Ok(0.0);
            }
            return match tail {
                Tail::Lower => self.solve_tail(tail, target, false),
                Tail::Upper => Ok(-self.solve_tail(Tail::Lower, target, false)?),
            };
        }
        self.solve_tail(tail, target, true)
    }

    /// Solves `ln tail(x) = ln target`. With `log_scale` the unknown is
    /// `u = ln x`, which makes power-law behaviour near zero and in heavy upper
    /// tails close to linear for Newton.
    fn solve_tail(self, tail: Tail, target: f64, log_scale: bool) -> Result<f64> {
        let ln_target = target.ln();
        let to_x = |u: f64| if log_scale { u.exp() } else { u };
        let eval = |u: f64| -> (f64, f64) {
            let x = to_x(u);
            let Ok((lower, upper)) = self.tails(x) else {
                return (f64::NAN, f64::NAN);
            };
            let dens = self.density(x) * if log_scale { x } else { 1.0 };
            match tail {
                Tail::Lower => (lower.ln() - ln_target, dens / lower),
                Tail::Upper => (ln_target - upper.ln(), dens / upper),
            }
        };
        let sign = |u: f64| eval(u).0;

        let (mut lo, mut hi) = if log_scale { (-1.0, 1.0) } else { (-1.0, 0.0) };
        let mut step = 1.0;
        while sign(lo) >= 0.0 {
            step *= 2.0;
            lo -= step;
            if lo < -1e4 {
                return Err(Error::TailUnderflow(target));
            }
        }
        if log_scale {
            let mut step = 1.0;
            while sign(hi) <= 0.0 {
                step *= 2.0;
                hi += step;
                if hi > 1e4 {
                    return Err(Error::TailUnderflow(target));
                }
            }
        }
        let u = roots::solve_increasing(eval, lo, hi, 0.5 * (lo + hi))?;
        Ok(to_x(u))
    }
}

/// Two-sided (`α/2` per tail) or one-sided standard normal critical value.
pub fn z_alpha(alpha: f64, tails: Tails) -> Result<f64> {
    Distribution::Normal.critical_value(alpha, tails)
}

/// Scale applied to `e^{±2η}` in the log-interval equations: `n` for the
/// χ² law of `n σ̄² / σ²`, `1` for the F law of the sample-variance ratio.
fn log_interval_scale(dist: Distribution, n: u32) -> Result<f64> {
    match dist.validated()? {
        Distribution::ChiSquared { dof } => {
            if n < 2 {
                return Err(Error::SampleTooSmall { need: 2, got: n as usize });
            }
            if dof != n - 1 {
                return Err(Error::InvalidDof(format!("chi-squared dof {dof} does not equal n - 1 = {}", n - 1)));
            }
            Ok(n as f64)
        }
        Distribution::FisherF { dof1, .. } => {
            if dof1 + 1 != n {
                return Err(Error::InvalidDof(format!("F numerator dof {dof1} does not equal n - 1 = {}", n.saturating_sub(1))));
            }
            Ok(1.0)
        }
        other => Err(Error::InvalidArgument(format!(
            "log-interval radius needs a chi-squared or F law, got {other:?}"
        ))),
    }
}

/// Radius `η > 0` of the symmetric log interval with
/// `P(s·e^{−2η} < X < s·e^{2η}) = 1 − α`, where `s = n` for `χ²(n − 1)` and
/// `s = 1` for `F(n − 1, m − 1)`.
pub fn symmetric_log_interval_eta(dist: Distribution, n: u32, alpha: f64) -> Result<f64> {
    let alpha = check_level(alpha)?;
    let scale = log_interval_scale(dist, n)?;
    // excess(η) = α − P(outside) rises from α − 1 < 0 at η = 0 towards α > 0
    let eval = |eta: f64| -> (f64, f64) {
        let lo = scale * (-2.0 * eta).exp();
        let hi = scale * (2.0 * eta).exp();
        let (Ok((below, _)), Ok((_, above))) = (dist.tails(lo), dist.tails(hi)) else {
            return (f64::NAN, f64::NAN);
        };
        let slope = 2.0 * (hi * dist.density(hi) + lo * dist.density(lo));
        (alpha - below - above, slope)
    };
    let hi = roots::expand_upper(|eta| eval(eta).0, 0.0, 1.0)?;
    let eta = roots::solve_increasing(eval, 0.0, hi, 0.5 * hi)?;
    if eta > 0.0 {
        Ok(eta)
    } else {
        Err(Error::NoRoot("log-interval radius collapsed to zero".into()))
    }
}

/// Radius `η' > 0` with `P(X ≥ s·e^{2η'}) = α` (same `s` convention as
/// [`symmetric_log_interval_eta`]). Fails when the upper `α` quantile lies
/// below `s`, since no positive radius exists then.
pub fn upper_tail_log_eta(dist: Distribution, n: u32, alpha: f64) -> Result<f64> {
    let alpha = check_level(alpha)?;
    let scale = log_interval_scale(dist, n)?;
    let q = dist.upper_quantile(alpha)?;
    let eta = 0.5 * (q / scale).ln();
    if eta > 0.0 {
        Ok(eta)
    } else {
        Err(Error::NoRoot(format!(
            "upper {alpha} quantile {q} does not exceed the scale {scale}; no positive radius"
        )))
    }
}
