//! Semi-distances on the parameter space Θ.

use crate::error::{Error, Result};
use crate::measurement::{sigma_bar_prime, Interval, IntervalSet, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiDistanceKind {
    /// `|θ₁ − θ₂|`
    Absolute,
    /// `|max(θ₁, θ₀) − max(θ₂, θ₀)|`
    HalfLineAbsolute,
    /// `|ln θ₁ − ln θ₂|` on `(0, ∞)`
    LogRatio,
    /// `|ln max(θ₁, θ₀) − ln max(θ₂, θ₀)|`
    HalfLineLogRatio,
    /// `|θ₁ − θ₂| / (σ̄′(x)/√n)`
    Studentized,
    /// `|max(θ₁, θ₀) − max(θ₂, θ₀)| / (σ̄′(x)/√n)`
    HalfLineStudentized,
}

impl SemiDistanceKind {
    pub fn is_half_line(self) -> bool {
        matches!(self, Self::HalfLineAbsolute | Self::HalfLineLogRatio | Self::HalfLineStudentized)
    }

    pub fn is_log(self) -> bool {
        matches!(self, Self::LogRatio | Self::HalfLineLogRatio)
    }

    pub fn is_studentized(self) -> bool {
        matches!(self, Self::Studentized | Self::HalfLineStudentized)
    }
}

/// A semi-distance with its reference point (half-line kinds) and its scale
/// (`σ̄′(x)/√n` for the data-dependent kinds, 1 otherwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiDistance {
    kind: SemiDistanceKind,
    theta0: f64,
    scale: f64,
}

impl SemiDistance {
    pub fn absolute() -> Self {
        Self { kind: SemiDistanceKind::Absolute, theta0: f64::NEG_INFINITY, scale: 1.0 }
    }

    pub fn half_line_absolute(theta0: f64) -> Self {
        Self { kind: SemiDistanceKind::HalfLineAbsolute, theta0, scale: 1.0 }
    }

    pub fn log_ratio() -> Self {
        Self { kind: SemiDistanceKind::LogRatio, theta0: 0.0, scale: 1.0 }
    }

    pub fn half_line_log_ratio(theta0: f64) -> Self {
        Self { kind: SemiDistanceKind::HalfLineLogRatio, theta0, scale: 1.0 }
    }

    /// Scale `σ̄′(x)/√n` taken from `x`; a constant sample has no scale.
    pub fn studentized(x: &Sample) -> Result<Self> {
        Ok(Self { kind: SemiDistanceKind::Studentized, theta0: f64::NEG_INFINITY, scale: studentized_scale(x)? })
    }

    pub fn half_line_studentized(theta0: f64, x: &Sample) -> Result<Self> {
        Ok(Self { kind: SemiDistanceKind::HalfLineStudentized, theta0, scale: studentized_scale(x)? })
    }

    /// Builds any kind directly from a reference point and a positive scale.
    pub fn with_parts(kind: SemiDistanceKind, theta0: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidArgument(format!("semi-distance scale must be positive, got {scale}")));
        }
        if kind.is_log() && kind.is_half_line() && !(theta0 > 0.0) {
            return Err(Error::Domain { what: "a log semi-distance reference point", value: theta0 });
        }
        let theta0 = if kind.is_half_line() { theta0 } else { f64::NEG_INFINITY };
        Ok(Self { kind, theta0, scale: if kind.is_studentized() { scale } else { 1.0 } })
    }

    pub fn kind(&self) -> SemiDistanceKind {
        self.kind
    }

    /// Reference point of a half-line kind.
    pub fn theta0(&self) -> Option<f64> {
        self.kind.is_half_line().then_some(self.theta0)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Same kind and scale, reference point moved to `theta0`.
    pub fn anchored_at(&self, theta0: f64) -> Self {
        Self { theta0: if self.kind.is_half_line() { theta0 } else { self.theta0 }, ..*self }
    }

    /// Coordinate in which the kind is a plain absolute difference.
    fn coord(&self, t: f64) -> f64 {
        if self.kind.is_log() {
            t.ln()
        } else {
            t
        }
    }

    fn uncoord(&self, u: f64) -> f64 {
        if self.kind.is_log() {
            u.exp()
        } else {
            u
        }
    }

    fn clip(&self, u: f64) -> f64 {
        if self.kind.is_half_line() {
            u.max(self.coord(self.theta0))
        } else {
            u
        }
    }

    /// `d(θ₁, θ₂)`. Log kinds return NaN off `(0, ∞)`, except that a zero
    /// argument is infinitely far from any positive one.
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        let (ua, ub) = (self.clip(self.coord(a)), self.clip(self.coord(b)));
        if ua == ub {
            return 0.0;
        }
        (ua - ub).abs() / self.scale
    }

    /// `{θ : d(θ, center) ≥ η}` as an interval set in Θ.
    pub fn far_set(&self, center: f64, eta: f64) -> IntervalSet {
        if !(eta > 0.0) {
            return self.domain();
        }
        let b = self.clip(self.coord(center));
        let r = eta * self.scale;
        let upper = Interval::at_least(self.uncoord(b + r));
        let floor = if self.kind.is_half_line() { self.coord(self.theta0) } else { f64::NEG_INFINITY };
        let lower_edge = b - r;
        let mut parts = vec![upper];
        if lower_edge >= floor {
            let lo = if self.kind.is_log() { Interval::new(0.0, self.uncoord(lower_edge), false, true) } else { Interval::at_most(lower_edge) };
            parts.push(lo);
        }
        IntervalSet::from_intervals(parts)
    }

    fn domain(&self) -> IntervalSet {
        if self.kind.is_log() {
            Interval::open(0.0, f64::INFINITY).into()
        } else {
            IntervalSet::real_line()
        }
    }
}

fn studentized_scale(x: &Sample) -> Result<f64> {
    let s = sigma_bar_prime(x)? / (x.len() as f64).sqrt();
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::DegenerateSample("all values are equal, so sigma-bar-prime is zero and the studentized distance is undefined"))
    }
}
