//! Independent numerical oracle used to freeze and check expected values.
//!
//! Nothing here calls into the library under test. Densities are written out
//! directly from their closed forms, log-gamma is a shifted Stirling series,
//! CDFs come from double-exponential quadrature of the density, and quantiles
//! are found by plain bisection on those quadrature CDFs.

#![allow(dead_code)]

use std::f64::consts::PI;

/// ln Γ(x) for x > 0: shift the argument above 20 with the recurrence, then
/// apply the Stirling series. Truncation error at x ≥ 20 is below 1e-17.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    while z < 20.0 {
        shift += z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
        - 1.0 / (1680.0 * z * z2 * z2 * z2)
        + 1.0 / (1188.0 * z * z2 * z2 * z2 * z2);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

#[derive(Clone, Copy, Debug)]
pub enum Law {
    Normal,
    ChiSquared(u32),
    StudentT(u32),
    FisherF(u32, u32),
}

impl Law {
    pub fn pdf(self, x: f64) -> f64 {
        match self {
            Law::Normal => (-0.5 * x * x).exp() / (2.0 * PI).sqrt(),
            Law::ChiSquared(k) => {
                if x <= 0.0 {
                    return 0.0;
                }
                let h = k as f64 / 2.0;
                ((h - 1.0) * x.ln() - x / 2.0 - h * 2f64.ln() - ln_gamma(h)).exp()
            }
            Law::StudentT(k) => {
                let v = k as f64;
                (ln_gamma((v + 1.0) / 2.0)
                    - ln_gamma(v / 2.0)
                    - 0.5 * (v * PI).ln()
                    - (v + 1.0) / 2.0 * (1.0 + x * x / v).ln())
                .exp()
            }
            Law::FisherF(a, b) => {
                if x <= 0.0 {
                    return 0.0;
                }
                let (d1, d2) = (a as f64, b as f64);
                let log_beta = ln_gamma(d1 / 2.0) + ln_gamma(d2 / 2.0) - ln_gamma((d1 + d2) / 2.0);
                (0.5 * d1 * (d1 / d2).ln() + (0.5 * d1 - 1.0) * x.ln()
                    - 0.5 * (d1 + d2) * (1.0 + d1 * x / d2).ln()
                    - log_beta)
                    .exp()
            }
        }
    }

    fn symmetric(self) -> bool {
        matches!(self, Law::Normal | Law::StudentT(_))
    }

    /// A point near the bulk of the mass, used to split tail integrals.
    fn center(self) -> f64 {
        match self {
            Law::Normal | Law::StudentT(_) => 0.0,
            Law::ChiSquared(k) => k as f64,
            Law::FisherF(_, _) => 1.0,
        }
    }

    /// P(X ≤ x) by quadrature of the density.
    pub fn cdf(self, x: f64) -> f64 {
        self.lower(x)
    }

    /// P(X > x) by quadrature of the density.
    pub fn sf(self, x: f64) -> f64 {
        self.upper(x)
    }

    fn lower(self, x: f64) -> f64 {
        if self.symmetric() {
            return if x <= 0.0 { self.upper(-x) } else { 1.0 - self.upper(x) };
        }
        if x <= 0.0 {
            return 0.0;
        }
        let f = |t: f64| self.pdf(t);
        let c = self.center();
        if x <= c {
            tanh_sinh(&f, 0.0, x)
        } else {
            tanh_sinh(&f, 0.0, c) + tanh_sinh(&f, c, x)
        }
    }

    fn upper(self, x: f64) -> f64 {
        let f = |t: f64| self.pdf(t);
        if self.symmetric() {
            if x < 0.0 {
                return 1.0 - self.upper(-x);
            }
            return exp_sinh(&f, x);
        }
        if x <= 0.0 {
            return 1.0;
        }
        let c = self.center();
        if x >= c {
            exp_sinh(&f, x)
        } else {
            tanh_sinh(&f, x, c) + exp_sinh(&f, c)
        }
    }

    /// Quantile by bisection on the quadrature CDF (lower tail) or survival
    /// function (upper tail), carried to the resolution of f64.
    pub fn quantile(self, p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0);
        let use_lower = p < 0.5;
        let below = |x: f64| {
            if use_lower {
                self.cdf(x) < p
            } else {
                self.sf(x) > 1.0 - p
            }
        };
        let (mut lo, mut hi) = match self {
            Law::Normal | Law::StudentT(_) => (-1.0, 1.0),
            _ => (0.0, 1.0),
        };
        while !below(lo) {
            lo = if lo < 0.0 { lo * 2.0 } else { lo - 1.0 };
        }
        while below(hi) {
            hi *= 2.0;
        }
        bisect(below, lo, hi)
    }

    pub fn mean_by_quadrature(self) -> f64 {
        let g = |t: f64| t * self.pdf(t);
        let c = self.center().max(1.0);
        tanh_sinh(&g, 0.0, c) + exp_sinh(&g, c)
    }

    pub fn total_mass(self) -> f64 {
        if self.symmetric() {
            2.0 * exp_sinh(&|t: f64| self.pdf(t), 0.0)
        } else {
            self.lower(self.center()) + self.upper(self.center())
        }
    }
}

/// Bisection for the crossing of a predicate that is true below the root.
pub fn bisect(below: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of an increasing function by bisection on a bracket.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    bisect(|x| f(x) < 0.0, lo, hi)
}

/// Tanh-sinh quadrature on a finite interval; tolerates integrable endpoint
/// singularities because nodes are placed by their distance to each end.
pub fn tanh_sinh(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    let term = |t: f64| -> f64 {
        let u = 0.5 * PI * t.sinh();
        let cu = u.cosh();
        let w = 0.5 * PI * t.cosh() / (cu * cu);
        // distance from the nearer endpoint, computed without cancellation
        let delta = half * 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let x = if t >= 0.0 { b - delta } else { a + delta };
        if x <= a || x >= b {
            return 0.0;
        }
        half * w * f(x)
    };
    double_exponential(term)
}

/// Exp-sinh quadrature on [a, ∞).
pub fn exp_sinh(f: &dyn Fn(f64) -> f64, a: f64) -> f64 {
    let term = |t: f64| -> f64 {
        let e = (0.5 * PI * t.sinh()).exp();
        let x = a + e;
        if !x.is_finite() || x == a {
            return 0.0;
        }
        let w = 0.5 * PI * t.cosh() * e;
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    double_exponential(term)
}

fn double_exponential(term: impl Fn(f64) -> f64) -> f64 {
    const T_MAX: f64 = 6.5;
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        let t = k as f64 * h;
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    for _level in 0..12 {
        h *= 0.5;
        let mut added = 0.0;
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            let t = k as f64 * h;
            added += term(t) + term(-t);
            k += 2;
        }
        sum += added;
        let next = sum * h;
        let converged = (next - estimate).abs() <= 1e-15 * next.abs() + 1e-300;
        estimate = next;
        if converged && h < 0.05 {
            break;
        }
    }
    estimate
}
