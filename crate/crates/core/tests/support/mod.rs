#![allow(dead_code)]

pub mod oracle;

use semidist::framework::{CatalogTest, Nuisance, Quantity, TestProblem};
use semidist::measurement::{draw_measured, Measured, State, Streams, Truth, TwoSampleState};

/// A catalog problem with every known sigma equal to one.
pub fn problem(test: CatalogTest, n: usize, m: usize) -> TestProblem {
    let nuisance = match test.known_sigmas() {
        0 => Nuisance::None,
        1 => Nuisance::Sigma(1.0),
        _ => Nuisance::Sigmas(1.0, 1.0),
    };
    TestProblem::new(test, n, test.is_two_sample().then_some(m), nuisance).unwrap()
}

/// `(0, 1)`, or `((0, 1), (0, 1))` for two-sample tests.
pub fn standard_truth(test: CatalogTest) -> Truth {
    let s = State::new(0.0, 1.0).unwrap();
    if test.is_two_sample() {
        Truth::Two(TwoSampleState::new(s, s).unwrap())
    } else {
        Truth::One(s)
    }
}

/// `π` of the standard truth.
pub fn standard_value(test: CatalogTest) -> f64 {
    match test.quantity() {
        Quantity::Mu | Quantity::MuDiff => 0.0,
        Quantity::Sigma | Quantity::SigmaRatio => 1.0,
    }
}

/// Data set `j` from a truth whose parameters also vary with `j`, so the
/// estimates land on both sides of the standard value.
pub fn varied_data(test: CatalogTest, p: &TestProblem, seed: u64, j: u64) -> Measured {
    let streams = Streams::new(seed);
    let mut rng = streams.stream(j);
    let shift = ((j % 17) as f64 - 8.0) / 8.0;
    let spread = 0.5 + (j % 5) as f64 * 0.25;
    let s = State::new(shift, spread).unwrap();
    let truth = if test.is_two_sample() {
        Truth::Two(TwoSampleState::new(s, State::new(-0.5 * shift, 1.0).unwrap()).unwrap())
    } else {
        Truth::One(s)
    };
    draw_measured(&truth, p.n(), p.m(), &mut rng).unwrap()
}

/// Maximiser of `ln L_x(μ, σ)` over `{(μ, σ) : keep(μ, σ)}` by a coarse grid
/// over `[μ_lo, μ_hi] × [σ_lo, σ_hi]` followed by finer grids, each spanning
/// twenty cells either side of the previous best point. Returns the maximiser and the final grid step in each axis.
pub fn grid_mle(
    x: &[f64],
    keep: &dyn Fn(f64, f64) -> bool,
    mu: (f64, f64),
    sigma: (f64, f64),
) -> ((f64, f64), (f64, f64)) {
    let n = x.len() as f64;
    let ll = |m: f64, s: f64| -> f64 {
        let q: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
        -n * s.ln() - q / (2.0 * s * s)
    };
    let k = 200;
    let (mut mlo, mut mhi, mut slo, mut shi) = (mu.0, mu.1, sigma.0, sigma.1);
    let mut best = (f64::NAN, f64::NAN);
    let mut steps = (0.0, 0.0);
    for _ in 0..6 {
        let (hm, hs) = ((mhi - mlo) / k as f64, (shi - slo) / k as f64);
        let mut top = f64::NEG_INFINITY;
        for i in 0..=k {
            for j in 0..=k {
                let (m, s) = (mlo + i as f64 * hm, slo + j as f64 * hs);
                if s > 0.0 && keep(m, s) {
                    let v = ll(m, s);
                    if v > top {
                        top = v;
                        best = (m, s);
                    }
                }
            }
        }
        steps = (hm, hs);
        mlo = best.0 - 20.0 * hm;
        mhi = best.0 + 20.0 * hm;
        slo = (best.1 - 20.0 * hs).max(1e-9);
        shi = best.1 + 20.0 * hs;
    }
    (best, steps)
}
