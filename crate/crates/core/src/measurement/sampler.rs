//! Reproducible Gaussian sampling with one independent stream per replication.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Measured, Sample, State, Truth};
use crate::error::{Error, Result};

/// A seed from which replication `j` derives its own ChaCha stream. Stream
/// `j` never depends on how many other streams were used or in which order,
/// so work can be split across threads freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    seed: u64,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, j: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(j);
        rng
    }
}

/// `n` independent draws from `N(μ, σ²)`.
pub fn draw<R: Rng + ?Sized>(state: State, n: usize, rng: &mut R) -> Result<Sample> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let values = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            state.mu + state.sigma * z
        })
        .collect();
    Sample::new(values)
}

/// Draws a measured value for `truth` from `rng`: `n` values for a single
/// state, or independent blocks of `n` and `m` for a pair of states.
pub fn draw_measured<R: Rng + ?Sized>(truth: &Truth, n: usize, m: Option<usize>, rng: &mut R) -> Result<Measured> {
    match truth {
        Truth::One(state) => Ok(Measured::One(draw(*state, n, rng)?)),
        Truth::Two(pair) => {
            let m = m.ok_or_else(|| Error::InvalidArgument("two-sample truth needs a second sample size".into()))?;
            let x = draw(pair.first, n, rng)?;
            let y = draw(pair.second, m, rng)?;
            Ok(Measured::Two(x, y))
        }
    }
}

/// Convenience: a measured value drawn from stream 0 of `seed`.
pub fn sample(truth: &Truth, n: usize, m: Option<usize>, seed: u64) -> Result<Measured> {
    draw_measured(truth, n, m, &mut Streams::new(seed).stream(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_values() {
        let t = Truth::One(State::new(1.0, 2.0).unwrap());
        assert_eq!(sample(&t, 20, None, 7).unwrap(), sample(&t, 20, None, 7).unwrap());
        assert_ne!(sample(&t, 20, None, 7).unwrap(), sample(&t, 20, None, 8).unwrap());
    }

    #[test]
    fn streams_are_order_independent() {
        let s = Streams::new(42);
        let st = State::new(0.0, 1.0).unwrap();
        let later = draw(st, 5, &mut s.stream(3)).unwrap();
        let _ = draw(st, 5, &mut s.stream(1)).unwrap();
        assert_eq!(draw(st, 5, &mut s.stream(3)).unwrap(), later);
    }

    #[test]
    fn empirical_mean_in_clt_band() {
        let t = Truth::One(State::new(0.0, 1.0).unwrap());
        let Measured::One(x) = sample(&t, 1_000_000, None, 2024).unwrap() else { unreachable!() };
        assert!(super::super::mu_bar(&x).abs() < 4.0 / 1000.0);
    }
}
