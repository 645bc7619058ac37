//! Seeded random streams, Monte Carlo means and random test inputs.
//!
//! Every estimate is split into fixed-size blocks; block `b` draws from
//! ChaCha8 stream `b` of the run seed, and block statistics are merged in
//! block order. Results depend only on `(seed, samples)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{L2Function, TimeGrid};
use crate::chaos::{ChaosVector, MultiIndex};
use crate::error::Result;

/// Samples per independent block.
pub const BLOCK_SIZE: usize = 8192;

/// Stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Self = Self {
        count: 0.0,
        mean: 0.0,
        m2: 0.0,
    };

    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if other.count == 0.0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }
}

/// `E[f(xi)]` for `xi ~ N(0, I_dim)`.
pub fn mc_mean<F>(dim: usize, samples: usize, seed: u64, f: F) -> MeanEstimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let partial: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let n = BLOCK_SIZE.min(samples - b * BLOCK_SIZE);
            let mut xi = vec![0.0; dim];
            let mut m = Moments::EMPTY;
            for _ in 0..n {
                for v in xi.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
                m.push(f(&xi));
            }
            m
        })
        .collect();
    let total = partial.into_iter().fold(Moments::EMPTY, Moments::merge);
    let variance = if total.count > 1.0 {
        total.m2 / (total.count - 1.0)
    } else {
        0.0
    };
    MeanEstimate {
        mean: total.mean,
        std_error: (variance / total.count.max(1.0)).sqrt(),
        samples,
        seed,
    }
}

/// Sparse random chaos vector: `terms` indices of random degree `<= max_degree`
/// with coefficients uniform in `[-1, 1]`. Indices above `order` are dropped
/// and flag the result as truncated.
pub fn random_chaos<R: Rng>(
    rng: &mut R,
    modes: usize,
    order: usize,
    max_degree: usize,
    terms: usize,
) -> Result<ChaosVector> {
    let draws: Vec<(MultiIndex, f64)> = (0..terms)
        .map(|_| {
            let degree = rng.random_range(0..=max_degree);
            let mut e = vec![0u8; modes];
            for _ in 0..degree {
                e[rng.random_range(0..modes)] += 1;
            }
            (MultiIndex::new(&e), rng.random_range(-1.0..=1.0))
        })
        .collect();
    ChaosVector::from_terms(modes, order, draws)
}

/// Random chaos vector whose top-degree term has exactly `degree`.
pub fn random_chaos_of_degree<R: Rng>(
    rng: &mut R,
    modes: usize,
    order: usize,
    degree: usize,
    terms: usize,
) -> Result<ChaosVector> {
    let mut e = vec![0u8; modes];
    for _ in 0..degree {
        e[rng.random_range(0..modes)] += 1;
    }
    let lead = ChaosVector::from_terms(modes, order, [(MultiIndex::new(&e), rng.random_range(0.5..=1.0))])?;
    let rest = random_chaos(rng, modes, order, degree, terms.saturating_sub(1))?;
    lead.add(&rest)
}

/// `L2Function` with coefficients uniform in `[-scale, scale]`.
pub fn random_l2<R: Rng>(rng: &mut R, grid: TimeGrid, scale: f64) -> L2Function {
    let coeffs = (0..grid.cells())
        .map(|_| rng.random_range(-scale..=scale))
        .collect();
    L2Function::new(grid, coeffs).expect("length matches grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 0).random()).collect();
        let mut r = stream_rng(7, 0);
        let b: u64 = r.random();
        assert_eq!(a[0], b);
        let c: u64 = stream_rng(7, 1).random();
        assert_ne!(b, c);
    }

    #[test]
    fn mc_mean_of_gaussian_moments() {
        let est = mc_mean(2, 50_000, 3, |x| x[0] * x[0] + x[1]);
        assert!((est.mean - 1.0).abs() < 4.0 * est.std_error);
        let again = mc_mean(2, 50_000, 3, |x| x[0] * x[0] + x[1]);
        assert_eq!(est, again);
    }

    #[test]
    fn partial_last_block() {
        let est = mc_mean(1, BLOCK_SIZE + 17, 1, |_| 2.0);
        assert_eq!(est.mean, 2.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn random_chaos_respects_degree() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..50 {
            let x = random_chaos(&mut rng, 4, 10, 3, 6).unwrap();
            assert!(x.degree() <= 3);
            assert!(!x.is_truncated());
            let y = random_chaos_of_degree(&mut rng, 4, 10, 3, 6).unwrap();
            assert_eq!(y.degree(), 3);
        }
        let z = random_chaos_of_degree(&mut rng, 2, 2, 3, 1).unwrap();
        assert!(z.is_truncated());
    }
}
