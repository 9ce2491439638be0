//! Seeded randomness. Every sampler takes an explicit generator so that
//! reports are reproducible from a single `u64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::{q, Q};

pub type JkaRng = ChaCha8Rng;

pub fn rng(seed: u64) -> JkaRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sub-task `tag`.
pub fn substream(seed: u64, tag: u64) -> JkaRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(tag);
    r
}

pub fn small_rational(rng: &mut JkaRng) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn rational_vec(rng: &mut JkaRng, n: usize) -> Vec<Q> {
    (0..n).map(|_| small_rational(rng)).collect()
}

pub fn gaussian_vec(rng: &mut JkaRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}
