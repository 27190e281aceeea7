//! Seeded, counter-based random streams.
//!
//! Every consumer derives a ChaCha8 generator from `(seed, stream)`, so a
//! chunk of work always sees the same numbers no matter which thread runs it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::Point;

/// Samples per Monte Carlo chunk.
pub const CHUNK: u64 = 1 << 16;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for chunk `chunk` of lane `lane`.
pub fn chunk_stream(lane: u64, chunk: u64) -> u64 {
    (lane << 40) ^ chunk
}

/// Derives an independent sub-seed, e.g. per restart or per trial.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Point {
    Point::from_iterator(d, (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

/// Uniform direction on S^{d-1}.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Point {
    loop {
        let g = gaussian_vector(rng, d);
        let n = g.norm();
        if n > 1e-12 {
            return g / n;
        }
    }
}

/// Uniform point in the closed unit ball of R^d.
pub fn uniform_ball<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Point {
    let u: f64 = rng.random();
    unit_vector(rng, d) * u.powf(1.0 / d as f64)
}

/// Uniformly random orthogonal matrix (Haar measure on O(d)).
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, d: usize) -> nalgebra::DMatrix<f64> {
    let g = nalgebra::DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            for i in 0..d {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}
