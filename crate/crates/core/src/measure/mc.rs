//! Chunked Monte Carlo over uniform directions.
//!
//! Samples are drawn in fixed chunks of [`CHUNK`] directions, chunk `c`
//! from its own counter-based stream, and only integer hit counts are
//! reduced. Results are therefore bit-identical for any thread count.

use rayon::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{MeasureEstimate, Method};
use crate::error::{Error, Result};
use crate::geom::{Cone, MEMBERSHIP_TOL};
use crate::rng::{chunk_stream, stream_rng, CHUNK};

pub(crate) const MAX_DIM: usize = 16;

/// Linear functionals whose nonnegativity decides cone membership.
pub(crate) struct Membership {
    dim: usize,
    rows: Vec<f64>,
}

impl Membership {
    pub(crate) fn of(cone: &Cone) -> Self {
        let dim = cone.dim();
        let rows = match cone {
            // cone coordinates: solution of the generator-basis system
            Cone::Simplicial(c) => {
                let inv = c.inverse();
                (0..dim).flat_map(|i| (0..dim).map(move |j| inv[(i, j)])).collect()
            }
            Cone::Polyhedral(_) => cone.inward_normals().iter().flat_map(|n| n.iter().copied().collect::<Vec<_>>()).collect(),
        };
        Self { dim, rows }
    }

    #[inline]
    pub(crate) fn contains(&self, u: &[f64]) -> bool {
        self.rows
            .chunks_exact(self.dim)
            .all(|row| row.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() >= -MEMBERSHIP_TOL)
    }
}

#[inline]
pub(crate) fn sample_unit<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            n2 += *x * *x;
        }
        if n2 > 1e-24 {
            let inv = 1.0 / n2.sqrt();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::BadDim(dim));
    }
    Ok(())
}

/// Runs `visit` on `n` uniform directions of S^{dim-1} and sums the `m`
/// counters it increments.
pub(crate) fn count_directions<F>(dim: usize, n: u64, seed: u64, lane: u64, m: usize, visit: F) -> Vec<u64>
where
    F: Fn(&[f64], &mut [u64]) + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, chunk_stream(lane, c));
            let len = CHUNK.min(n - c * CHUNK);
            let mut counts = vec![0u64; m];
            let mut buf = [0.0; MAX_DIM];
            for _ in 0..len {
                sample_unit(&mut rng, &mut buf[..dim]);
                visit(&buf[..dim], &mut counts);
            }
            counts
        })
        .reduce(|| vec![0u64; m], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        })
}

fn common_dim(cones: &[Cone]) -> Result<usize> {
    let dim = cones.first().map(Cone::dim).ok_or_else(|| Error::BadShape("no cones given".into()))?;
    if cones.iter().any(|c| c.dim() != dim) {
        return Err(Error::BadShape("cones live in different dimensions".into()));
    }
    check_dim(dim)?;
    Ok(dim)
}

/// Fraction of `n` uniform directions inside `cone`.
pub fn solid_angle_mc(cone: &Cone, n: u64, seed: u64) -> Result<MeasureEstimate> {
    Ok(solid_angles_mc(std::slice::from_ref(cone), n, seed)?[0])
}

/// Measures several cones on one common direction set.
pub fn solid_angles_mc(cones: &[Cone], n: u64, seed: u64) -> Result<Vec<MeasureEstimate>> {
    if n == 0 {
        return Err(Error::BadShape("at least one sample is required".into()));
    }
    let dim = common_dim(cones)?;
    let tests: Vec<Membership> = cones.iter().map(Membership::of).collect();
    let counts = count_directions(dim, n, seed, 0, tests.len(), |u, acc| {
        for (t, a) in tests.iter().zip(acc.iter_mut()) {
            if t.contains(u) {
                *a += 1;
            }
        }
    });
    Ok(counts.into_iter().map(|h| MeasureEstimate::from_counts(h, n, Method::MonteCarlo, seed)).collect())
}

/// Two cones measured on the same directions, with the standard error of
/// their difference taken from the paired indicators.
#[derive(Debug, Clone, Copy)]
pub struct PairedDifference {
    pub first: MeasureEstimate,
    pub second: MeasureEstimate,
    /// `first - second`, normalized.
    pub difference: f64,
    pub stderr: f64,
}

pub fn paired_difference_mc(first: &Cone, second: &Cone, n: u64, seed: u64) -> Result<PairedDifference> {
    if n == 0 {
        return Err(Error::BadShape("at least one sample is required".into()));
    }
    let dim = common_dim(&[first.clone(), second.clone()])?;
    let (a, b) = (Membership::of(first), Membership::of(second));
    let c = count_directions(dim, n, seed, 0, 4, |u, acc| pair_visit(&a, &b, u, acc));
    Ok(paired_from_counts(&c, n, seed))
}

/// A materialized direction sample, identical to what the streaming
/// estimators draw for the same `(dim, n, seed)`. Used where one sample
/// set must be reused across many evaluations.
#[derive(Debug, Clone)]
pub struct DirectionSet {
    dim: usize,
    seed: u64,
    data: Vec<f64>,
}

impl DirectionSet {
    pub fn generate(dim: usize, n: u64, seed: u64) -> Result<Self> {
        check_dim(dim)?;
        if n == 0 {
            return Err(Error::BadShape("at least one sample is required".into()));
        }
        let chunks = n.div_ceil(CHUNK);
        let parts: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = stream_rng(seed, chunk_stream(0, c));
                let len = CHUNK.min(n - c * CHUNK) as usize;
                let mut out = vec![0.0; len * dim];
                for u in out.chunks_exact_mut(dim) {
                    sample_unit(&mut rng, u);
                }
                out
            })
            .collect();
        Ok(Self { dim, seed, data: parts.concat() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> u64 {
        (self.data.len() / self.dim) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn count<F>(&self, m: usize, visit: F) -> Vec<u64>
    where
        F: Fn(&[f64], &mut [u64]) + Sync,
    {
        let dim = self.dim;
        self.data
            .par_chunks(CHUNK as usize * dim)
            .map(|part| {
                let mut acc = vec![0u64; m];
                part.chunks_exact(dim).for_each(|u| visit(u, &mut acc));
                acc
            })
            .reduce(|| vec![0u64; m], |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            })
    }

    fn check(&self, cones: &[Cone]) -> Result<()> {
        let dim = common_dim(cones)?;
        if dim != self.dim {
            return Err(Error::BadDim(dim));
        }
        Ok(())
    }

    pub fn measure(&self, cones: &[Cone]) -> Result<Vec<MeasureEstimate>> {
        self.check(cones)?;
        let tests: Vec<Membership> = cones.iter().map(Membership::of).collect();
        let counts = self.count(tests.len(), |u, acc| {
            for (t, a) in tests.iter().zip(acc.iter_mut()) {
                if t.contains(u) {
                    *a += 1;
                }
            }
        });
        let n = self.len();
        Ok(counts.into_iter().map(|h| MeasureEstimate::from_counts(h, n, Method::MonteCarlo, self.seed)).collect())
    }

    pub fn paired(&self, first: &Cone, second: &Cone) -> Result<PairedDifference> {
        self.check(&[first.clone(), second.clone()])?;
        let (a, b) = (Membership::of(first), Membership::of(second));
        let c = self.count(4, |u, acc| pair_visit(&a, &b, u, acc));
        Ok(paired_from_counts(&c, self.len(), self.seed))
    }
}

#[inline]
fn pair_visit(a: &Membership, b: &Membership, u: &[f64], acc: &mut [u64]) {
    let (ia, ib) = (a.contains(u), b.contains(u));
    acc[0] += ia as u64;
    acc[1] += ib as u64;
    acc[2] += (ia && !ib) as u64;
    acc[3] += (ib && !ia) as u64;
}

fn paired_from_counts(c: &[u64], n: u64, seed: u64) -> PairedDifference {
    let nf = n as f64;
    let difference = (c[2] as f64 - c[3] as f64) / nf;
    let second_moment = (c[2] + c[3]) as f64 / nf;
    let var = (second_moment - difference * difference).max(0.0);
    PairedDifference {
        first: MeasureEstimate::from_counts(c[0], n, Method::MonteCarlo, seed),
        second: MeasureEstimate::from_counts(c[1], n, Method::MonteCarlo, seed),
        difference,
        stderr: (var / nf).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::SimplicialCone;

    #[test]
    fn orthants() {
        let e3 = solid_angle_mc(&SimplicialCone::orthant(3).into(), 1_000_000, 1).unwrap();
        assert!(e3.agrees_with(0.125, 3.0), "{e3:?}");
        let e4 = solid_angle_mc(&SimplicialCone::orthant(4).into(), 1_000_000, 2).unwrap();
        assert!(e4.agrees_with(0.0625, 3.0), "{e4:?}");
        assert!((e4.stderr - 2.42e-4).abs() < 1e-5);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let c: Cone = SimplicialCone::orthant(4).into();
        let a = solid_angle_mc(&c, 200_000, 5).unwrap();
        let b = solid_angle_mc(&c, 200_000, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let c: Cone = SimplicialCone::orthant(3).into();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| solid_angle_mc(&c, 300_000, 8).unwrap());
        let b = four.install(|| solid_angle_mc(&c, 300_000, 8).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn stored_directions_match_streaming() {
        let c: Cone = SimplicialCone::orthant(4).into();
        let set = DirectionSet::generate(4, 150_000, 21).unwrap();
        assert_eq!(set.measure(std::slice::from_ref(&c)).unwrap()[0], solid_angle_mc(&c, 150_000, 21).unwrap());
    }

    #[test]
    fn paired_difference_of_identical_cones_is_zero() {
        let c: Cone = SimplicialCone::orthant(3).into();
        let p = paired_difference_mc(&c, &c, 10_000, 1).unwrap();
        assert_eq!(p.difference, 0.0);
        assert_eq!(p.stderr, 0.0);
    }

    #[test]
    fn stored_pairs_match_streaming() {
        let a: Cone = SimplicialCone::orthant(3).into();
        let b: Cone = SimplicialCone::new(vec![
            crate::linalg::Point::from_row_slice(&[1.0, 0.1, 0.0]),
            crate::linalg::Point::from_row_slice(&[0.0, 1.0, 0.2]),
            crate::linalg::Point::from_row_slice(&[0.1, 0.0, 1.0]),
        ])
        .unwrap()
        .into();
        let set = DirectionSet::generate(3, 100_000, 4).unwrap();
        let p = set.paired(&a, &b).unwrap();
        let q = paired_difference_mc(&a, &b, 100_000, 4).unwrap();
        assert_eq!(p.difference, q.difference);
        assert_eq!(p.stderr, q.stderr);
        assert!((p.difference - (p.first.normalized - p.second.normalized)).abs() < 1e-15);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(solid_angle_mc(&SimplicialCone::orthant(3).into(), 0, 1).is_err());
    }
}
