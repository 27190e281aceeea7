//! Crofton estimators: boundary measure from the probability that a random
//! great circle meets a cone.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::mc::{sample_unit, Membership, MAX_DIM};
use super::{MeasureEstimate, Method};
use crate::error::{Error, Result};
use crate::geom::{Cone, SimplicialCone};
use crate::linalg::Point;
use crate::polarity::polar;
use crate::rng::{chunk_stream, stream_rng, CHUNK};

const MAX_CONSTRAINTS: usize = 64;
/// Below this, a constraint is identically satisfied on the circle.
const AMPLITUDE_TOL: f64 = 1e-15;

/// A cone as an intersection of half-spaces `n_k · x >= 0`.
#[derive(Debug, Clone)]
pub struct ConeConstraints {
    dim: usize,
    rows: Vec<f64>,
}

impl ConeConstraints {
    pub fn new(normals: &[Point]) -> Result<Self> {
        let dim = normals.first().map(|n| n.len()).ok_or_else(|| Error::BadShape("no constraints".into()))?;
        if normals.len() > MAX_CONSTRAINTS {
            return Err(Error::BadShape(format!("at most {MAX_CONSTRAINTS} constraints are supported")));
        }
        if normals.iter().any(|n| n.len() != dim) {
            return Err(Error::BadShape("constraints of mixed dimension".into()));
        }
        Ok(Self { dim, rows: normals.iter().flat_map(|n| n.iter().copied().collect::<Vec<_>>()).collect() })
    }

    pub fn half_space(normal: Point) -> Result<Self> {
        Self::new(&[normal])
    }

    pub fn from_cone(cone: &Cone) -> Self {
        Self::new(&cone.inward_normals()).expect("cone normals are well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Whether the great circle through orthonormal `e1`, `e2` meets the cone.
    ///
    /// On the circle each constraint reads `r cos(θ - φ) >= 0`, a closed
    /// half-circle centred at `φ`; the half-circles share a point iff the
    /// centres fit in a half-circle, i.e. some cyclic gap reaches π.
    #[inline]
    pub fn meets_circle(&self, e1: &[f64], e2: &[f64]) -> bool {
        let mut phi = [0.0; MAX_CONSTRAINTS];
        let mut k = 0;
        for row in self.rows.chunks_exact(self.dim) {
            let (mut a, mut b) = (0.0, 0.0);
            for ((n, x), y) in row.iter().zip(e1).zip(e2) {
                a += n * x;
                b += n * y;
            }
            if a.hypot(b) > AMPLITUDE_TOL {
                phi[k] = b.atan2(a);
                k += 1;
            }
        }
        if k <= 1 {
            return true;
        }
        let phi = &mut phi[..k];
        phi.sort_unstable_by(f64::total_cmp);
        let wrap = phi[0] + 2.0 * PI - phi[k - 1];
        wrap >= PI || phi.windows(2).any(|w| w[1] - w[0] >= PI)
    }
}

/// Two orthonormal vectors spanning a uniformly random 2-plane.
pub fn random_plane<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<[Point; 2]> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::BadDim(dim));
    }
    let (mut a, mut b) = (vec![0.0; dim], vec![0.0; dim]);
    sample_plane(rng, &mut a, &mut b);
    Ok([Point::from_vec(a), Point::from_vec(b)])
}

#[inline]
fn sample_plane<R: Rng + ?Sized>(rng: &mut R, e1: &mut [f64], e2: &mut [f64]) {
    loop {
        sample_unit(rng, e1);
        sample_unit(rng, e2);
        let d: f64 = e1.iter().zip(e2.iter()).map(|(x, y)| x * y).sum();
        e2.iter_mut().zip(e1.iter()).for_each(|(y, x)| *y -= d * x);
        let n = e2.iter().map(|y| y * y).sum::<f64>().sqrt();
        if n >= 1e-8 {
            e2.iter_mut().for_each(|y| *y /= n);
            return;
        }
    }
}

/// Orthonormal completion of `e1`, `e2` in R^d by Gram–Schmidt on the axes,
/// taking the axis with the largest residual at each step.
fn complete_basis(e1: &[f64], e2: &[f64], out: &mut [[f64; MAX_DIM]]) {
    let d = e1.len();
    let mut basis: Vec<[f64; MAX_DIM]> = Vec::with_capacity(d);
    let push = |v: &[f64], basis: &mut Vec<[f64; MAX_DIM]>| {
        let mut w = [0.0; MAX_DIM];
        w[..d].copy_from_slice(v);
        basis.push(w);
    };
    push(e1, &mut basis);
    push(e2, &mut basis);
    for slot in out.iter_mut().take(d - 2) {
        let mut best = ([0.0; MAX_DIM], -1.0);
        for axis in 0..d {
            let mut r = [0.0; MAX_DIM];
            r[axis] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let c: f64 = (0..d).map(|i| r[i] * b[i]).sum();
                    (0..d).for_each(|i| r[i] -= c * b[i]);
                }
            }
            let n = (0..d).map(|i| r[i] * r[i]).sum::<f64>().sqrt();
            if n > best.1 {
                best = (r, n);
            }
        }
        let (mut r, n) = best;
        (0..d).for_each(|i| r[i] /= n);
        *slot = r;
        basis.push(r);
    }
}

fn count_planes<F>(dim: usize, n: u64, seed: u64, m: usize, visit: F) -> Vec<u64>
where
    F: Fn(&[f64], &[f64], &mut [u64]) + Sync,
{
    (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, chunk_stream(1, c));
            let mut acc = vec![0u64; m];
            let (mut e1, mut e2) = ([0.0; MAX_DIM], [0.0; MAX_DIM]);
            for _ in 0..CHUNK.min(n - c * CHUNK) {
                sample_plane(&mut rng, &mut e1[..dim], &mut e2[..dim]);
                visit(&e1[..dim], &e2[..dim], &mut acc);
            }
            acc
        })
        .reduce(|| vec![0u64; m], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CroftonEstimate {
    pub hit: MeasureEstimate,
    /// Boundary measure in natural units: perimeter on S², area on S³.
    pub boundary: f64,
    pub boundary_stderr: f64,
}

fn calibration(dim: usize) -> Result<f64> {
    match dim {
        3 => Ok(2.0 * PI),
        4 => Ok(4.0 * PI),
        d => Err(Error::BadDim(d)),
    }
}

pub fn crofton_hit_probability(cone: &ConeConstraints, n: u64, seed: u64) -> Result<CroftonEstimate> {
    let k = calibration(cone.dim)?;
    if n == 0 {
        return Err(Error::BadShape("at least one sample is required".into()));
    }
    let hits = count_planes(cone.dim, n, seed, 1, |e1, e2, acc| acc[0] += cone.meets_circle(e1, e2) as u64)[0];
    let hit = MeasureEstimate::from_counts(hits, n, Method::Crofton, seed);
    Ok(CroftonEstimate { hit, boundary: k * hit.normalized, boundary_stderr: k * hit.stderr })
}

/// Per-sample check that a random plane P meets the cone or P^⊥ meets the
/// polar cone, and never both. On S² the complement is a line, meeting a
/// cone iff one of its two directions is inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarityReport {
    pub samples: u64,
    pub seed: u64,
    pub hits_cone: u64,
    pub hits_polar: u64,
    pub both: u64,
    pub neither: u64,
}

impl PolarityReport {
    pub fn violations(&self) -> u64 {
        self.both + self.neither
    }

    /// Fractions of samples whose test object meets the cone and the polar.
    pub fn hit_fractions(&self) -> (f64, f64) {
        let n = self.samples as f64;
        (self.hits_cone as f64 / n, self.hits_polar as f64 / n)
    }
}

pub fn crofton_polarity_check(cone: &SimplicialCone, n: u64, seed: u64) -> Result<PolarityReport> {
    let dim = cone.dim();
    calibration(dim)?;
    if n == 0 {
        return Err(Error::BadShape("at least one sample is required".into()));
    }
    let x: Cone = cone.clone().into();
    let polar = polar(&x)?;
    let x_c = ConeConstraints::from_cone(&x);
    let x_m = Membership::of(&x);
    let p_c = ConeConstraints::from_cone(&polar);
    let c = count_planes(dim, n, seed, 4, |e1, e2, acc| {
        let mut perp = [[0.0; MAX_DIM]; 2];
        complete_basis(e1, e2, &mut perp[..dim - 2]);
        let a = if dim == 3 {
            // plane P against the polar, complement line against the cone
            let l = &perp[0][..3];
            let neg = [-l[0], -l[1], -l[2]];
            let hit_polar = p_c.meets_circle(e1, e2);
            let hit_line = x_m.contains(l) || x_m.contains(&neg);
            acc[1] += hit_polar as u64;
            (hit_line, hit_polar)
        } else {
            let hx = x_c.meets_circle(e1, e2);
            let hp = p_c.meets_circle(&perp[0][..dim], &perp[1][..dim]);
            acc[1] += hp as u64;
            (hx, hp)
        };
        acc[0] += a.0 as u64;
        acc[2] += (a.0 && a.1) as u64;
        acc[3] += (!a.0 && !a.1) as u64;
    });
    Ok(PolarityReport { samples: n, seed, hits_cone: c[0], hits_polar: c[1], both: c[2], neither: c[3] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn half_space_is_always_hit() {
        let c = ConeConstraints::half_space(Point::from_vec(vec![0.0, 0.0, 1.0])).unwrap();
        let e = crofton_hit_probability(&c, 10_000, 1).unwrap();
        assert_eq!(e.hit.normalized, 1.0);
        assert!((e.boundary - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn octant_perimeter() {
        let c = ConeConstraints::from_cone(&SimplicialCone::orthant(3).into());
        let e = crofton_hit_probability(&c, 1_000_000, 3).unwrap();
        assert!((e.boundary - 1.5 * PI).abs() < 4.0 * e.boundary_stderr, "{e:?}");
    }

    #[test]
    fn orthant_boundary_area_in_four_dimensions() {
        let c = ConeConstraints::from_cone(&SimplicialCone::orthant(4).into());
        let e = crofton_hit_probability(&c, 1_000_000, 4).unwrap();
        assert!((e.boundary - 2.0 * PI).abs() < 4.0 * e.boundary_stderr, "{e:?}");
    }

    #[test]
    fn planes_are_orthonormal() {
        let mut rng = stream_rng(9, 0);
        for _ in 0..100 {
            let [a, b] = random_plane(&mut rng, 4).unwrap();
            assert!((a.norm() - 1.0).abs() < 1e-14 && (b.norm() - 1.0).abs() < 1e-14);
            assert!(a.dot(&b).abs() < 1e-14);
        }
    }

    #[test]
    fn completion_is_orthonormal() {
        let mut rng = stream_rng(10, 0);
        let [a, b] = random_plane(&mut rng, 4).unwrap();
        let mut out = [[0.0; MAX_DIM]; 2];
        complete_basis(a.as_slice(), b.as_slice(), &mut out);
        let v: Vec<Point> = vec![a, b, Point::from_row_slice(&out[0][..4]), Point::from_row_slice(&out[1][..4])];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v[i].dot(&v[j]) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn polarity_never_violated_for_orthants() {
        for d in [3, 4] {
            let r = crofton_polarity_check(&SimplicialCone::orthant(d), 200_000, 2).unwrap();
            assert_eq!(r.violations(), 0, "{r:?}");
        }
    }
}
