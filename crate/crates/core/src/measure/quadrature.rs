//! Deterministic volume of a spherical tetrahedron on S³.
//!
//! In geodesic polar coordinates about the apex, the volume is
//! `∫ (R/2 - sin 2R / 4) dω` over the apex's vertex figure, where `R(ω)` is
//! the distance to the opposite face along direction `ω`. The figure is a
//! spherical triangle in the tangent space, split adaptively at geodesic
//! midpoints; each piece is integrated through its radial projection onto
//! the flat triangle with the same corners, a Duffy collapse and
//! Gauss–Legendre rules.

use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3};

use super::MeasureEstimate;
use super::Method;
use crate::error::{degenerate, Error, Result};
use crate::geom::SimplicialCone;
use crate::linalg::{hyperplane_normal, orthogonal_complement, Point};

const ORDER: usize = 12;
const MAX_DEPTH: u32 = 10;
const REL_TOL: f64 = 1e-14;

fn gauss_legendre() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let (mut x, mut w) = ([0.0; ORDER], [0.0; ORDER]);
        let n = ORDER as f64;
        for i in 0..ORDER {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, t);
                for k in 2..=ORDER {
                    let k = k as f64;
                    (p0, p1) = (p1, ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k);
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                let step = p1 / dp;
                t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            // map [-1, 1] to [0, 1]
            x[i] = 0.5 * (t + 1.0);
            w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
        }
        (x, w)
    })
}

struct Integrand {
    /// Components of the face normal along the tangent basis.
    nb: Vector3<f64>,
    /// Face normal against the apex, positive.
    na: f64,
}

impl Integrand {
    #[inline]
    fn eval(&self, omega: &Vector3<f64>) -> f64 {
        let r = self.na.atan2(-self.nb.dot(omega));
        0.5 * r - 0.25 * (2.0 * r).sin()
    }

    /// Integral over the spherical triangle projected from the flat one.
    fn triangle(&self, t: &[Vector3<f64>; 3]) -> f64 {
        let (x, w) = gauss_legendre();
        let det = Matrix3::from_columns(t).determinant().abs();
        let (e1, e2) = (t[1] - t[0], t[2] - t[0]);
        let mut sum = 0.0;
        for i in 0..ORDER {
            let xi = x[i];
            for j in 0..ORDER {
                let p = t[0] + xi * ((1.0 - x[j]) * e1 + x[j] * e2);
                let r = p.norm();
                sum += w[i] * w[j] * xi * self.eval(&(p / r)) / (r * r * r);
            }
        }
        sum * det
    }

    fn adaptive(&self, t: &[Vector3<f64>; 3], whole: f64, tol: f64, depth: u32) -> f64 {
        // geodesic midpoints: the four children tile the spherical parent
        let m = [(t[0] + t[1]).normalize(), (t[1] + t[2]).normalize(), (t[2] + t[0]).normalize()];
        let kids = [[t[0], m[0], m[2]], [m[0], t[1], m[1]], [m[2], m[1], t[2]], [m[0], m[1], m[2]]];
        let parts: Vec<f64> = kids.iter().map(|k| self.triangle(k)).collect();
        let refined: f64 = parts.iter().sum();
        let diff = (refined - whole).abs();
        // stop at the tolerance or once the difference is rounding noise
        if diff <= tol || diff <= 8.0 * f64::EPSILON * refined.abs() || depth >= MAX_DEPTH {
            return refined;
        }
        kids.iter().zip(parts).map(|(k, p)| self.adaptive(k, p, tol / 2.0, depth + 1)).sum()
    }
}

/// Volume of the simplicial cone's intersection with S³ as a fraction of
/// 2π².
pub fn volume_s3_quadrature(cone: &SimplicialCone) -> Result<MeasureEstimate> {
    if cone.dim() != 4 {
        return Err(Error::BadDim(cone.dim()));
    }
    let g = cone.generators();
    let apex = &g[3];
    let mut n = hyperplane_normal(&g[..3])?;
    if n.dot(apex) < 0.0 {
        n = -n;
    }
    let basis = orthogonal_complement(std::slice::from_ref(apex), 4);
    let local = |v: &Point| Vector3::new(basis[0].dot(v), basis[1].dot(v), basis[2].dot(v));
    let mut t = [Vector3::zeros(); 3];
    for (slot, v) in t.iter_mut().zip(&g[..3]) {
        let w = local(v);
        let len = w.norm();
        if len < 1e-14 {
            return Err(degenerate("generator parallel to the apex"));
        }
        *slot = w / len;
    }
    let f = Integrand { nb: local(&n), na: n.dot(apex) };
    let whole = f.triangle(&t);
    let vol = f.adaptive(&t, whole, REL_TOL * whole.abs(), 0);
    let total = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    Ok(MeasureEstimate { normalized: vol / total, stderr: 0.0, method: Method::Quadrature, samples: 0, seed: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::regular_simplex;
    use crate::measure::solid_angle_mc;

    #[test]
    fn rule_integrates_polynomials() {
        let (x, w) = gauss_legendre();
        let s: f64 = w.iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
        let m: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(21)).sum();
        assert!((m - 1.0 / 22.0).abs() < 1e-15);
    }

    #[test]
    fn orthant_is_one_sixteenth() {
        let v = volume_s3_quadrature(&SimplicialCone::orthant(4)).unwrap().normalized;
        assert!((v - 1.0 / 16.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn regular_partition_cell_is_one_fifth() {
        // four of the five vertices of a regular 4-simplex cut S³ in five
        let s = regular_simplex(4).unwrap();
        let cone = SimplicialCone::new(s.vertices()[..4].to_vec()).unwrap();
        let v = volume_s3_quadrature(&cone).unwrap().normalized;
        assert!((v - 0.2).abs() < 1e-13, "{v}");
    }

    #[test]
    fn independent_of_apex_choice() {
        let g = vec![
            Point::from_vec(vec![1.0, 0.2, 0.1, 0.0]),
            Point::from_vec(vec![0.1, 1.0, -0.3, 0.2]),
            Point::from_vec(vec![0.0, 0.3, 1.0, 0.1]),
            Point::from_vec(vec![0.2, -0.1, 0.4, 1.0]),
        ];
        let mut vols = Vec::new();
        for r in 0..4 {
            let mut h = g.clone();
            h.rotate_left(r);
            vols.push(volume_s3_quadrature(&SimplicialCone::new(h).unwrap()).unwrap().normalized);
        }
        for v in &vols {
            assert!((v - vols[0]).abs() < 1e-13, "{vols:?}");
        }
        let mc = solid_angle_mc(&SimplicialCone::new(g).unwrap().into(), 2_000_000, 77).unwrap();
        assert!(mc.agrees_with(vols[0], 4.0), "{mc:?} vs {}", vols[0]);
    }
}
