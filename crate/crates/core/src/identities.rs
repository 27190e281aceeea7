//! Duality identities, isoperimetric and isodual comparisons, and the
//! regular comparison families they need.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{cone_from_directions, regular_simplex, Body, Cone, EuclideanSimplex, SimplicialCone, SphericalPolygon};
use crate::linalg::{angle_between, orthogonal_complement, Point};
use crate::measure::{
    boundary_area_s3, plane_angle, polygon_of_cone, solid_angle_exact, solid_angle_mc, spherical_polygon_area,
    spherical_polygon_perimeter, volume_s3_quadrature, DirectionSet, MeasureEstimate,
};
use crate::polarity::{normal_fan, polar, polar_cone};
use crate::rng::{stream_rng, sub_seed, uniform_ball, unit_vector};

/// A residual with the standard error it should be judged against; exact
/// paths report a zero error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub residual: f64,
    pub stderr: f64,
}

fn cone_of_polygon(p: &SphericalPolygon) -> Result<Cone> {
    cone_from_directions(p.vertices().iter().map(|v| Point::from_row_slice(v.as_slice())).collect())
}

/// Polar polygon under the `⟨y, x⟩ <= 0` convention.
pub fn polar_polygon(p: &SphericalPolygon) -> Result<SphericalPolygon> {
    polygon_of_cone(&polar(&cone_of_polygon(p)?)?)
}

/// `|area(t) + per(t°) - 2π|`.
pub fn two_crofton_residual(t: &SphericalPolygon) -> Result<f64> {
    let q = polar_polygon(t)?;
    Ok((spherical_polygon_area(t) + spherical_polygon_perimeter(&q) - 2.0 * PI).abs())
}

/// `|area(∂X) + area(∂X°) - 4π|` for a cone in R^4.
pub fn three_crofton_residual(x: &SimplicialCone) -> Result<f64> {
    let q = polar_cone(x)?;
    Ok((boundary_area_s3(x)? + boundary_area_s3(&q)? - 4.0 * PI).abs())
}

/// How far the normal fan of `s` is from tiling the sphere. Exact in the
/// plane and in R^3; in R^4 every cone gets `n` samples from its own
/// stream, and the pooled standard error is returned.
pub fn partition_residual(s: &EuclideanSimplex, n: u64, seed: u64) -> Result<Residual> {
    let fan = normal_fan(&Body::Simplex(s.clone()))?;
    match s.dim() {
        2 => {
            let sum: f64 = fan.cones().iter().map(plane_angle).sum::<Result<f64>>()?;
            Ok(Residual { residual: (sum / (2.0 * PI) - 1.0).abs(), stderr: 0.0 })
        }
        3 => {
            let mut sum = 0.0;
            for c in fan.cones() {
                sum += solid_angle_exact(&c.clone().into())?.normalized;
            }
            Ok(Residual { residual: (sum - 1.0).abs(), stderr: 0.0 })
        }
        _ => {
            let (mut sum, mut var) = (0.0, 0.0);
            for (i, c) in fan.cones().iter().enumerate() {
                let e = solid_angle_mc(&c.clone().into(), n, sub_seed(seed, i as u64))?;
                sum += e.normalized;
                var += e.stderr * e.stderr;
            }
            Ok(Residual { residual: (sum - 1.0).abs(), stderr: var.sqrt() })
        }
    }
}

/// Regular n-gon whose vertices sit at colatitude `theta` around the north
/// pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularNgonFamily {
    pub n: usize,
    pub theta: f64,
}

impl RegularNgonFamily {
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadShape(format!("a polygon needs at least 3 sides, got {n}")));
        }
        if !(theta > 0.0 && theta < PI / 2.0) {
            return Err(Error::OutOfRange(format!("colatitude {theta} outside (0, π/2)")));
        }
        Ok(Self { n, theta })
    }

    pub fn polygon(&self) -> Result<SphericalPolygon> {
        let (s, c) = self.theta.sin_cos();
        SphericalPolygon::new(
            (0..self.n)
                .map(|k| {
                    let phi = 2.0 * PI * k as f64 / self.n as f64;
                    Vector3::new(s * phi.cos(), s * phi.sin(), c)
                })
                .collect(),
        )
    }

    pub fn area(&self) -> f64 {
        ngon_area(self.n, self.theta)
    }

    pub fn perimeter(&self) -> f64 {
        // chord of the side: 2 sin θ sin(π/n)
        let half = (self.theta.sin() * (PI / self.n as f64).sin()).asin();
        2.0 * self.n as f64 * half
    }

    /// Distance from the pole to the side midpoints.
    pub fn inradius(&self) -> f64 {
        (self.theta.tan() * (PI / self.n as f64).cos()).atan()
    }

    /// The polar is the regular n-gon around the south pole whose vertices,
    /// the side normals, sit at colatitude π/2 - inradius.
    pub fn polar_area(&self) -> f64 {
        ngon_area(self.n, PI / 2.0 - self.inradius())
    }
}

/// Area of the regular n-gon with circumradius `theta`: n times the
/// excess of the triangle pole–vertex–vertex, whose apex angle is 2π/n
/// and whose base angles follow from the right triangle at the side
/// midpoint, `cot β = cos θ tan(π/n)`.
fn ngon_area(n: usize, theta: f64) -> f64 {
    let apex = 2.0 * PI / n as f64;
    let beta = (1.0 / (theta.cos() * (PI / n as f64).tan())).atan();
    n as f64 * (apex + 2.0 * beta - PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "quantity", content = "value")]
pub enum NgonTarget {
    Area(f64),
    Perimeter(f64),
    PolarArea(f64),
}

/// Bisection on the colatitude; all three quantities are monotone and
/// range over (0, 2π).
pub fn solve_regular_ngon(n: usize, target: NgonTarget) -> Result<RegularNgonFamily> {
    let (value, increasing, eval): (f64, bool, fn(&RegularNgonFamily) -> f64) = match target {
        NgonTarget::Area(v) => (v, true, RegularNgonFamily::area),
        NgonTarget::Perimeter(v) => (v, true, RegularNgonFamily::perimeter),
        NgonTarget::PolarArea(v) => (v, false, RegularNgonFamily::polar_area),
    };
    RegularNgonFamily::new(n, 0.5)?;
    if !(value > 0.0 && value < 2.0 * PI) {
        return Err(Error::OutOfRange(format!("{target:?} outside the attainable range (0, 2π)")));
    }
    let (mut lo, mut hi) = (0.0_f64, PI / 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let q = eval(&RegularNgonFamily { n, theta: mid });
        if (q < value) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let family = RegularNgonFamily::new(n, theta)?;
    let miss = (eval(&family) - value).abs();
    if miss > 1e-12 {
        return Err(Error::OutOfRange(format!("{target:?} not reached, closest miss {miss:e}")));
    }
    Ok(family)
}

/// `area(R) - area(p)` for the regular n-gon `R` with the perimeter of `p`.
pub fn isoperimetric_gap_ngon(p: &SphericalPolygon) -> Result<f64> {
    let r = solve_regular_ngon(p.len(), NgonTarget::Perimeter(spherical_polygon_perimeter(p)))?;
    Ok(r.area() - spherical_polygon_area(p))
}

/// `area(R) - area(p)` for the regular n-gon `R` with `area(R°) = area(p°)`.
pub fn isodual_gap_ngon(p: &SphericalPolygon) -> Result<f64> {
    let q = polar_polygon(p)?;
    let r = solve_regular_ngon(p.len(), NgonTarget::PolarArea(spherical_polygon_area(&q)))?;
    Ok(r.area() - spherical_polygon_area(p))
}

/// A convex n-gon: `n` points of a random ellipse in the gnomonic chart of a
/// random centre, which stay convex on the sphere.
pub fn random_convex_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SphericalPolygon {
    loop {
        let c = unit_vector(rng, 3);
        let c = Vector3::new(c[0], c[1], c[2]);
        let seed = if c.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = c.cross(&seed).normalize();
        let e2 = c.cross(&e1);
        let (a, b) = (rng.random_range(0.05..2.0), rng.random_range(0.05..2.0));
        let tilt: f64 = rng.random_range(0.0..PI);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let spread = angles.windows(2).map(|w| w[1] - w[0]).chain([angles[0] + 2.0 * PI - angles[n - 1]]);
        if spread.fold(f64::INFINITY, f64::min) < 1e-2 {
            continue;
        }
        let pts = angles
            .iter()
            .map(|t| {
                let (x, y) = (a * t.cos(), b * t.sin());
                let (s, co) = tilt.sin_cos();
                c + (co * x - s * y) * e1 + (s * x + co * y) * e2
            })
            .collect();
        if let Ok(p) = SphericalPolygon::new(pts) {
            return p;
        }
    }
}

/// Regular spherical tetrahedron on S³ with pairwise vertex angle `alpha`.
/// The vertices are `cos β e₄ + sin β (u_i, 0)` for the unit tetrahedral
/// directions `u_i`, with `cos² β = (3 cos α + 1) / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularSphericalTetrahedron {
    pub alpha: f64,
}

/// Upper end of the pairwise angle: the four vertices become coplanar.
pub fn max_tetrahedron_angle() -> f64 {
    (-1.0_f64 / 3.0).acos()
}

impl RegularSphericalTetrahedron {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < max_tetrahedron_angle()) {
            return Err(Error::OutOfRange(format!("pairwise angle {alpha} outside (0, arccos(-1/3))")));
        }
        Ok(Self { alpha })
    }

    pub fn cone(&self) -> Result<SimplicialCone> {
        let cb = ((3.0 * self.alpha.cos() + 1.0) / 4.0).sqrt();
        let sb = (1.0 - cb * cb).sqrt();
        let t = regular_simplex(3)?;
        SimplicialCone::new(
            t.vertices()
                .iter()
                .map(|u| Point::from_vec(vec![sb * u[0], sb * u[1], sb * u[2], cb]))
                .collect(),
        )
    }

    /// The polar of a regular tetrahedron is regular, with `cos α' = -c / (1 + 2c)`.
    pub fn polar(&self) -> Result<Self> {
        let c = self.alpha.cos();
        Self::new((-c / (1.0 + 2.0 * c)).acos())
    }

    pub fn volume(&self) -> Result<f64> {
        Ok(volume_s3_quadrature(&self.cone()?)?.normalized)
    }
}

/// Working bracket of the MC solver; the family degenerates at both ends.
pub const TETRAHEDRON_ALPHA_RANGE: (f64, f64) = (0.1, 1.8106332362490186);
/// Final bracket width of the MC solver.
pub const TETRAHEDRON_BRACKET: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TetrahedronSolution {
    pub tetrahedron: RegularSphericalTetrahedron,
    pub bracket: (f64, f64),
    /// Polar volume at the solution, on the solver's sample.
    pub polar_volume: MeasureEstimate,
    pub volume: MeasureEstimate,
}

/// Regular tetrahedron whose polar has normalized volume `target`, by
/// bisection on one common direction sample of size `n_mc`.
pub fn solve_regular_tetrahedron(target: f64, n_mc: u64, seed: u64) -> Result<TetrahedronSolution> {
    let dirs = DirectionSet::generate(4, n_mc, seed)?;
    solve_regular_tetrahedron_on(target, &dirs, TETRAHEDRON_BRACKET)
}

pub fn solve_regular_tetrahedron_on(target: f64, dirs: &DirectionSet, width: f64) -> Result<TetrahedronSolution> {
    let polar_volume = |alpha: f64| -> Result<MeasureEstimate> {
        let c: Cone = polar_cone(&RegularSphericalTetrahedron::new(alpha)?.cone()?)?.into();
        Ok(dirs.measure(&[c])?[0])
    };
    let (mut lo, mut hi) = TETRAHEDRON_ALPHA_RANGE;
    // the polar volume decreases in alpha
    let (top, bottom) = (polar_volume(lo)?, polar_volume(hi)?);
    if !(target < top.normalized && target > bottom.normalized) {
        return Err(Error::OutOfRange(format!(
            "polar volume {target} outside ({}, {}) reachable for α in [{lo}, {hi}]",
            bottom.normalized, top.normalized
        )));
    }
    let resolution = 3.0 * (target * (1.0 - target) / dirs.len() as f64).sqrt();
    if top.normalized - target < resolution || target - bottom.normalized < resolution {
        return Err(Error::NoiseFloor(format!(
            "target {target} within {resolution:e} of the end of the reachable range"
        )));
    }
    while hi - lo >= width {
        let mid = 0.5 * (lo + hi);
        if polar_volume(mid)?.normalized > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tetrahedron = RegularSphericalTetrahedron::new(0.5 * (lo + hi))?;
    let c = tetrahedron.cone()?;
    let both = dirs.measure(&[polar_cone(&c)?.into(), c.into()])?;
    Ok(TetrahedronSolution { tetrahedron, bracket: (lo, hi), polar_volume: both[0], volume: both[1] })
}

/// Largest deviation of the pairwise generator angles from their mean.
pub fn regularity_defect(c: &SimplicialCone) -> f64 {
    let g = c.generators();
    let angles: Vec<f64> =
        (0..g.len()).flat_map(|i| (i + 1..g.len()).map(move |j| (i, j))).map(|(i, j)| angle_between(&g[i], &g[j])).collect();
    let mean = angles.iter().sum::<f64>() / angles.len() as f64;
    angles.iter().map(|a| (a - mean).abs()).fold(0.0, f64::max)
}

/// Radius of the neighbourhood of the regular tetrahedron inside which the
/// isodual comparison is asserted.
pub const LOCALITY_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsodualTetrahedronReport {
    /// `vol(C) - vol(S)`, normalized.
    pub gap: f64,
    pub stderr: f64,
    pub comparison: TetrahedronSolution,
    pub regularity_defect: f64,
    /// Set outside the locality neighbourhood, where the sign is not claimed.
    pub advisory: bool,
}

/// `vol(C) - vol(S)` where `C` is the regular tetrahedron with
/// `vol(C°) = vol(S°)`, all on one direction sample. The error combines
/// the paired `C`/`S` difference with the matching error of the polars,
/// carried through the family's slope `dV/dV°`.
pub fn isodual_gap_tetrahedron(s: &SimplicialCone, n_mc: u64, seed: u64) -> Result<IsodualTetrahedronReport> {
    if s.dim() != 4 {
        return Err(Error::BadDim(s.dim()));
    }
    let dirs = DirectionSet::generate(4, n_mc, seed)?;
    let s_polar: Cone = polar_cone(s)?.into();
    let target = dirs.measure(std::slice::from_ref(&s_polar))?[0].normalized;
    // resolve the crossing on the sample itself, well below the 1e-4 bracket
    let comparison = solve_regular_tetrahedron_on(target, &dirs, 1e-8)?;
    let c = comparison.tetrahedron.cone()?;
    let pair = dirs.paired(&c.clone().into(), &s.clone().into())?;
    let matching = dirs.paired(&polar_cone(&c)?.into(), &s_polar)?;
    let h = 1e-5;
    let (a, b) = (comparison.tetrahedron.alpha - h, comparison.tetrahedron.alpha + h);
    let (ra, rb) = (RegularSphericalTetrahedron::new(a)?, RegularSphericalTetrahedron::new(b)?);
    let dv = ra.volume()? - rb.volume()?;
    let dvp = volume_s3_quadrature(&polar_cone(&ra.cone()?)?)?.normalized
        - volume_s3_quadrature(&polar_cone(&rb.cone()?)?)?.normalized;
    let slope = (dv / dvp).abs();
    let stderr = pair.stderr.hypot(slope * matching.stderr.hypot(matching.difference));
    let defect = regularity_defect(s);
    Ok(IsodualTetrahedronReport {
        gap: pair.difference,
        stderr,
        comparison,
        regularity_defect: defect,
        advisory: defect >= LOCALITY_RADIUS,
    })
}

/// The regular tetrahedron cell of the standard partition of S³: four
/// vertices of the centred regular 4-simplex, pairwise `arccos(-1/4)`.
pub fn standard_tetrahedron() -> Result<SimplicialCone> {
    SimplicialCone::new(regular_simplex(4)?.vertices()[..4].to_vec())
}

/// Moves each vertex a geodesic distance of at most `eps` in a uniformly
/// random tangent direction.
fn jitter_on_sphere(c: &SimplicialCone, eps: f64, seed: u64) -> Result<Vec<Point>> {
    let mut rng = stream_rng(seed, 0);
    c.generators()
        .iter()
        .map(|v| {
            let basis = orthogonal_complement(std::slice::from_ref(v), 4);
            let b = uniform_ball(&mut rng, 3) * eps;
            let t: Point = basis.iter().zip(b.iter()).map(|(e, x)| e * *x).fold(Point::zeros(4), |a, x| a + x);
            let len = t.norm();
            Ok(if len == 0.0 { v.clone() } else { v * len.cos() + t * (len.sin() / len) })
        })
        .collect()
}

/// Scales the configuration about its centre in the gnomonic chart.
fn scaled_about_centre(vertices: &[Point], s: f64) -> Result<SimplicialCone> {
    let c = vertices.iter().fold(Point::zeros(4), |a, v| a + v).normalize();
    SimplicialCone::new(vertices.iter().map(|v| &c + (v / v.dot(&c) - &c) * s).collect())
}

/// Scale factor restoring the target volume, by safeguarded false position.
fn match_volume(vertices: &[Point], target: f64) -> Result<(SimplicialCone, f64)> {
    let vol = |s: f64| -> Result<f64> { Ok(volume_s3_quadrature(&scaled_about_centre(vertices, s)?)?.normalized - target) };
    let (mut lo, mut hi) = (0.9, 1.1);
    let (mut flo, mut fhi) = (vol(lo)?, vol(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::NoiseFloor("volume not bracketed by the rescaling range".into()));
    }
    let mut side = 0;
    for _ in 0..100 {
        let mut s = hi - fhi * (hi - lo) / (fhi - flo);
        if !(s > lo && s < hi) {
            s = 0.5 * (lo + hi);
        }
        let f = vol(s)?;
        if f.abs() <= 1e-16 || hi - lo <= 1e-15 {
            return Ok((scaled_about_centre(vertices, s)?, f));
        }
        // Illinois modification keeps both ends moving
        if f < 0.0 {
            (lo, flo) = (s, f);
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            (hi, fhi) = (s, f);
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    let s = 0.5 * (lo + hi);
    Ok((scaled_about_centre(vertices, s)?, vol(s)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BohmReport {
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub regular_area: f64,
    pub min_gap: f64,
    pub median_gap: f64,
    /// Worst normalized volume mismatch left after rescaling.
    pub max_volume_mismatch: f64,
    #[serde(skip)]
    pub gaps: Vec<f64>,
}

/// Surface-area comparison near the regular tetrahedron: each trial
/// jitters the standard tetrahedron by at most `eps`, restores its volume
/// by scaling about the centre, and records `area(∂S) - area(∂C)`.
/// Volumes come from quadrature, so the gaps are deterministic.
pub fn bohm_local_probe(eps: f64, trials: usize, seed: u64) -> Result<BohmReport> {
    if !(0.0..=0.05).contains(&eps) {
        return Err(Error::OutOfRange(format!("perturbation {eps} outside the local range [0, 0.05]")));
    }
    let base = standard_tetrahedron()?;
    let target = volume_s3_quadrature(&base)?.normalized;
    let regular_area = boundary_area_s3(&base)?;
    let results: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            if eps == 0.0 {
                return Ok((0.0, 0.0));
            }
            let moved = jitter_on_sphere(&base, eps, sub_seed(seed, t as u64))?;
            let (cone, miss) = match_volume(&moved, target)?;
            Ok((boundary_area_s3(&cone)? - regular_area, miss.abs()))
        })
        .collect::<Result<_>>()?;
    let gaps: Vec<f64> = results.iter().map(|r| r.0).collect();
    let mut sorted = gaps.clone();
    sorted.sort_by(f64::total_cmp);
    let median_gap = if sorted.is_empty() { 0.0 } else { sorted[sorted.len() / 2] };
    Ok(BohmReport {
        epsilon: eps,
        trials,
        seed,
        regular_area,
        min_gap: sorted.first().copied().unwrap_or(0.0),
        median_gap,
        max_volume_mismatch: results.iter().map(|r| r.1).fold(0.0, f64::max),
        gaps,
    })
}
