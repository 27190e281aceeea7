//! The `verify` suites: seeded sweeps judged against fixed thresholds.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DVector, Vector3};
use rand::Rng;
use spherangle::conjectures::{
    conjecture_gap, distance_spread, min_vertex_solid_angle, rivin_pairing, search_max_min_angle,
    theorem_4d_check, theorem_platonic_check, SearchConfig, ShapeCoordinates, VertexMethod,
};
use spherangle::geom::{perturb, random_simplex, regular_polytope, regular_simplex, RegularSolid, SphericalPolygon};
use spherangle::identities::{
    bohm_local_probe, isodual_gap_ngon, isoperimetric_gap_ngon, partition_residual, random_convex_polygon,
    three_crofton_residual, two_crofton_residual,
};
use spherangle::measure::{
    boundary_area_s3, crofton_hit_probability, crofton_polarity_check, solid_angle_mc, ConeConstraints,
};
use spherangle::polarity::normal_fan;
use spherangle::reference::Reference4d;
use spherangle::rng::{gaussian_vector, stream_rng, sub_seed};
use spherangle::{Body, Error, Method, Result, SimplicialCone};

use crate::report::{Comparison, Row};

pub struct Settings {
    pub seed: u64,
    pub samples: u64,
    pub restarts: usize,
    pub epsilon: Option<f64>,
    pub thresholds: BTreeMap<String, f64>,
}

impl Settings {
    fn threshold(&self, key: &str, default: f64) -> f64 {
        self.thresholds.get(key).copied().unwrap_or(default)
    }

    fn rng(&self, stream: u64) -> impl Rng {
        stream_rng(sub_seed(self.seed, stream), 0)
    }
}

/// Names of threshold keys, for validating `--threshold` overrides.
pub const THRESHOLD_KEYS: &[&str] = &[
    "two-crofton",
    "three-crofton",
    "partition",
    "partition-4d-sigmas",
    "isoperimetric",
    "isodual",
    "bohm",
    "min-vertex-angle",
    "search",
    "local-4d-sigmas",
    "local-4d-exact",
    "platonic",
    "tesseract",
    "rivin",
    "crofton-sigmas",
    "polarity",
];

fn random_cone<R: Rng>(rng: &mut R, d: usize) -> SimplicialCone {
    loop {
        if let Ok(c) = SimplicialCone::new((0..d).map(|_| gaussian_vector(rng, d)).collect()) {
            return c;
        }
    }
}

fn random_triangle<R: Rng>(rng: &mut R) -> SphericalPolygon {
    loop {
        let v = (0..3)
            .map(|_| {
                let g = gaussian_vector(rng, 3);
                Vector3::new(g[0], g[1], g[2])
            })
            .collect();
        if let Ok(p) = SphericalPolygon::new(v) {
            return p;
        }
    }
}

fn max_of(mut it: impl Iterator<Item = Result<f64>>) -> Result<f64> {
    it.try_fold(f64::NEG_INFINITY, |m, x| Ok(m.max(x?)))
}

fn min_of(mut it: impl Iterator<Item = Result<f64>>) -> Result<f64> {
    it.try_fold(f64::INFINITY, |m, x| Ok(m.min(x?)))
}

pub fn identities(s: &Settings) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let n = 1000;

    let mut rng = s.rng(1);
    let worst = max_of((0..n).map(|_| two_crofton_residual(&random_triangle(&mut rng))))?;
    let t = s.threshold("two-crofton", 1e-9);
    rows.push(Row::new("random triangles", "two-crofton max residual", worst, "exact").count(n).judged(worst, Comparison::AtMost, t, None));

    let mut rng = s.rng(2);
    let worst = max_of((0..n).map(|_| three_crofton_residual(&random_cone(&mut rng, 4))))?;
    let t = s.threshold("three-crofton", 1e-9);
    rows.push(Row::new("random 4d cones", "three-crofton max residual", worst, "exact").count(n).judged(worst, Comparison::AtMost, t, None));

    let t = s.threshold("partition", 1e-9);
    for d in [2, 3] {
        let mut rng = s.rng(2 + d as u64);
        let worst = max_of((0..n).map(|_| Ok(partition_residual(&random_simplex(&mut rng, d), 0, 0)?.residual)))?;
        rows.push(
            Row::new(format!("random {d}-simplices"), "partition max residual", worst, "exact")
                .count(n)
                .judged(worst, Comparison::AtMost, t, None),
        );
    }

    // 4-simplices: signed sums pooled, judged in standard errors
    let simplices = 10;
    let mut rng = s.rng(5);
    let (mut signed, mut var) = (0.0, 0.0);
    for i in 0..simplices {
        let fan = normal_fan(&random_simplex(&mut rng, 4).into())?;
        let mut sum = 0.0;
        for (j, c) in fan.cones().iter().enumerate() {
            let e = solid_angle_mc(&c.clone().into(), s.samples, sub_seed(sub_seed(s.seed, 50 + i), j as u64))?;
            sum += e.normalized;
            var += e.stderr * e.stderr;
        }
        signed += sum - 1.0;
    }
    let k = s.threshold("partition-4d-sigmas", 3.0);
    rows.push(
        Row::new("random 4-simplices", "partition pooled residual", signed, "monte-carlo")
            .stderr(var.sqrt())
            .sampled(s.samples, s.seed)
            .count(simplices as usize)
            .judged(signed, Comparison::Within, k * var.sqrt(), Some(0.0)),
    );

    for (key, name, gap) in [
        ("isoperimetric", "isoperimetric min gap", isoperimetric_gap_ngon as fn(&SphericalPolygon) -> Result<f64>),
        ("isodual", "isodual min gap", isodual_gap_ngon),
    ] {
        let mut rng = s.rng(if key == "isodual" { 7 } else { 6 });
        let per = 250;
        let worst = min_of((3..=6).flat_map(|m| (0..per).map(move |_| m)).map(|m| gap(&random_convex_polygon(&mut rng, m))))?;
        let t = -s.threshold(key, 1e-10);
        rows.push(Row::new("random convex polygons", name, worst, "exact").count(4 * per).judged(worst, Comparison::AtLeast, t, None));
    }

    let eps = s.epsilon.unwrap_or(1e-2);
    let trials = 100;
    let b = bohm_local_probe(eps, trials, sub_seed(s.seed, 8))?;
    let t = -s.threshold("bohm", 1e-9);
    rows.push(
        Row::new(format!("jittered tetrahedra, eps {eps}"), "surface-area min gap", b.min_gap, "quadrature")
            .count(trials)
            .judged(b.min_gap, Comparison::AtLeast, t, None),
    );
    Ok(rows)
}

pub fn conjectures(s: &Settings) -> Result<Vec<Row>> {
    let mut rows = Vec::new();

    let reg = min_vertex_solid_angle(&regular_simplex(3)?, Method::Exact, 0, 0)?.estimate.normalized;
    let mut rng = s.rng(11);
    let n = 1000;
    let worst = max_of((0..n).map(|_| Ok(min_vertex_solid_angle(&random_simplex(&mut rng, 3), Method::Exact, 0, 0)?.estimate.normalized - reg)))?;
    let t = s.threshold("min-vertex-angle", 1e-10);
    rows.push(Row::new("random 3-simplices", "min vertex angle gap", worst, "exact").count(n).judged(worst, Comparison::AtMost, t, None));

    let cfg = SearchConfig { restarts: s.restarts, method: Method::Exact, seed: sub_seed(s.seed, 12), ..Default::default() };
    let r = search_max_min_angle(3, &cfg)?;
    let spread = distance_spread(&ShapeCoordinates::new(3, r.best_params.clone())?.decode()?);
    let t = s.threshold("search", 1e-4);
    rows.push(
        Row::new("search d=3", "best min vertex angle", r.best_objective, "exact")
            .count(s.restarts)
            .judged(r.best_objective, Comparison::Within, t, Some(r.regular_value)),
    );
    rows.push(Row::new("search d=3", "best distance spread", spread, "exact"));

    let eps = s.epsilon.unwrap_or(1e-3);
    let base: Body = regular_simplex(4)?.into();
    let perturbations = 10;
    let (mut worst_z, mut worst_exact) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..perturbations {
        let p = perturb(&base, eps, sub_seed(s.seed, 1300 + i))?;
        let simplex = p.as_simplex().expect("perturbed simplex");
        let v = conjecture_gap(simplex, 0, Method::MonteCarlo, s.samples, sub_seed(s.seed, 1400 + i))?;
        worst_z = worst_z.max(v.gap / v.stderr);
        for k in [1, 2] {
            worst_exact = worst_exact.max(conjecture_gap(simplex, k, Method::Exact, 0, 0)?.gap);
        }
    }
    let label = format!("perturbed 4-simplices, eps {eps}");
    let t = s.threshold("local-4d-sigmas", 3.0);
    rows.push(
        Row::new(label.clone(), "vertex gap max z-score", worst_z, "monte-carlo")
            .sampled(s.samples, s.seed)
            .count(perturbations as usize)
            .judged(worst_z, Comparison::AtMost, t, None),
    );
    let t = s.threshold("local-4d-exact", 1e-10);
    rows.push(Row::new(label, "edge and dihedral max gap", worst_exact, "exact").count(perturbations as usize).judged(worst_exact, Comparison::AtMost, t, None));

    let per = 20;
    let mut failures = 0;
    for (j, solid) in [RegularSolid::Cube, RegularSolid::Dodecahedron].into_iter().enumerate() {
        let base = regular_polytope(solid)?;
        for i in 0..per {
            let p = perturb(&base, 1e-2, sub_seed(s.seed, 1500 + 100 * j as u64 + i))?;
            if !theorem_platonic_check(&p, solid)?.passed() {
                failures += 1;
            }
        }
    }
    let t = s.threshold("platonic", 0.0);
    rows.push(Row::new("perturbed cubes and dodecahedra", "check failures", failures as f64, "exact").count(2 * per as usize).judged(failures as f64, Comparison::AtMost, t, None));

    let tess = regular_polytope(RegularSolid::Tesseract)?;
    let mut failures = 0;
    for i in 0..perturbations {
        let p = perturb(&tess, 1e-3, sub_seed(s.seed, 1700 + i))?;
        let method = VertexMethod::MonteCarlo { samples: s.samples, seed: sub_seed(s.seed, 1800 + i) };
        if !theorem_4d_check(&p, Reference4d::Tesseract, method)?.passed() {
            failures += 1;
        }
    }
    let t = s.threshold("tesseract", 0.0);
    rows.push(
        Row::new("perturbed tesseracts", "check failures", failures as f64, "monte-carlo")
            .sampled(s.samples, s.seed)
            .count(perturbations as usize)
            .judged(failures as f64, Comparison::AtMost, t, None),
    );

    let mut rng = s.rng(19);
    let mut missing = 0;
    let mut pairs = 0;
    for (d, count) in [(3, 1000), (4, 100)] {
        for _ in 0..count {
            let (a, b) = (random_simplex(&mut rng, d), random_simplex(&mut rng, d));
            pairs += 1;
            match rivin_pairing(&a, &b) {
                Ok(_) => {}
                Err(Error::NotFound(_)) => missing += 1,
                Err(e) => return Err(e),
            }
        }
    }
    let t = s.threshold("rivin", 0.0);
    rows.push(Row::new("random simplex pairs", "ridge pairing misses", missing as f64, "exact").count(pairs).judged(missing as f64, Comparison::AtMost, t, None));
    Ok(rows)
}

pub fn crofton(s: &Settings) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let k = s.threshold("crofton-sigmas", 3.0);

    let octant = ConeConstraints::from_cone(&SimplicialCone::orthant(3).into());
    let e = crofton_hit_probability(&octant, s.samples, sub_seed(s.seed, 21))?;
    rows.push(
        Row::new("octant", "perimeter", e.boundary, "crofton")
            .stderr(e.boundary_stderr)
            .sampled(s.samples, sub_seed(s.seed, 21))
            .judged(e.boundary, Comparison::Within, k * e.boundary_stderr, Some(1.5 * PI)),
    );

    let half = ConeConstraints::half_space(DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]))?;
    let e = crofton_hit_probability(&half, s.samples, sub_seed(s.seed, 22))?;
    rows.push(
        Row::new("half-space in R^4", "boundary area", e.boundary, "crofton")
            .stderr(e.boundary_stderr)
            .sampled(s.samples, sub_seed(s.seed, 22))
            .judged(e.boundary, Comparison::Within, k * e.boundary_stderr.max(1e-12), Some(4.0 * PI)),
    );

    let mut rng = s.rng(23);
    for i in 0..3 {
        let c = random_cone(&mut rng, 4);
        let seed = sub_seed(s.seed, 230 + i);
        let e = crofton_hit_probability(&ConeConstraints::from_cone(&c.clone().into()), s.samples, seed)?;
        let exact = boundary_area_s3(&c)?;
        rows.push(
            Row::new(format!("random 4d cone {i}"), "boundary area", e.boundary, "crofton")
                .stderr(e.boundary_stderr)
                .sampled(s.samples, seed)
                .judged(e.boundary, Comparison::Within, k * e.boundary_stderr, Some(exact)),
        );
    }

    let (mut violations, mut lines) = (0u64, 0u64);
    for i in 0..5 {
        for d in [3, 4] {
            let r = crofton_polarity_check(&random_cone(&mut rng, d), s.samples, sub_seed(s.seed, 240 + 10 * i + d as u64))?;
            violations += r.violations();
            lines += r.samples;
        }
    }
    let t = s.threshold("polarity", 0.0);
    rows.push(
        Row::new("random 3d and 4d cones", "polarity violations", violations as f64, "crofton")
            .sampled(lines, s.seed)
            .count(10)
            .judged(violations as f64, Comparison::AtMost, t, None),
    );
    Ok(rows)
}
