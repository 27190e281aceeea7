use std::f64::consts::PI;
use std::path::PathBuf;

use spherangle::conjectures::{
    conjecture_gap, distance_spread, polytope_ridge_probe, search_max_min_angle, theorem_4d_check, theorem_platonic_check,
    SearchConfig, ShapeCoordinates, VertexMethod,
};
use spherangle::geom::{flat_simplex, needle_tetrahedron, perturb, random_simplex, regular_polytope, regular_simplex};
use spherangle::identities::bohm_local_probe;
use spherangle::io::read_body;
use spherangle::measure::{solid_angle_exact, solid_angles_mc, volume_s3_quadrature};
use spherangle::polarity::normal_fan;
use spherangle::reference::{reference_4d, reference_rows};
use spherangle::rng::{stream_rng, sub_seed};
use spherangle::{Body, Cone, Error, MeasureEstimate, Method, RegularSolid, Result};

use crate::report::{Comparison, Report, Row};

fn single_input(inputs: &[PathBuf]) -> Result<Body> {
    match inputs {
        [path] => read_body(path),
        [] => Err(Error::Parse("field `--input`: a body file is required".into())),
        _ => Err(Error::Parse("field `--input`: expected exactly one body file".into())),
    }
}

/// Vertex measures: exact up to R^3; in R^4 quadrature, or Monte Carlo with
/// common random numbers when a sample count is given.
fn measure_cones(cones: &[Cone], samples: Option<u64>, seed: u64) -> Result<Vec<MeasureEstimate>> {
    let dim = cones.first().map_or(0, |c| c.dim());
    match (dim, samples) {
        (0..=3, _) => cones.iter().map(solid_angle_exact).collect(),
        (_, Some(n)) => solid_angles_mc(cones, n, seed),
        (_, None) => cones
            .iter()
            .map(|c| match c {
                Cone::Simplicial(s) => volume_s3_quadrature(s),
                Cone::Polyhedral(_) => Err(Error::NotSimple(0)),
            })
            .collect(),
    }
}

fn sphere_dim(d: usize) -> usize {
    d - 1
}

pub fn angles(report: &mut Report, inputs: &[PathBuf], samples: Option<u64>, seed: u64) -> Result<()> {
    let body = single_input(inputs)?;
    let d = body.dim();
    let cones = body.vertex_cones()?;
    for (i, e) in measure_cones(&cones, samples, seed)?.iter().enumerate() {
        report.push(Row::estimate(format!("vertex {i}"), "solid angle", e).natural(e.natural(sphere_dim(d))?));
    }
    if d == 4 {
        for f in body.edge_figures()? {
            let e = solid_angle_exact(&f.cone.clone().into())?;
            report.push(Row::estimate(format!("edge {}-{}", f.edge.0, f.edge.1), "edge figure", &e).natural(e.natural(2)?));
        }
    }
    for (i, a) in body.dihedral_angles()?.into_iter().enumerate() {
        report.push(Row::new(format!("ridge {i}"), "dihedral", a / (2.0 * PI), "exact").natural(a));
    }
    Ok(())
}

/// The normal fan: outer normal cones at every vertex and the check that
/// they tile the sphere.
pub fn polar(report: &mut Report, inputs: &[PathBuf], samples: Option<u64>, seed: u64) -> Result<()> {
    let body = single_input(inputs)?;
    let fan = normal_fan(&body)?;
    let cones: Vec<Cone> = fan.cones().iter().cloned().map(Cone::from).collect();
    let estimates = measure_cones(&cones, samples, seed)?;
    let (mut sum, mut var) = (0.0, 0.0);
    for (i, e) in estimates.iter().enumerate() {
        sum += e.normalized;
        var += e.stderr * e.stderr;
        report.push(Row::estimate(format!("vertex {i}"), "normal cone", e).natural(e.natural(sphere_dim(body.dim()))?));
    }
    let generators: Vec<Vec<Vec<f64>>> =
        fan.cones().iter().map(|c| c.generators().iter().map(|g| g.iter().copied().collect()).collect()).collect();
    report.detail("normal_cone_generators", generators);
    let method = estimates.first().map_or(Method::Exact, |e| e.method);
    let tol = if method.is_deterministic() { 1e-9 } else { 3.0 * var.sqrt() };
    let mut row = Row::new("normal fan", "total measure", sum, method.name()).stderr(var.sqrt());
    if let Some(n) = samples.filter(|_| !method.is_deterministic()) {
        row = row.sampled(n, seed);
    }
    report.push(row.count(estimates.len()).judged(sum, Comparison::Within, tol, Some(1.0)));
    Ok(())
}

pub fn search(report: &mut Report, config: SearchConfig, dim: usize) -> Result<()> {
    let r = search_max_min_angle(dim, &config)?;
    let best = ShapeCoordinates::new(dim, r.best_params.clone())?.decode()?;
    let method = if dim == 3 { Method::Exact } else { config.method };
    let mut row = Row::new(format!("search d={dim}"), "best min vertex angle", r.best_objective, method.name()).count(config.restarts);
    if method == Method::MonteCarlo {
        row = row.sampled(config.samples, config.seed);
    }
    report.push(row);
    let reference = match (dim, config.method) {
        (3, _) => Method::Exact,
        (_, Method::Quadrature) => Method::Quadrature,
        // pinned constant
        _ => Method::MonteCarlo,
    };
    report.push(Row::new(format!("regular {dim}-simplex"), "min vertex angle", r.regular_value, reference.name()));
    report.push(Row::new(format!("search d={dim}"), "best distance spread", distance_spread(&best), "exact"));
    report.detail("config", &config);
    report.detail("search", &r);
    Ok(())
}

pub struct ProbeArgs<'a> {
    pub target: &'a str,
    pub inputs: &'a [PathBuf],
    pub epsilon: Option<f64>,
    pub trials: usize,
    pub samples: u64,
    pub seed: u64,
}

pub fn probe(report: &mut Report, a: ProbeArgs<'_>) -> Result<()> {
    match a.target {
        "bohm" => {
            let eps = a.epsilon.unwrap_or(1e-2);
            let b = bohm_local_probe(eps, a.trials, a.seed)?;
            let label = format!("jittered tetrahedra, eps {eps}");
            report.push(Row::new(label.clone(), "regular surface area", b.regular_area, "quadrature"));
            report.push(Row::new(label.clone(), "median gap", b.median_gap, "quadrature").count(a.trials));
            report.push(Row::new(label.clone(), "volume mismatch", b.max_volume_mismatch, "quadrature").count(a.trials));
            report.push(Row::new(label, "min gap", b.min_gap, "quadrature").count(a.trials).judged(b.min_gap, Comparison::AtLeast, -1e-9, None));
        }
        "ridge" => {
            let [p1, p2] = a.inputs else {
                return Err(Error::Parse("field `--input`: the ridge probe takes exactly two body files".into()));
            };
            let r = polytope_ridge_probe(&read_body(p1)?, &read_body(p2)?)?;
            report.push(Row::new(format!("ridge {}", r.best.0), "smallest dihedral difference", r.best.1, "exact").count(r.ridges));
            report.push(Row::new(format!("ridge {}", r.worst.0), "largest dihedral difference", r.worst.1, "exact").count(r.ridges));
            report.push(Row::new("ridge pairing", "exists", f64::from(u8::from(r.exists)), "exact").judged(f64::from(u8::from(r.exists)), Comparison::AtLeast, 1.0, None));
        }
        "simplex4" => {
            let eps = a.epsilon.unwrap_or(1e-3);
            let base: Body = regular_simplex(4)?.into();
            let label = format!("perturbed 4-simplices, eps {eps}");
            let (mut worst_z, mut worst_exact) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for i in 0..a.trials as u64 {
                let p = perturb(&base, eps, sub_seed(a.seed, i))?;
                let s = p.as_simplex().expect("perturbed simplex");
                let v = conjecture_gap(s, 0, Method::MonteCarlo, a.samples, sub_seed(a.seed, 1000 + i))?;
                worst_z = worst_z.max(v.gap / v.stderr);
                for k in [1, 2] {
                    worst_exact = worst_exact.max(conjecture_gap(s, k, Method::Exact, 0, 0)?.gap);
                }
            }
            report.push(
                Row::new(label.clone(), "vertex gap max z-score", worst_z, "monte-carlo")
                    .sampled(a.samples, a.seed)
                    .count(a.trials)
                    .judged(worst_z, Comparison::AtMost, 3.0, None),
            );
            report.push(Row::new(label, "edge and dihedral max gap", worst_exact, "exact").count(a.trials).judged(worst_exact, Comparison::AtMost, 1e-10, None));
        }
        name => {
            let solid: RegularSolid = name.parse()?;
            let base = regular_polytope(solid)?;
            let eps = a.epsilon.unwrap_or(if solid.dim() == 3 { 1e-2 } else { 1e-3 });
            let label = format!("perturbed {solid}, eps {eps}");
            let mut failures = 0usize;
            let mut advisories = 0usize;
            let mut reports = Vec::new();
            for i in 0..a.trials as u64 {
                let p = perturb(&base, eps, sub_seed(a.seed, i))?;
                match reference_4d(solid) {
                    None => {
                        let r = theorem_platonic_check(&p, solid)?;
                        failures += usize::from(!r.passed());
                        reports.push(serde_json::to_value(r).unwrap_or_default());
                    }
                    Some(reference) => {
                        let method = VertexMethod::MonteCarlo { samples: a.samples, seed: sub_seed(a.seed, 1000 + i) };
                        let r = theorem_4d_check(&p, reference, method)?;
                        failures += usize::from(!r.passed());
                        advisories += usize::from(r.advisory);
                        reports.push(serde_json::to_value(r).unwrap_or_default());
                    }
                }
            }
            let method = if solid.dim() == 3 { "exact" } else { "monte-carlo" };
            let mut row = Row::new(label.clone(), "check failures", failures as f64, method).count(a.trials);
            if solid.dim() == 4 {
                row = row.sampled(a.samples, a.seed);
            }
            report.push(row.judged(failures as f64, Comparison::AtMost, 0.0, None));
            report.push(Row::new(label, "outside verified locality", advisories as f64, method).count(a.trials));
            report.detail("trials", reports);
        }
    }
    Ok(())
}

pub fn table(report: &mut Report, solids: &str) -> Result<()> {
    let list: Vec<RegularSolid> = if solids == "all" {
        RegularSolid::ALL.to_vec()
    } else {
        solids.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?
    };
    for solid in list {
        for r in reference_rows(solid)? {
            report.push(Row::estimate(solid.name(), r.quantity, &r.estimate).natural(r.natural));
        }
    }
    Ok(())
}

pub fn fixture(name: &str, dim: usize, epsilon: Option<f64>, seed: u64) -> Result<Body> {
    let eps = epsilon.unwrap_or(1e-3);
    match name {
        "regular" => Ok(regular_simplex(dim)?.into()),
        "flat" => Ok(flat_simplex(dim, eps)?.into()),
        "needle" => Ok(needle_tetrahedron(eps)?.into()),
        "random" => {
            if !(2..=16).contains(&dim) {
                return Err(Error::BadDim(dim));
            }
            Ok(random_simplex(&mut stream_rng(seed, 0), dim).into())
        }
        "perturbed" => perturb(&regular_simplex(dim)?.into(), eps, seed),
        solid => {
            let base = regular_polytope(solid.parse()?)?;
            match epsilon {
                Some(e) => perturb(&base, e, seed),
                None => Ok(base),
            }
        }
    }
}
