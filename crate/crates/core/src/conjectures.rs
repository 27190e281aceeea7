//! Minimal solid angles, conjecture gaps, extremal search and the
//! regular-solid comparison checks.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{flat_simplex, perturb, random_simplex, regular_simplex, Body, Cone, EuclideanSimplex, RegularSolid, SimplicialCone};
use crate::linalg::Point;
use crate::measure::{solid_angle_exact, solid_angles_mc, volume_s3_quadrature, DirectionSet, MeasureEstimate, Method};
use crate::reference::{platonic_dihedral, platonic_vertex_angle, regular_simplex_face_value, Reference4d};
use crate::rng::{stream_rng, sub_seed};

/// Simplices modulo similarity: vertex 0 at the origin, vertex 1 at `e₁`,
/// vertex `k` in the span of the first `k` axes with a positive last
/// coordinate. The free coordinates of vertices `2..=d` are the parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeCoordinates {
    dim: usize,
    params: Vec<f64>,
}

impl ShapeCoordinates {
    pub fn parameter_count(dim: usize) -> usize {
        dim * (dim + 1) / 2 - 1
    }

    pub fn new(dim: usize, params: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDim(dim));
        }
        let want = Self::parameter_count(dim);
        if params.len() != want {
            return Err(Error::BadShape(format!("{dim}-simplex shape needs {want} parameters, got {}", params.len())));
        }
        Ok(Self { dim, params })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Canonical coordinates from the QR factorization of the edge matrix.
    pub fn encode(s: &EuclideanSimplex) -> Result<Self> {
        let d = s.dim();
        let v0 = s.vertex(0);
        let edges: Vec<Point> = s.vertices()[1..].iter().map(|v| v - v0).collect();
        let e = DMatrix::from_columns(&edges);
        let mut r = e.qr().r();
        for i in 0..d {
            if r[(i, i)] < 0.0 {
                r.row_mut(i).neg_mut();
            }
        }
        let scale = r[(0, 0)];
        let params = (1..d).flat_map(|k| (0..=k).map(|i| r[(i, k)] / scale).collect::<Vec<_>>()).collect();
        Self::new(d, params)
    }

    pub fn vertices(&self) -> Vec<Point> {
        let d = self.dim;
        let mut out = vec![Point::zeros(d)];
        let mut e1 = Point::zeros(d);
        e1[0] = 1.0;
        out.push(e1);
        let mut at = 0;
        for k in 1..d {
            let mut v = Point::zeros(d);
            for i in 0..=k {
                v[i] = self.params[at + i];
            }
            at += k + 1;
            out.push(v);
        }
        out
    }

    pub fn decode(&self) -> Result<EuclideanSimplex> {
        EuclideanSimplex::new(self.vertices())
    }
}

/// Canonical representative of the similarity class; orientation-sensitive
/// measurements on it are invariant under similarities of the input.
pub fn canonical_simplex(s: &EuclideanSimplex) -> Result<EuclideanSimplex> {
    ShapeCoordinates::encode(s)?.decode()
}

fn cone_measure(c: &SimplicialCone, method: Method) -> Result<MeasureEstimate> {
    match (c.dim(), method) {
        (2 | 3, Method::Exact) => solid_angle_exact(&c.clone().into()),
        (4, Method::Quadrature) => volume_s3_quadrature(c),
        (d, m) => Err(Error::BadShape(format!("{} cannot measure cones in R^{d}", m.name()))),
    }
}

/// Normalized solid angles at every vertex. Deterministic methods measure
/// each cone on its own; Monte Carlo measures the cones of the canonical
/// representative on one common sample.
pub fn vertex_solid_angles(s: &EuclideanSimplex, method: Method, n_mc: u64, seed: u64) -> Result<Vec<MeasureEstimate>> {
    match method {
        Method::MonteCarlo => {
            let c = canonical_simplex(s)?;
            let cones = (0..=c.dim()).map(|i| Ok(c.vertex_cone(i)?.into())).collect::<Result<Vec<Cone>>>()?;
            solid_angles_mc(&cones, n_mc, seed)
        }
        _ => (0..=s.dim()).map(|i| cone_measure(&s.vertex_cone(i)?, method)).collect(),
    }
}

/// Lowest-index minimum.
fn argmin(values: impl IntoIterator<Item = f64>) -> (usize, f64) {
    values.into_iter().enumerate().fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexMinimum {
    pub vertex: usize,
    pub estimate: MeasureEstimate,
}

pub fn min_vertex_solid_angle(s: &EuclideanSimplex, method: Method, n_mc: u64, seed: u64) -> Result<VertexMinimum> {
    let all = vertex_solid_angles(s, method, n_mc, seed)?;
    let (vertex, _) = argmin(all.iter().map(|e| e.normalized));
    Ok(VertexMinimum { vertex, estimate: all[vertex] })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceGap {
    pub k: usize,
    /// Minimum face-figure measure minus the regular simplex's, normalized.
    pub gap: f64,
    pub stderr: f64,
    pub face: Vec<usize>,
    pub value: MeasureEstimate,
    pub reference: MeasureEstimate,
}

/// Gap between the smallest `k`-face figure of `s` and that of the regular
/// simplex. Figures of dimension 2 and 3 are exact; 4-dimensional vertex
/// figures use `method` (Monte Carlo on the canonical representative, or
/// quadrature).
pub fn conjecture_gap(s: &EuclideanSimplex, k: usize, method: Method, n_mc: u64, seed: u64) -> Result<FaceGap> {
    let d = s.dim();
    if k + 2 > d {
        return Err(Error::OutOfRange(format!("face dimension {k} outside 0..={}", d.saturating_sub(2))));
    }
    let (face, value, reference) = if d - k == 4 {
        let reference = match method {
            Method::Quadrature => volume_s3_quadrature(&regular_simplex(4)?.vertex_cone(0)?)?,
            _ => regular_simplex_face_value(d, k)?,
        };
        let m = min_vertex_solid_angle(s, method, n_mc, seed)?;
        (vec![m.vertex], m.estimate, reference)
    } else {
        let faces = combinations(d + 1, k + 1);
        let values = faces.iter().map(|f| solid_angle_exact(&s.face_figure_cone(f)?.into())).collect::<Result<Vec<_>>>()?;
        let (i, _) = argmin(values.iter().map(|e| e.normalized));
        (faces[i].clone(), values[i], regular_simplex_face_value(d, k)?)
    };
    Ok(FaceGap {
        k,
        gap: value.normalized - reference.normalized,
        stderr: value.stderr.hypot(reference.stderr),
        face,
        value,
        reference,
    })
}

/// Relative spread `(max - min) / mean` of the edge lengths; zero exactly
/// for regular simplices.
pub fn distance_spread(s: &EuclideanSimplex) -> f64 {
    let e = s.edge_lengths();
    let (lo, hi) = e.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    (hi - lo) / (e.iter().sum::<f64>() / e.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SearchStart {
    /// A seeded random simplex per restart.
    Random,
    /// The regular simplex with vertices jittered by `epsilon`.
    Regular { epsilon: f64 },
    /// A nearly flat simplex of height `epsilon`.
    Flat { epsilon: f64 },
    /// Explicit shape coordinates.
    Params { params: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iter: usize,
    /// Initial polytope size in shape coordinates.
    pub step: f64,
    /// Convergence when the objective spread over the polytope drops below.
    pub tolerance: f64,
    pub seed: u64,
    pub start: SearchStart,
    /// Objective method for 4-simplices: `monte-carlo` or `quadrature`.
    pub method: Method,
    /// Directions per restart for the Monte Carlo objective.
    pub samples: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iter: 2000,
            step: 0.2,
            tolerance: 1e-8,
            seed: 0,
            start: SearchStart::Random,
            method: Method::MonteCarlo,
            samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Converged,
    MaxIter,
    DegenerateBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    pub seed: u64,
    pub start_objective: f64,
    pub best_objective: f64,
    pub iterations: usize,
    pub status: SearchStatus,
    /// Best-so-far after each iteration.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub dim: usize,
    pub best_params: Vec<f64>,
    pub best_objective: f64,
    pub regular_value: f64,
    /// Best-so-far after each restart, in restart order.
    pub trace: Vec<f64>,
    pub restarts: Vec<RestartSummary>,
    pub status: SearchStatus,
}

const BARRIER: f64 = -1.0;
const RELAUNCHES: i32 = 3;

/// Direct search maximizing the minimum vertex solid angle over shape
/// coordinates. 3-simplices use exact angles; 4-simplices use one fixed
/// direction sample per restart (or quadrature), so each restart sees a
/// deterministic objective. Degenerate shapes score -1.
pub fn search_max_min_angle(d: usize, config: &SearchConfig) -> Result<SearchReport> {
    if !(3..=4).contains(&d) {
        return Err(Error::BadDim(d));
    }
    if config.restarts == 0 {
        return Err(Error::BadShape("at least one restart is required".into()));
    }
    let regular_value = match (d, config.method) {
        (4, Method::Quadrature) => volume_s3_quadrature(&regular_simplex(4)?.vertex_cone(0)?)?.normalized,
        _ => regular_simplex_face_value(d, 0)?.normalized,
    };
    let runs: Vec<(Vec<f64>, RestartSummary)> =
        (0..config.restarts).into_par_iter().map(|r| run_restart(d, config, sub_seed(config.seed, r as u64))).collect::<Result<_>>()?;
    let mut trace = Vec::with_capacity(runs.len());
    let mut best = 0;
    for (i, (_, s)) in runs.iter().enumerate() {
        if s.best_objective > runs[best].1.best_objective {
            best = i;
        }
        trace.push(runs[best].1.best_objective);
    }
    let (best_params, summary) = &runs[best];
    let status = summary.status;
    Ok(SearchReport {
        dim: d,
        best_params: best_params.clone(),
        best_objective: summary.best_objective,
        regular_value,
        trace,
        status,
        restarts: runs.into_iter().map(|r| r.1).collect(),
    })
}

fn start_point(d: usize, config: &SearchConfig, seed: u64) -> Result<Vec<f64>> {
    let s = match &config.start {
        SearchStart::Random => {
            let mut rng = stream_rng(seed, 0);
            random_simplex(&mut rng, d)
        }
        SearchStart::Regular { epsilon } => match perturb(&regular_simplex(d)?.into(), *epsilon, seed)? {
            Body::Simplex(s) => s,
            Body::Polytope(_) => unreachable!("perturbing a simplex yields a simplex"),
        },
        SearchStart::Flat { epsilon } => flat_simplex(d, *epsilon)?,
        SearchStart::Params { params } => return Ok(ShapeCoordinates::new(d, params.clone())?.params().to_vec()),
    };
    Ok(ShapeCoordinates::encode(&s)?.params().to_vec())
}

fn run_restart(d: usize, config: &SearchConfig, seed: u64) -> Result<(Vec<f64>, RestartSummary)> {
    let x0 = start_point(d, config, seed)?;
    let dirs = match (d, config.method) {
        (4, Method::MonteCarlo) => Some(DirectionSet::generate(4, config.samples, seed)?),
        (4, Method::Quadrature) => None,
        (4, m) => return Err(Error::BadShape(format!("{} cannot drive a 4-simplex search", m.name()))),
        _ => None,
    };
    let objective = |x: &[f64]| -> f64 {
        let Ok(s) = ShapeCoordinates::new(d, x.to_vec()).and_then(|c| c.decode()) else {
            return BARRIER;
        };
        let values = match (&dirs, d) {
            (Some(dirs), _) => {
                let cones: Result<Vec<Cone>> = (0..=d).map(|i| Ok(s.vertex_cone(i)?.into())).collect();
                cones.and_then(|c| dirs.measure(&c)).map(|v| v.into_iter().map(|e| e.normalized).collect::<Vec<_>>())
            }
            (None, 4) => (0..=d).map(|i| Ok(volume_s3_quadrature(&s.vertex_cone(i)?)?.normalized)).collect(),
            _ => (0..=d).map(|i| Ok(solid_angle_exact(&s.vertex_cone(i)?.into())?.normalized)).collect(),
        };
        values.map(|v| argmin(v).1).unwrap_or(BARRIER)
    };
    let start_objective = objective(&x0);
    let mut nm = NelderMead::new(&x0, config.step, |x| -objective(x));
    let mut trace = Vec::new();
    let mut status = SearchStatus::MaxIter;
    let mut relaunches = 0;
    while nm.iterations < config.max_iter {
        nm.step();
        trace.push(-nm.best_value());
        if nm.spread() < config.tolerance {
            // a collapsed polytope may have stalled on a kink of the min;
            // a few fresh, smaller polytopes at the best point rule that out
            if relaunches == RELAUNCHES {
                status = SearchStatus::Converged;
                break;
            }
            relaunches += 1;
            nm.relaunch(config.step * 0.25_f64.powi(relaunches));
        }
    }
    let best = -nm.best_value();
    if best <= BARRIER {
        status = SearchStatus::DegenerateBoundary;
    }
    let iterations = nm.iterations;
    Ok((
        nm.best_point().to_vec(),
        RestartSummary { seed, start_objective, best_objective: best, iterations, status, trace },
    ))
}

/// Nelder–Mead minimizer with standard coefficients.
struct NelderMead<F: Fn(&[f64]) -> f64> {
    f: F,
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
    iterations: usize,
}

impl<F: Fn(&[f64]) -> f64> NelderMead<F> {
    fn new(x0: &[f64], step: f64, f: F) -> Self {
        let mut nm = Self { f, points: Vec::new(), values: Vec::new(), iterations: 0 };
        nm.build(x0.to_vec(), None, step);
        nm
    }

    fn build(&mut self, x0: Vec<f64>, f0: Option<f64>, step: f64) {
        let n = x0.len();
        let v0 = f0.unwrap_or_else(|| (self.f)(&x0));
        self.points = vec![x0.clone()];
        self.values = vec![v0];
        for i in 0..n {
            let mut x = x0.clone();
            x[i] += step;
            self.values.push((self.f)(&x));
            self.points.push(x);
        }
        self.sort();
    }

    fn relaunch(&mut self, step: f64) {
        let (x, v) = (self.points[0].clone(), self.values[0]);
        self.build(x, Some(v), step);
    }

    fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.points = idx.iter().map(|&i| self.points[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
    }

    fn best_value(&self) -> f64 {
        self.values[0]
    }

    fn best_point(&self) -> &[f64] {
        &self.points[0]
    }

    fn spread(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }

    fn step(&mut self) {
        self.iterations += 1;
        let n = self.points.len() - 1;
        let centroid: Vec<f64> =
            (0..n).map(|j| self.points[..n].iter().map(|p| p[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64, worst: &[f64]| -> Vec<f64> { centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect() };
        let worst = self.points[n].clone();
        let xr = along(1.0, &worst);
        let fr = (self.f)(&xr);
        if fr < self.values[0] {
            let xe = along(2.0, &worst);
            let fe = (self.f)(&xe);
            if fe < fr {
                self.replace_worst(xe, fe);
            } else {
                self.replace_worst(xr, fr);
            }
        } else if fr < self.values[n - 1] {
            self.replace_worst(xr, fr);
        } else {
            let (xc, fc) = if fr < self.values[n] {
                let x = along(0.5, &worst);
                let v = (self.f)(&x);
                (x, v)
            } else {
                let x = along(-0.5, &worst);
                let v = (self.f)(&x);
                (x, v)
            };
            if fc < fr.min(self.values[n]) {
                self.replace_worst(xc, fc);
            } else {
                let best = self.points[0].clone();
                for i in 1..=n {
                    let x: Vec<f64> = best.iter().zip(&self.points[i]).map(|(b, p)| b + 0.5 * (p - b)).collect();
                    self.values[i] = (self.f)(&x);
                    self.points[i] = x;
                }
                self.sort();
            }
        }
    }

    fn replace_worst(&mut self, x: Vec<f64>, v: f64) {
        let n = self.points.len() - 1;
        self.points[n] = x;
        self.values[n] = v;
        self.sort();
    }
}

/// Smallest value with its index, plus the comparison verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub index: usize,
    pub value: f64,
    pub reference: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlatonicReport {
    pub reference: RegularSolid,
    /// Vertex solid angles, normalized.
    pub solid: Witness,
    /// Dihedral angles, radians.
    pub dihedral: Witness,
}

impl PlatonicReport {
    pub fn passed(&self) -> bool {
        self.solid.ok && self.dihedral.ok
    }
}

pub const EXACT_SLACK: f64 = 1e-10;

/// Whether some vertex solid angle and some dihedral angle of `p` are no
/// larger than those of the regular solid with the same vertex count.
pub fn theorem_platonic_check(p: &Body, reference: RegularSolid) -> Result<PlatonicReport> {
    if reference.dim() != 3 || p.dim() != 3 || p.vertex_count() != reference.vertex_count() {
        return Err(Error::CombinatoricsMismatch(format!(
            "{}-dimensional body with {} vertices against the {reference}",
            p.dim(),
            p.vertex_count()
        )));
    }
    let angles = p.vertex_cones()?.iter().map(|c| Ok(solid_angle_exact(c)?.normalized)).collect::<Result<Vec<_>>>()?;
    let (vi, vmin) = argmin(angles);
    let (di, dmin) = argmin(p.dihedral_angles()?);
    let rv = platonic_vertex_angle(reference)?.normalized;
    let rd = platonic_dihedral(reference)?;
    Ok(PlatonicReport {
        reference,
        solid: Witness { index: vi, value: vmin, reference: rv, ok: vmin <= rv + EXACT_SLACK },
        dihedral: Witness { index: di, value: dmin, reference: rd, ok: dmin <= rd + EXACT_SLACK },
    })
}

/// How vertex solid angles of 4-bodies are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum VertexMethod {
    MonteCarlo { samples: u64, seed: u64 },
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexItem {
    pub index: usize,
    pub estimate: MeasureEstimate,
    pub reference: MeasureEstimate,
    pub gap: f64,
    pub stderr: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem4dReport {
    pub reference: Reference4d,
    pub vertex: VertexItem,
    /// Edge figures in steradians.
    pub edge: Witness,
    /// Dihedral angles in radians.
    pub dihedral: Witness,
    /// Largest dihedral deviation from the reference value.
    pub deviation: f64,
    /// Set when the body is outside the neighbourhood the theorems cover.
    pub advisory: bool,
}

impl Theorem4dReport {
    pub fn passed(&self) -> bool {
        self.vertex.ok && self.edge.ok && self.dihedral.ok
    }
}

/// Radius, in dihedral deviation, inside which the local theorems are checked.
pub const LOCAL_RADIUS_4D: f64 = 0.05;

fn is_orthant_frame(c: &SimplicialCone) -> bool {
    let g = c.generators();
    (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].dot(&g[j]).abs() < 1e-12))
}

/// The three 4-dimensional comparisons: some vertex angle, some edge
/// figure and some dihedral angle no larger than the reference body's.
pub fn theorem_4d_check(p: &Body, reference: Reference4d, method: VertexMethod) -> Result<Theorem4dReport> {
    if p.dim() != 4 || p.vertex_count() != reference.vertex_count() || !p.is_simple() {
        return Err(Error::CombinatoricsMismatch(format!(
            "{}-dimensional body with {} vertices against the {reference:?}",
            p.dim(),
            p.vertex_count()
        )));
    }
    let cones: Vec<SimplicialCone> = p
        .vertex_cones()?
        .into_iter()
        .map(|c| c.as_simplicial().cloned().ok_or_else(|| Error::CombinatoricsMismatch("non-simplicial vertex cone".into())))
        .collect::<Result<_>>()?;
    let estimates: Vec<MeasureEstimate> = if cones.iter().all(is_orthant_frame) {
        vec![MeasureEstimate::exact(1.0 / 16.0); cones.len()]
    } else {
        match method {
            VertexMethod::MonteCarlo { samples, seed } => {
                let all: Vec<Cone> = cones.iter().cloned().map(Cone::from).collect();
                solid_angles_mc(&all, samples, seed)?
            }
            VertexMethod::Quadrature => cones.par_iter().map(volume_s3_quadrature).collect::<Result<_>>()?,
        }
    };
    let (vi, _) = argmin(estimates.iter().map(|e| e.normalized));
    let vref = match (method, reference) {
        (VertexMethod::Quadrature, Reference4d::Simplex | Reference4d::Cell120) => {
            volume_s3_quadrature(reference.body()?.vertex_cone(0)?.as_simplicial().expect("simple reference"))?
        }
        _ => reference.vertex_angle(),
    };
    let est = estimates[vi];
    let gap = est.normalized - vref.normalized;
    let stderr = est.stderr.hypot(vref.stderr);
    let vertex = VertexItem { index: vi, estimate: est, reference: vref, gap, stderr, ok: gap <= 3.0 * stderr + EXACT_SLACK };

    let figures = p.edge_figures()?;
    let areas =
        figures.iter().map(|f| Ok(solid_angle_exact(&f.cone.clone().into())?.normalized * 4.0 * PI)).collect::<Result<Vec<_>>>()?;
    let (ei, emin) = argmin(areas);
    let eref = reference.edge_figure();
    let dihedrals = p.dihedral_angles()?;
    let rd = reference.dihedral();
    let deviation = dihedrals.iter().map(|x| (x - rd).abs()).fold(0.0, f64::max);
    let (di, dmin) = argmin(dihedrals);
    Ok(Theorem4dReport {
        reference,
        vertex,
        edge: Witness { index: ei, value: emin, reference: eref, ok: emin <= eref + EXACT_SLACK },
        dihedral: Witness { index: di, value: dmin, reference: rd, ok: dmin <= rd + EXACT_SLACK },
        deviation,
        advisory: deviation > LOCAL_RADIUS_4D,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RidgePair {
    /// Facets (opposite vertices) meeting at the ridge.
    pub ridge: (usize, usize),
    pub angle1: f64,
    pub angle2: f64,
}

/// A ridge where the dihedral angle of `t1` does not exceed that of `t2`,
/// by exhaustive scan; the ridge with the most negative difference wins,
/// lowest index on ties.
pub fn rivin_pairing(t1: &EuclideanSimplex, t2: &EuclideanSimplex) -> Result<RidgePair> {
    if t1.dim() != t2.dim() {
        return Err(Error::CombinatoricsMismatch(format!("simplices of dimension {} and {}", t1.dim(), t2.dim())));
    }
    let (a, b) = (t1.dihedral_angles()?, t2.dihedral_angles()?);
    let (i, diff) = argmin(a.iter().zip(&b).map(|(x, y)| x - y));
    if diff > 1e-12 {
        return Err(Error::NotFound(format!("every dihedral angle of the first simplex is larger, by at least {diff:e}")));
    }
    Ok(RidgePair { ridge: t1.ridges()[i], angle1: a[i], angle2: b[i] })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RidgeProbeReport {
    pub ridges: usize,
    /// Whether some ridge has `dihedral(p1) <= dihedral(p2)`.
    pub exists: bool,
    /// Ridge index and value of the smallest `dihedral(p1) - dihedral(p2)`.
    pub best: (usize, f64),
    /// Ridge index and value of the largest difference.
    pub worst: (usize, f64),
}

/// Ridge-by-ridge comparison of two bodies with the same combinatorics,
/// matched by ridge index.
pub fn polytope_ridge_probe(p1: &Body, p2: &Body) -> Result<RidgeProbeReport> {
    let ridge_keys = |p: &Body| -> Vec<[usize; 2]> {
        match p {
            Body::Polytope(q) => q.ridges().iter().map(|r| r.facets).collect(),
            Body::Simplex(s) => s.ridges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    };
    if p1.dim() != p2.dim() || p1.vertex_count() != p2.vertex_count() || ridge_keys(p1) != ridge_keys(p2) {
        return Err(Error::CombinatoricsMismatch("bodies do not share ridge combinatorics".into()));
    }
    let (a, b) = (p1.dihedral_angles()?, p2.dihedral_angles()?);
    let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let best = argmin(diffs.iter().copied());
    let worst = diffs.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |w, (i, v)| if v > w.1 { (i, v) } else { w });
    Ok(RidgeProbeReport { ridges: diffs.len(), exists: best.1 <= 1e-12, best, worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{needle_tetrahedron, regular_polytope};
    use crate::rng::random_orthogonal;

    fn similar(s: &EuclideanSimplex, seed: u64) -> EuclideanSimplex {
        let mut rng = stream_rng(seed, 0);
        let d = s.dim();
        let q = random_orthogonal(&mut rng, d);
        s.transformed(&q, 3.7, &Point::from_element(d, -1.25)).unwrap()
    }

    #[test]
    fn shape_coordinates_round_trip() {
        let mut rng = stream_rng(2, 0);
        for d in 2..=4 {
            assert_eq!(ShapeCoordinates::parameter_count(d), d * (d + 1) / 2 - 1);
            for _ in 0..20 {
                let c = ShapeCoordinates::encode(&random_simplex(&mut rng, d)).unwrap();
                let again = ShapeCoordinates::encode(&c.decode().unwrap()).unwrap();
                for (a, b) in c.params().iter().zip(again.params()) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
        assert!(ShapeCoordinates::new(3, vec![0.0; 4]).is_err());
    }

    #[test]
    fn canonical_form_ignores_similarities() {
        let mut rng = stream_rng(4, 0);
        let s = random_simplex(&mut rng, 4);
        let t = similar(&s, 5);
        let (a, b) = (ShapeCoordinates::encode(&s).unwrap(), ShapeCoordinates::encode(&t).unwrap());
        for (x, y) in a.params().iter().zip(b.params()) {
            assert!((x - y).abs() < 1e-10);
        }
        let s3 = random_simplex(&mut rng, 3);
        let e1 = min_vertex_solid_angle(&s3, Method::Exact, 0, 0).unwrap();
        let e2 = min_vertex_solid_angle(&similar(&s3, 6), Method::Exact, 0, 0).unwrap();
        assert_eq!(e1.vertex, e2.vertex);
        assert!((e1.estimate.normalized - e2.estimate.normalized).abs() < 1e-10);
        let m1 = min_vertex_solid_angle(&s, Method::MonteCarlo, 100_000, 9).unwrap();
        let m2 = min_vertex_solid_angle(&t, Method::MonteCarlo, 100_000, 9).unwrap();
        assert_eq!(m1, m2);
    }

    #[test]
    fn regular_and_needle_minima() {
        let r = min_vertex_solid_angle(&regular_simplex(3).unwrap(), Method::Exact, 0, 0).unwrap();
        assert!((r.estimate.natural(2).unwrap() - (3.0 * (1.0_f64 / 3.0).acos() - PI)).abs() < 1e-12);
        let t = min_vertex_solid_angle(&regular_simplex(2).unwrap(), Method::Exact, 0, 0).unwrap();
        assert!((t.estimate.natural(1).unwrap() - PI / 3.0).abs() < 1e-12);
        let needle = needle_tetrahedron(1e-3).unwrap();
        let m = min_vertex_solid_angle(&needle, Method::Exact, 0, 0).unwrap();
        assert!(m.vertex < 3 && m.estimate.normalized < 0.01);
        let all = vertex_solid_angles(&needle, Method::Exact, 0, 0).unwrap();
        let mean = all.iter().map(|e| e.natural(2).unwrap()).sum::<f64>() / 4.0;
        assert!((mean - PI / 2.0).abs() < 0.05, "{mean}");
    }

    #[test]
    fn regular_gaps_vanish() {
        for d in 2..=4 {
            for k in 0..=d - 2 {
                let method = if d - k == 4 { Method::Quadrature } else { Method::Exact };
                let g = conjecture_gap(&regular_simplex(d).unwrap(), k, method, 0, 0).unwrap();
                assert!(g.gap.abs() < 1e-12, "d={d} k={k}: {g:?}");
            }
        }
        assert!(conjecture_gap(&regular_simplex(3).unwrap(), 2, Method::Exact, 0, 0).is_err());
    }

    #[test]
    fn flat_start_improves() {
        let cfg = SearchConfig {
            restarts: 2,
            max_iter: 300,
            start: SearchStart::Flat { epsilon: 1e-3 },
            method: Method::Exact,
            ..Default::default()
        };
        let r = search_max_min_angle(3, &cfg).unwrap();
        for s in &r.restarts {
            assert!(s.start_objective < 1e-3);
            assert!(s.best_objective > s.start_objective);
            assert!(s.trace.windows(2).all(|w| w[1] >= w[0]));
        }
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn exact_regular_solids_meet_their_references() {
        let cube = regular_polytope(RegularSolid::Cube).unwrap();
        let r = theorem_platonic_check(&cube, RegularSolid::Cube).unwrap();
        assert!(r.passed());
        assert!((r.solid.value - r.solid.reference).abs() < 1e-12);
        assert!((r.dihedral.value - r.dihedral.reference).abs() < 1e-12);
        assert!(matches!(theorem_platonic_check(&cube, RegularSolid::Octahedron), Err(Error::CombinatoricsMismatch(_))));

        let tess = regular_polytope(RegularSolid::Tesseract).unwrap();
        let r = theorem_4d_check(&tess, Reference4d::Tesseract, VertexMethod::MonteCarlo { samples: 1000, seed: 1 }).unwrap();
        assert!(r.passed() && !r.advisory);
        assert_eq!(r.vertex.estimate.normalized, 1.0 / 16.0);
        assert!((r.edge.value - PI / 2.0).abs() < 1e-12);
        assert!((r.dihedral.value - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rivin_scan() {
        let mut rng = stream_rng(8, 0);
        let s = random_simplex(&mut rng, 3);
        let p = rivin_pairing(&s, &s).unwrap();
        assert_eq!(p.angle1, p.angle2);
        assert_eq!(p.ridge, s.ridges()[0]);
        let needle = needle_tetrahedron(1e-2).unwrap();
        let reg = regular_simplex(3).unwrap();
        let p = rivin_pairing(&needle, &reg).unwrap();
        assert!(p.angle1 <= p.angle2);
        let q = rivin_pairing(&reg, &needle).unwrap();
        assert!(q.angle1 <= q.angle2);
    }

    #[test]
    fn ridge_probe_on_identical_bodies() {
        let cube = regular_polytope(RegularSolid::Cube).unwrap();
        let r = polytope_ridge_probe(&cube, &cube).unwrap();
        assert!(r.exists && r.best.1 == 0.0);
        let a = perturb(&cube, 1e-2, 1).unwrap();
        let b = perturb(&cube, 1e-2, 2).unwrap();
        assert!(polytope_ridge_probe(&a, &b).unwrap().exists);
        let oct = regular_polytope(RegularSolid::Octahedron).unwrap();
        assert!(polytope_ridge_probe(&cube, &oct).is_err());
    }
}
