//! Degenerate fixtures, random simplices and combinatorics-preserving
//! perturbations.

use rand::Rng;

use super::body::Body;
use super::polytope::SimplePolytope;
use super::simplex::{regular_simplex, EuclideanSimplex};
use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::rng::{gaussian_vector, stream_rng, uniform_ball};

/// Nearly flat simplex: `d+1` points in convex position in R^{d-1}, lifted
/// by `±eps` along the signs of their affine dependence.
///
/// The base is a square for `d = 3` and a bipyramid over the regular
/// `(d-1)`-simplex for `d >= 4`. All solid angles vanish as `eps -> 0`.
pub fn flat_simplex(d: usize, eps: f64) -> Result<EuclideanSimplex> {
    if d < 3 {
        return Err(Error::BadDim(d));
    }
    if !(eps > 0.0) {
        return Err(Error::BadShape("eps must be positive".into()));
    }
    let (base, signs): (Vec<Point>, Vec<f64>) = if d == 3 {
        let pts = (0..4)
            .map(|k| {
                let t = k as f64 * std::f64::consts::FRAC_PI_2;
                Point::from_column_slice(&[t.cos(), t.sin()])
            })
            .collect();
        (pts, vec![1.0, -1.0, 1.0, -1.0])
    } else {
        let s = regular_simplex(d - 1)?;
        let mut pts = s.vertices().to_vec();
        let apex = &pts[0] * (-((d + 1) as f64) / (d - 1) as f64);
        pts.push(apex);
        let mut signs = vec![-1.0; d + 1];
        signs[0] = 1.0;
        signs[d] = 1.0;
        (pts, signs)
    };
    let vertices = base
        .iter()
        .zip(&signs)
        .map(|(p, s)| {
            let mut v = Point::zeros(d);
            v.rows_mut(0, d - 1).copy_from(p);
            v[d - 1] = s * eps;
            v
        })
        .collect();
    EuclideanSimplex::new(vertices)
}

/// Equilateral base triangle (unit circumradius) with the apex at height
/// `eps` above its centroid. Vertex 3 is the apex.
pub fn needle_tetrahedron(eps: f64) -> Result<EuclideanSimplex> {
    if !(eps > 0.0) {
        return Err(Error::BadShape("eps must be positive".into()));
    }
    let tri = regular_simplex(2)?;
    let mut vertices: Vec<Point> = tri.vertices().iter().map(|p| Point::from_column_slice(&[p[0], p[1], 0.0])).collect();
    vertices.push(Point::from_column_slice(&[0.0, 0.0, eps]));
    EuclideanSimplex::new(vertices)
}

/// Simplex with i.i.d. standard Gaussian vertices, redrawn until valid.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, d: usize) -> EuclideanSimplex {
    loop {
        let vertices = (0..=d).map(|_| gaussian_vector(rng, d)).collect();
        if let Ok(s) = EuclideanSimplex::new(vertices) {
            return s;
        }
    }
}

/// Random body of the same combinatorics with every vertex displaced by at
/// most `eps`.
///
/// Simplices and polytopes with simplex facets get independent uniform
/// displacements in the `eps`-ball. Simple polytopes with larger facets have
/// their facet hyperplanes perturbed instead (vertex jitter would bend the
/// facets), then the step is scaled until no vertex moves more than `eps`.
pub fn perturb(body: &Body, eps: f64, seed: u64) -> Result<Body> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::BadShape(format!("perturbation size must be finite and nonnegative, got {eps}")));
    }
    if eps == 0.0 {
        return Ok(body.clone());
    }
    let mut rng = stream_rng(seed, 0);
    let d = body.dim();
    match body {
        Body::Simplex(s) => {
            let vertices = s.vertices().iter().map(|v| v + uniform_ball(&mut rng, d) * eps).collect();
            EuclideanSimplex::new(vertices)
                .map(Body::Simplex)
                .map_err(|e| Error::CombinatoricsBroken(format!("perturbed simplex invalid: {e}")))
        }
        Body::Polytope(p) => Ok(Body::Polytope(perturb_polytope(p, eps, &mut rng)?)),
    }
}

fn perturb_polytope<R: Rng + ?Sized>(p: &SimplePolytope, eps: f64, rng: &mut R) -> Result<SimplePolytope> {
    let d = p.dim();
    let simplex_facets = p.facets().iter().all(|f| f.vertices.len() == d);
    let rebuilt = if simplex_facets {
        let vertices: Vec<Point> = p.vertices().iter().map(|v| v + uniform_ball(rng, d) * eps).collect();
        SimplePolytope::from_parts(d, vertices, p.all_neighbors().to_vec())
    } else if p.is_simple() {
        let vertices = perturbed_hyperplane_vertices(p, eps, rng)?;
        SimplePolytope::from_parts(d, vertices, p.all_neighbors().to_vec())
    } else {
        return Err(Error::CombinatoricsBroken(
            "non-simple polytope with non-simplex facets cannot be perturbed without bending facets".into(),
        ));
    };
    let q = rebuilt.map_err(|e| Error::CombinatoricsBroken(format!("perturbed polytope invalid: {e}")))?;
    if q.facets().len() != p.facets().len() || q.ridges().len() != p.ridges().len() {
        return Err(Error::CombinatoricsBroken(format!(
            "face counts changed ({} -> {} facets, {} -> {} ridges)",
            p.facets().len(),
            q.facets().len(),
            p.ridges().len(),
            q.ridges().len()
        )));
    }
    Ok(q)
}

fn perturbed_hyperplane_vertices<R: Rng + ?Sized>(p: &SimplePolytope, eps: f64, rng: &mut R) -> Result<Vec<Point>> {
    let d = p.dim();
    let jitter: Vec<(Point, f64)> =
        p.facets().iter().map(|_| (uniform_ball(rng, d), rng.random_range(-1.0..=1.0))).collect();
    let solve = |step: f64| -> Result<Vec<Point>> {
        let planes: Vec<(Point, f64)> = p
            .facets()
            .iter()
            .zip(&jitter)
            .map(|(f, (u, w))| {
                let n = &f.normal + u * step;
                let len = n.norm();
                (n / len, (f.offset + w * step) / len)
            })
            .collect();
        (0..p.vertex_count())
            .map(|v| {
                let fs = p.vertex_facets(v);
                let a = nalgebra::DMatrix::from_fn(d, d, |i, j| planes[fs[i]].0[j]);
                let b = Point::from_iterator(d, fs.iter().map(|&f| planes[f].1));
                a.lu().solve(&b).ok_or_else(|| Error::CombinatoricsBroken(format!("facets at vertex {v} became dependent")))
            })
            .collect()
    };
    let mut step = eps;
    for _ in 0..8 {
        let vertices = solve(step)?;
        let moved = vertices.iter().zip(p.vertices()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if moved <= eps {
            return Ok(vertices);
        }
        step *= 0.99 * eps / moved;
    }
    Err(Error::CombinatoricsBroken("could not bound vertex displacement".into()))
}
