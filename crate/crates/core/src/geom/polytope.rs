//! Convex polytopes given by vertices and their edge graph.
//!
//! Facets are recovered from local vertex data: each facet through a vertex
//! is spanned by `d-1` of its edge directions, and coincident local facets are
//! merged into global ones. No hull computation is involved.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Vector3};

use super::cone::{cone_from_directions, Cone};
use crate::error::{Error, Result};
use crate::linalg::{angle_between, hyperplane_normal, normalized, Point};

#[derive(Debug, Clone)]
pub struct Facet {
    /// Unit outward normal.
    pub normal: Point,
    /// Support value: `<normal, x> = offset` on the facet.
    pub offset: f64,
    /// Vertices on the facet, ascending.
    pub vertices: Vec<usize>,
}

/// A `(d-2)`-face with its two incident facets.
#[derive(Debug, Clone)]
pub struct Ridge {
    pub facets: [usize; 2],
    pub normals: [Point; 2],
}

impl Ridge {
    /// Interior dihedral angle between the two incident facets.
    pub fn dihedral(&self) -> f64 {
        std::f64::consts::PI - angle_between(&self.normals[0], &self.normals[1])
    }
}

/// Convex polytope in R^3 or R^4.
///
/// Simple polytopes have exactly `d` neighbors per vertex. Non-simple
/// polyhedra (octahedron, icosahedron) are accepted in R^3 with `simple`
/// cleared; their vertex cones are polyhedral.
#[derive(Debug, Clone)]
pub struct SimplePolytope {
    dim: usize,
    vertices: Vec<Point>,
    neighbors: Vec<Vec<usize>>,
    facets: Vec<Facet>,
    vertex_facets: Vec<Vec<usize>>,
    ridges: Vec<Ridge>,
    simple: bool,
}

struct LocalFacet {
    normal: Point,
    offset: f64,
    members: Vec<usize>,
}

impl SimplePolytope {
    pub fn from_parts(dim: usize, vertices: Vec<Point>, neighbors: Vec<Vec<usize>>) -> Result<Self> {
        if dim != 3 && dim != 4 {
            return Err(Error::BadDim(dim));
        }
        if vertices.len() != neighbors.len() {
            return Err(Error::BadShape(format!(
                "{} vertices but {} neighbor lists",
                vertices.len(),
                neighbors.len()
            )));
        }
        if vertices.len() < dim + 1 {
            return Err(Error::BadShape(format!("{} vertices cannot bound a {dim}-polytope", vertices.len())));
        }
        if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::BadShape(format!("vertex {i} has {} coordinates, expected {dim}", v.len())));
        }
        let n = vertices.len();
        for (v, nb) in neighbors.iter().enumerate() {
            for &w in nb {
                if w >= n {
                    return Err(Error::BadIndex { index: w, count: n });
                }
                if w == v || !neighbors[w].contains(&v) {
                    return Err(Error::CombinatoricsBroken(format!("edge list is not symmetric at {v}-{w}")));
                }
            }
            if nb.len() < dim {
                return Err(Error::CombinatoricsBroken(format!("vertex {v} has only {} neighbors", nb.len())));
            }
        }
        let simple = neighbors.iter().all(|nb| nb.len() == dim);
        if !simple && dim != 3 {
            return Err(Error::NotSimple(neighbors.iter().position(|nb| nb.len() != dim).unwrap_or(0)));
        }

        let centroid = vertices.iter().fold(Point::zeros(dim), |a, v| a + v) / n as f64;
        let scale = vertices.iter().map(|v| (v - &centroid).norm()).fold(0.0, f64::max).max(1e-300);
        let merge_tol = 1e-7;
        let on_tol = 1e-9 * scale;

        let mut facets: Vec<Facet> = Vec::new();
        let mut ridge_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for v in 0..n {
            let (locals, adjacent) = local_facets(&vertices, v, &neighbors[v])?;
            let mut ids = Vec::with_capacity(locals.len());
            for lf in locals {
                let found = facets.iter().position(|f| {
                    (&f.normal - &lf.normal).norm() < merge_tol && (f.offset - lf.offset).abs() < merge_tol * scale.max(1.0)
                });
                let id = match found {
                    Some(id) => {
                        let f = &mut facets[id];
                        f.vertices.extend(lf.members);
                        id
                    }
                    None => {
                        facets.push(Facet { normal: lf.normal, offset: lf.offset, vertices: lf.members });
                        facets.len() - 1
                    }
                };
                ids.push(id);
            }
            for (a, b) in adjacent {
                let (fa, fb) = (ids[a], ids[b]);
                if fa == fb {
                    return Err(Error::CombinatoricsBroken(format!("two facets at vertex {v} coincide")));
                }
                ridge_pairs.insert((fa.min(fb), fa.max(fb)));
            }
        }

        for (fi, f) in facets.iter_mut().enumerate() {
            let mut members = BTreeSet::new();
            for (i, x) in vertices.iter().enumerate() {
                let s = f.normal.dot(x) - f.offset;
                if s > on_tol {
                    return Err(Error::CombinatoricsBroken(format!(
                        "vertex {i} lies outside facet {fi} by {s:e}; the body is not convex"
                    )));
                }
                if s >= -on_tol {
                    members.insert(i);
                }
            }
            if members.len() < dim {
                return Err(Error::CombinatoricsBroken(format!("facet {fi} has only {} vertices", members.len())));
            }
            f.vertices = members.into_iter().collect();
        }

        let mut vertex_facets = vec![Vec::new(); n];
        for (fi, f) in facets.iter().enumerate() {
            for &v in &f.vertices {
                vertex_facets[v].push(fi);
            }
        }
        for (v, fs) in vertex_facets.iter().enumerate() {
            if simple && fs.len() != dim {
                return Err(Error::CombinatoricsBroken(format!("vertex {v} lies on {} facets", fs.len())));
            }
        }
        for (v, nb) in neighbors.iter().enumerate() {
            for &w in nb {
                let shared = vertex_facets[v].iter().filter(|f| vertex_facets[w].contains(f)).count();
                if shared < dim - 1 {
                    return Err(Error::CombinatoricsBroken(format!("{v}-{w} is not an edge of the hull")));
                }
            }
        }

        let ridges = ridge_pairs
            .into_iter()
            .map(|(a, b)| Ridge { facets: [a, b], normals: [facets[a].normal.clone(), facets[b].normal.clone()] })
            .collect();

        Ok(Self { dim, vertices, neighbors, facets, vertex_facets, ridges, simple })
    }

    /// Builds the edge graph from the minimal pairwise distance; meant for
    /// vertex-transitive solids with equal edges.
    pub fn from_equal_edges(dim: usize, vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        let mut min = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                min = min.min((&vertices[i] - &vertices[j]).norm());
            }
        }
        let cut = min * (1.0 + 1e-6);
        let neighbors = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && (&vertices[i] - &vertices[j]).norm() <= cut).collect())
            .collect();
        Self::from_parts(dim, vertices, neighbors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn all_neighbors(&self) -> &[Vec<usize>] {
        &self.neighbors
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertex_facets(&self, v: usize) -> &[usize] {
        &self.vertex_facets[v]
    }

    pub fn ridges(&self) -> &[Ridge] {
        &self.ridges
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertex_cone(&self, v: usize) -> Result<Cone> {
        if v >= self.vertices.len() {
            return Err(Error::BadIndex { index: v, count: self.vertices.len() });
        }
        let apex = &self.vertices[v];
        cone_from_directions(self.neighbors[v].iter().map(|&w| &self.vertices[w] - apex).collect())
    }

    /// Dihedral angles in `ridges()` order.
    pub fn dihedral_angles(&self) -> Vec<f64> {
        self.ridges.iter().map(Ridge::dihedral).collect()
    }

    /// Applies `x -> map * x`.
    pub fn transformed(&self, map: &DMatrix<f64>) -> Result<Self> {
        Self::from_parts(self.dim, self.vertices.iter().map(|v| map * v).collect(), self.neighbors.clone())
    }
}

/// Local facets at `v` with the index pairs of local facets meeting in a ridge.
fn local_facets(vertices: &[Point], v: usize, nb: &[usize]) -> Result<(Vec<LocalFacet>, Vec<(usize, usize)>)> {
    let d = vertices[v].len();
    let apex = &vertices[v];
    let edges: Vec<Point> = nb.iter().map(|&w| &vertices[w] - apex).collect();
    let mut out = Vec::new();
    let mut adjacent = Vec::new();
    if nb.len() == d {
        for omit in 0..d {
            let span: Vec<Point> = (0..d).filter(|&k| k != omit).map(|k| edges[k].clone()).collect();
            let mut normal = hyperplane_normal(&span)
                .map_err(|_| Error::CombinatoricsBroken(format!("edges at vertex {v} are dependent")))?;
            if normal.dot(&edges[omit]) > 0.0 {
                normal = -normal;
            }
            let mut members = vec![v];
            members.extend((0..d).filter(|&k| k != omit).map(|k| nb[k]));
            out.push(LocalFacet { offset: normal.dot(apex), normal, members });
        }
        for a in 0..d {
            for b in a + 1..d {
                adjacent.push((a, b));
            }
        }
    } else {
        // non-simple vertex in R^3: facets between cyclically consecutive edges
        let dirs: Vec<Vector3<f64>> =
            edges.iter().map(|e| normalized(e).map(|u| Vector3::new(u[0], u[1], u[2]))).collect::<Result<_>>()?;
        let axis: Vector3<f64> = dirs.iter().sum();
        if axis.norm() < 1e-9 {
            return Err(Error::NotPointed(format!("vertex {v} cone is not pointed")));
        }
        let axis = axis.normalize();
        let helper = if axis.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = axis.cross(&helper).normalize();
        let e2 = axis.cross(&e1);
        let mut order: Vec<usize> = (0..dirs.len()).collect();
        order.sort_by(|&a, &b| {
            let ta = dirs[a].dot(&e2).atan2(dirs[a].dot(&e1));
            let tb = dirs[b].dot(&e2).atan2(dirs[b].dot(&e1));
            ta.total_cmp(&tb)
        });
        let k = order.len();
        let other_mean: Point = edges.iter().fold(Point::zeros(3), |a, e| a + e) / k as f64;
        for i in 0..k {
            let (a, b) = (order[i], order[(i + 1) % k]);
            let c = edges[a].cross(&edges[b]);
            let mut normal = normalized(&c)
                .map_err(|_| Error::CombinatoricsBroken(format!("edges at vertex {v} are parallel")))?;
            if normal.dot(&other_mean) > 0.0 {
                normal = -normal;
            }
            out.push(LocalFacet { offset: normal.dot(apex), normal, members: vec![v, nb[a], nb[b]] });
            adjacent.push((i, (i + 1) % k));
        }
    }
    Ok((out, adjacent))
}
