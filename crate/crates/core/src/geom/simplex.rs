use nalgebra::DMatrix;

use super::cone::{SimplicialCone, DET_TOL};
use crate::error::{degenerate, Error, Result};
use crate::linalg::{angle_between, col_matrix, hyperplane_normal, Point};

/// `d+1` affinely independent points in R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanSimplex {
    vertices: Vec<Point>,
}

impl EuclideanSimplex {
    /// Validates vertex counts and non-degeneracy.
    ///
    /// The edge matrix from vertex 0 must satisfy
    /// `|det| > DET_TOL * prod(|edge|)`.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let count = vertices.len();
        if count < 3 {
            return Err(Error::BadShape(format!("a simplex needs at least 3 vertices, got {count}")));
        }
        let d = count - 1;
        if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != d) {
            return Err(Error::BadShape(format!(
                "vertex {i} has {} coordinates but {count} vertices require dimension {d}",
                v.len()
            )));
        }
        if vertices.iter().any(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::BadShape("non-finite coordinate".into()));
        }
        let edges: Vec<Point> = vertices[1..].iter().map(|v| v - &vertices[0]).collect();
        let scale: f64 = edges.iter().map(|e| e.norm()).product();
        let det = col_matrix(&edges).determinant();
        if !(det.abs() > DET_TOL * scale) || scale == 0.0 {
            return Err(degenerate(format!("edge determinant {det:e} below tolerance (edge-norm product {scale:e})")));
        }
        Ok(Self { vertices })
    }

    /// Convenience constructor from coordinate rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Point::from_column_slice(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn centroid(&self) -> Point {
        let sum = self.vertices.iter().fold(Point::zeros(self.dim()), |acc, v| acc + v);
        sum / self.vertices.len() as f64
    }

    /// All pairwise distances, ordered by `(i, j)` with `i < j`.
    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push((&self.vertices[i] - &self.vertices[j]).norm());
            }
        }
        out
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.vertices.len() {
            return Err(Error::BadIndex { index: i, count: self.vertices.len() });
        }
        Ok(())
    }

    /// Cone spanned at vertex `i` by the edges towards the other vertices,
    /// in increasing vertex order.
    pub fn vertex_cone(&self, i: usize) -> Result<SimplicialCone> {
        self.check_index(i)?;
        let apex = &self.vertices[i];
        SimplicialCone::new(
            self.vertices
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v - apex)
                .collect(),
        )
    }

    /// Face figure of a `k`-face given by `k+1` vertex indices: the cone of
    /// the remaining vertices seen from the face, living in R^{d-k}.
    pub fn face_figure_cone(&self, face: &[usize]) -> Result<SimplicialCone> {
        let d = self.dim();
        if face.is_empty() || face.len() > d - 1 {
            return Err(Error::BadShape(format!(
                "face must have between 1 and {} vertices, got {}",
                d - 1,
                face.len()
            )));
        }
        for &f in face {
            self.check_index(f)?;
        }
        let mut sorted = face.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != face.len() {
            return Err(Error::BadShape("repeated vertex in face".into()));
        }
        let base = face[0];
        let cone = self.vertex_cone(base)?;
        // generator index of vertex j in the cone at `base`
        let gen_index = |j: usize| if j < base { j } else { j - 1 };
        let along: Vec<usize> = face[1..].iter().map(|&j| gen_index(j)).collect();
        if along.is_empty() {
            return Ok(cone);
        }
        cone.face_figure(&along)
    }

    /// Unit outward normal of the facet opposite vertex `i`.
    pub fn facet_normal(&self, i: usize) -> Result<Point> {
        self.check_index(i)?;
        let others: Vec<&Point> = self.vertices.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).collect();
        let edges: Vec<Point> = others[1..].iter().map(|v| *v - others[0]).collect();
        let n = hyperplane_normal(&edges)?;
        let towards = &self.vertices[i] - others[0];
        Ok(if n.dot(&towards) > 0.0 { -n } else { n })
    }

    pub fn facet_normals(&self) -> Result<Vec<Point>> {
        (0..self.vertices.len()).map(|i| self.facet_normal(i)).collect()
    }

    /// Ridges as the pairs `(i, j)`, `i < j`, of vertices they omit.
    pub fn ridges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push((i, j));
            }
        }
        out
    }

    /// Interior dihedral angle at the ridge omitting vertices `i` and `j`.
    pub fn dihedral_angle(&self, i: usize, j: usize) -> Result<f64> {
        let ni = self.facet_normal(i)?;
        let nj = self.facet_normal(j)?;
        Ok(std::f64::consts::PI - angle_between(&ni, &nj))
    }

    /// Dihedral angles in `ridges()` order.
    pub fn dihedral_angles(&self) -> Result<Vec<f64>> {
        let normals = self.facet_normals()?;
        Ok(self
            .ridges()
            .into_iter()
            .map(|(i, j)| std::f64::consts::PI - angle_between(&normals[i], &normals[j]))
            .collect())
    }

    /// Applies `x -> scale * map * x + shift`.
    pub fn transformed(&self, map: &DMatrix<f64>, scale: f64, shift: &Point) -> Result<Self> {
        Self::new(self.vertices.iter().map(|v| map * v * scale + shift).collect())
    }
}

/// Regular simplex with unit circumradius and centroid at the origin.
pub fn regular_simplex(d: usize) -> Result<EuclideanSimplex> {
    if d < 2 {
        return Err(Error::BadDim(d));
    }
    // e_i - centroid in R^{d+1}, expressed in an orthonormal basis of the
    // hyperplane orthogonal to (1, ..., 1).
    let n = d + 1;
    let ones = Point::from_element(n, 1.0 / (n as f64).sqrt());
    let mut basis: Vec<Point> = Vec::with_capacity(d);
    for k in 0..d {
        let mut w = Point::zeros(n);
        w[k] = 1.0;
        for _ in 0..2 {
            w -= &ones * ones.dot(&w);
            for b in &basis {
                let c = b.dot(&w);
                w -= b * c;
            }
        }
        let len = w.norm();
        basis.push(w / len);
    }
    let radius = ((n as f64 - 1.0) / n as f64).sqrt();
    let vertices = (0..n)
        .map(|i| {
            let mut p = Point::from_element(n, -1.0 / n as f64);
            p[i] += 1.0;
            Point::from_iterator(d, basis.iter().map(|b| b.dot(&p) / radius))
        })
        .collect();
    EuclideanSimplex::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn right_corner_tetrahedron_is_valid() {
        let s = EuclideanSimplex::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert!(s.is_ok());
    }

    #[test]
    fn collinear_triangle_is_degenerate() {
        let s = EuclideanSimplex::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]);
        assert!(matches!(s, Err(Error::Degenerate(_))));
    }

    #[test]
    fn wrong_counts_are_bad_shape() {
        let s = EuclideanSimplex::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(s, Err(Error::BadShape(_))));
        let s = EuclideanSimplex::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(s, Err(Error::BadShape(_))));
    }

    #[test]
    fn regular_simplices_are_regular() {
        for d in 2..=6 {
            let s = regular_simplex(d).unwrap();
            let lengths = s.edge_lengths();
            let first = lengths[0];
            for l in &lengths {
                assert!((l - first).abs() < 1e-12, "d={d}");
            }
            assert!(s.centroid().norm() < 1e-12);
            for v in s.vertices() {
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn equilateral_plane_angles() {
        let s = regular_simplex(2).unwrap();
        for i in 0..3 {
            let c = s.vertex_cone(i).unwrap();
            let g = c.generators();
            assert!((angle_between(&g[0], &g[1]) - PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn regular_dihedral_angles() {
        // cos(dihedral) = 1/d for the regular d-simplex
        for d in [3usize, 4] {
            let s = regular_simplex(d).unwrap();
            for a in s.dihedral_angles().unwrap() {
                assert!((a - (1.0 / d as f64).acos()).abs() < 1e-12, "d={d}");
            }
        }
    }

    #[test]
    fn ridge_face_figure_matches_dihedral() {
        let s = EuclideanSimplex::from_rows(&[
            vec![0.1, -0.3, 0.2],
            vec![1.3, 0.1, 0.0],
            vec![0.2, 0.9, -0.4],
            vec![-0.2, 0.4, 1.1],
        ])
        .unwrap();
        // ridge = edge {2,3}, i.e. omits vertices 0 and 1
        let fig = s.face_figure_cone(&[2, 3]).unwrap();
        let g = fig.generators();
        let plane = angle_between(&g[0], &g[1]);
        assert!((plane - s.dihedral_angle(0, 1).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn right_corner_edge_figure_is_quarter_plane() {
        let s = EuclideanSimplex::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let fig = s.face_figure_cone(&[0, 1]).unwrap();
        let g = fig.generators();
        assert!((angle_between(&g[0], &g[1]) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn bad_vertex_index() {
        let s = regular_simplex(3).unwrap();
        assert!(matches!(s.vertex_cone(4), Err(Error::BadIndex { .. })));
    }
}
