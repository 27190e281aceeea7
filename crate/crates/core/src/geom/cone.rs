//! Cones at the origin: simplicial cones in any dimension and pointed
//! polyhedral cones in R^3 (vertex cones of non-simple polyhedra).

use nalgebra::{DMatrix, Vector3};

use crate::error::{degenerate, Error, Result};
use crate::linalg::{col_matrix, normalized, orthogonal_complement, orthonormal_basis, Point};

/// Relative determinant threshold for linear independence.
pub const DET_TOL: f64 = 1e-10;
/// Tolerance on unit norms.
pub const NORM_TOL: f64 = 1e-12;
/// Cone coordinates down to this (negative) value still count as inside.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// A cone spanned by `d` linearly independent unit generators in R^d.
///
/// On the sphere it is a spherical `(d-1)`-simplex.
#[derive(Debug, Clone)]
pub struct SimplicialCone {
    generators: Vec<Point>,
    /// Inverse of the generator matrix; row `i` is the functional returning the
    /// `i`-th cone coordinate.
    inverse: DMatrix<f64>,
}

impl SimplicialCone {
    /// Builds a cone from arbitrary nonzero directions, normalizing each.
    pub fn new(directions: Vec<Point>) -> Result<Self> {
        let d = directions.len();
        if d < 2 {
            return Err(Error::BadShape(format!("a simplicial cone needs at least 2 generators, got {d}")));
        }
        if directions.iter().any(|g| g.len() != d) {
            return Err(Error::BadShape(format!("{d} generators must live in R^{d}")));
        }
        let generators = directions.iter().map(normalized).collect::<Result<Vec<_>>>()?;
        let m = col_matrix(&generators);
        let det = m.determinant();
        if !(det.abs() > DET_TOL) {
            return Err(degenerate(format!("generator determinant {det:e} below tolerance")));
        }
        let inverse = m.try_inverse().ok_or_else(|| degenerate("generator matrix is singular"))?;
        Ok(Self { generators, inverse })
    }

    /// Trusted constructor for cones whose inverse is known in closed form.
    pub(crate) fn from_parts(generators: Vec<Point>, inverse: DMatrix<f64>) -> Self {
        Self { generators, inverse }
    }

    /// Positive orthant of R^d.
    pub fn orthant(d: usize) -> Self {
        let gens = (0..d)
            .map(|i| {
                let mut e = Point::zeros(d);
                e[i] = 1.0;
                e
            })
            .collect();
        Self::new(gens).expect("orthant is non-degenerate")
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn generator_matrix(&self) -> DMatrix<f64> {
        col_matrix(&self.generators)
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn determinant(&self) -> f64 {
        self.generator_matrix().determinant()
    }

    /// Coefficients of `x` in the generator basis.
    pub fn coordinates(&self, x: &Point) -> Point {
        &self.inverse * x
    }

    pub fn contains(&self, x: &Point) -> bool {
        let scale = x.norm();
        self.coordinates(x).iter().all(|&c| c >= -MEMBERSHIP_TOL * scale)
    }

    /// Unit inward facet normals: `x` is in the cone iff every `<n_i, x> >= 0`.
    pub fn inward_normals(&self) -> Vec<Point> {
        (0..self.dim())
            .map(|i| {
                let row = self.inverse.row(i).transpose();
                let n = row.norm();
                row / n
            })
            .collect()
    }

    /// Image of the cone under a linear map (usually orthogonal).
    pub fn transformed(&self, map: &DMatrix<f64>) -> Result<Self> {
        Self::new(self.generators.iter().map(|g| map * g).collect())
    }

    /// Cone of the generators outside `face`, projected onto the orthogonal
    /// complement of span(face) and expressed in an orthonormal basis of it.
    ///
    /// For `face = {i}` this is the figure of the cone at its `i`-th edge.
    pub fn face_figure(&self, face: &[usize]) -> Result<Self> {
        let d = self.dim();
        if face.len() + 2 > d {
            return Err(Error::BadShape(format!("face of {} generators leaves fewer than 2 in R^{d}", face.len())));
        }
        if let Some(&bad) = face.iter().find(|&&i| i >= d) {
            return Err(Error::BadIndex { index: bad, count: d });
        }
        let span: Vec<Point> = face.iter().map(|&i| self.generators[i].clone()).collect();
        let face_basis = orthonormal_basis(&span)?;
        let complement = orthogonal_complement(&face_basis, d);
        let rest = (0..d)
            .filter(|i| !face.contains(i))
            .map(|i| {
                let g = &self.generators[i];
                Point::from_iterator(complement.len(), complement.iter().map(|b| b.dot(g)))
            })
            .collect();
        Self::new(rest)
    }
}

/// A pointed polyhedral cone in R^3 with generators in strictly convex
/// cyclic position, stored counter-clockwise about the cone axis.
#[derive(Debug, Clone)]
pub struct PolyhedralCone {
    generators: Vec<Vector3<f64>>,
}

impl PolyhedralCone {
    pub fn new(directions: Vec<Vector3<f64>>) -> Result<Self> {
        if directions.len() < 3 {
            return Err(Error::BadShape("a polyhedral cone in R^3 needs at least 3 generators".into()));
        }
        let mut gens = Vec::with_capacity(directions.len());
        for d in directions {
            let n = d.norm();
            if !(n > 0.0) {
                return Err(degenerate("zero generator"));
            }
            gens.push(d / n);
        }
        let sum: Vector3<f64> = gens.iter().sum();
        if sum.norm() < 1e-9 {
            return Err(Error::NotPointed("generators balance around the origin".into()));
        }
        let axis = sum.normalize();
        let helper = if axis.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = axis.cross(&helper).normalize();
        let e2 = axis.cross(&e1);
        let mut keyed: Vec<(f64, Vector3<f64>)> =
            gens.into_iter().map(|g| (g.dot(&e2).atan2(g.dot(&e1)), g)).collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
        let generators: Vec<Vector3<f64>> = keyed.into_iter().map(|(_, g)| g).collect();
        let n = generators.len();
        for i in 0..n {
            let a = generators[i];
            let b = generators[(i + 1) % n];
            let normal = a.cross(&b);
            if normal.norm() < 1e-12 {
                return Err(degenerate("adjacent generators coincide or are antipodal"));
            }
            for (j, g) in generators.iter().enumerate() {
                if j != i && j != (i + 1) % n && normal.dot(g) <= 1e-12 {
                    return Err(Error::NotPointed("generators are not in strictly convex position".into()));
                }
            }
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[Vector3<f64>] {
        &self.generators
    }

    /// Unit inward facet normals, one per consecutive generator pair.
    pub fn inward_normals(&self) -> Vec<Vector3<f64>> {
        let n = self.generators.len();
        (0..n)
            .map(|i| self.generators[i].cross(&self.generators[(i + 1) % n]).normalize())
            .collect()
    }
}

/// Vertex cone of any supported body.
#[derive(Debug, Clone)]
pub enum Cone {
    Simplicial(SimplicialCone),
    Polyhedral(PolyhedralCone),
}

impl Cone {
    pub fn dim(&self) -> usize {
        match self {
            Cone::Simplicial(c) => c.dim(),
            Cone::Polyhedral(_) => 3,
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            Cone::Simplicial(c) => c.dim(),
            Cone::Polyhedral(c) => c.generators().len(),
        }
    }

    pub fn generators(&self) -> Vec<Point> {
        match self {
            Cone::Simplicial(c) => c.generators().to_vec(),
            Cone::Polyhedral(c) => c.generators().iter().map(|g| Point::from_column_slice(g.as_slice())).collect(),
        }
    }

    /// Unit inward facet normals (H-representation through the origin).
    pub fn inward_normals(&self) -> Vec<Point> {
        match self {
            Cone::Simplicial(c) => c.inward_normals(),
            Cone::Polyhedral(c) => c
                .inward_normals()
                .iter()
                .map(|g| Point::from_column_slice(g.as_slice()))
                .collect(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        match self {
            Cone::Simplicial(c) => c.contains(x),
            Cone::Polyhedral(_) => {
                let scale = x.norm();
                self.inward_normals().iter().all(|n| n.dot(x) >= -MEMBERSHIP_TOL * scale)
            }
        }
    }

    pub fn as_simplicial(&self) -> Option<&SimplicialCone> {
        match self {
            Cone::Simplicial(c) => Some(c),
            Cone::Polyhedral(_) => None,
        }
    }
}

impl From<SimplicialCone> for Cone {
    fn from(c: SimplicialCone) -> Self {
        Cone::Simplicial(c)
    }
}

impl From<PolyhedralCone> for Cone {
    fn from(c: PolyhedralCone) -> Self {
        Cone::Polyhedral(c)
    }
}

/// Cone in R^d spanned by arbitrary edge directions: simplicial when there
/// are exactly `d`, polyhedral (only in R^3) when there are more.
pub fn cone_from_directions(directions: Vec<Point>) -> Result<Cone> {
    let d = directions.first().map_or(0, |g| g.len());
    match directions.len().cmp(&d) {
        std::cmp::Ordering::Equal => Ok(SimplicialCone::new(directions)?.into()),
        std::cmp::Ordering::Greater if d == 3 => Ok(PolyhedralCone::new(
            directions.iter().map(|g| Vector3::new(g[0], g[1], g[2])).collect(),
        )?
        .into()),
        std::cmp::Ordering::Greater => Err(Error::BadShape(format!(
            "non-simplicial vertex cones are only supported in R^3, got {} generators in R^{d}",
            directions.len()
        ))),
        std::cmp::Ordering::Less => Err(degenerate(format!("{} generators cannot span R^{d}", directions.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::from_column_slice(v)
    }

    #[test]
    fn orthant_membership() {
        let c = SimplicialCone::orthant(3);
        assert!(c.contains(&p(&[0.1, 0.2, 0.3])));
        assert!(c.contains(&p(&[0.0, 0.2, 0.3])));
        assert!(!c.contains(&p(&[-0.1, 0.2, 0.3])));
    }

    #[test]
    fn dependent_generators_rejected() {
        let r = SimplicialCone::new(vec![p(&[1.0, 0.0, 0.0]), p(&[0.0, 1.0, 0.0]), p(&[1.0, 1.0, 0.0])]);
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }

    #[test]
    fn generators_are_normalized() {
        let c = SimplicialCone::new(vec![p(&[3.0, 0.0]), p(&[1.0, 1.0])]).unwrap();
        for g in c.generators() {
            assert!((g.norm() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn inward_normals_orthogonal_to_other_generators() {
        let c = SimplicialCone::new(vec![p(&[1.0, 0.2, 0.1]), p(&[0.1, 1.0, -0.3]), p(&[0.0, 0.4, 1.0])]).unwrap();
        let normals = c.inward_normals();
        for (i, n) in normals.iter().enumerate() {
            for (j, g) in c.generators().iter().enumerate() {
                if i == j {
                    assert!(n.dot(g) > 0.0);
                } else {
                    assert!(n.dot(g).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn polyhedral_cone_orders_generators() {
        let dirs = vec![
            Vector3::new(1.0, 1.0, 1.0),
            Vector3::new(-1.0, -1.0, 1.0),
            Vector3::new(1.0, -1.0, 1.0),
            Vector3::new(-1.0, 1.0, 1.0),
        ];
        let c = PolyhedralCone::new(dirs).unwrap();
        for n in c.inward_normals() {
            assert!(n.z > 0.0);
        }
    }

    #[test]
    fn polyhedral_cone_rejects_half_space() {
        let dirs = vec![
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(-1.0, 0.0, 0.0),
            Vector3::new(0.0, -1.0, 0.0),
        ];
        assert!(PolyhedralCone::new(dirs).is_err());
    }

    #[test]
    fn face_figure_of_orthant_is_orthant() {
        let c = SimplicialCone::orthant(4);
        let f = c.face_figure(&[0]).unwrap();
        assert_eq!(f.dim(), 3);
        let g = f.generators();
        for i in 0..3 {
            for j in 0..i {
                assert!(g[i].dot(&g[j]).abs() < 1e-12);
            }
        }
    }
}
