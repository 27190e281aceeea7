//! Small dense helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::error::{degenerate, Result};

pub type Point = DVector<f64>;

pub fn col_matrix(cols: &[Point]) -> DMatrix<f64> {
    let d = cols.first().map_or(0, |c| c.len());
    DMatrix::from_fn(d, cols.len(), |i, j| cols[j][i])
}

/// Unit vector along `v`, or `Degenerate` when `v` is (numerically) zero.
pub fn normalized(v: &Point) -> Result<Point> {
    let n = v.norm();
    if !(n > 1e-300) || !n.is_finite() {
        return Err(degenerate("zero-length direction"));
    }
    Ok(v / n)
}

/// Angle between two vectors in `[0, π]`, robust near 0 and π.
pub fn angle_between(a: &Point, b: &Point) -> f64 {
    let dot = a.dot(b);
    let perp = b - a * (dot / a.norm_squared());
    (perp.norm() * a.norm()).atan2(dot)
}

pub fn angle3(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Orthonormal basis of span(vectors) via modified Gram-Schmidt (two passes).
pub fn orthonormal_basis(vectors: &[Point]) -> Result<Vec<Point>> {
    let mut basis: Vec<Point> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let scale = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w -= b * c;
            }
        }
        let n = w.norm();
        if !(n > 1e-12 * scale.max(1e-300)) {
            return Err(degenerate("vectors are linearly dependent"));
        }
        basis.push(w / n);
    }
    Ok(basis)
}

/// Orthonormal basis of the orthogonal complement of an orthonormal set in R^d.
pub fn orthogonal_complement(orthonormal: &[Point], dim: usize) -> Vec<Point> {
    let mut basis: Vec<Point> = orthonormal.to_vec();
    let mut out = Vec::with_capacity(dim - orthonormal.len());
    while basis.len() < dim {
        // pick the standard axis with the largest residual
        let mut best: Option<(f64, Point)> = None;
        for k in 0..dim {
            let mut w = Point::zeros(dim);
            w[k] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&w);
                    w -= b * c;
                }
            }
            let n = w.norm();
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, w));
            }
        }
        let (n, w) = best.expect("dim > 0");
        let w = w / n;
        basis.push(w.clone());
        out.push(w);
    }
    out
}

/// Unit normal to the hyperplane spanned by `d-1` vectors in R^d
/// (generalized cross product from signed minors).
pub fn hyperplane_normal(vectors: &[Point]) -> Result<Point> {
    let d = vectors.len() + 1;
    if vectors.iter().any(|v| v.len() != d) {
        return Err(degenerate("hyperplane_normal needs d-1 vectors in R^d"));
    }
    let m = DMatrix::from_fn(d - 1, d, |i, j| vectors[i][j]);
    let mut n = Point::zeros(d);
    for k in 0..d {
        let minor = m.clone().remove_column(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        n[k] = sign * minor.determinant();
    }
    let scale: f64 = vectors.iter().map(|v| v.norm()).product();
    if !(n.norm() > 1e-12 * scale) {
        return Err(degenerate("spanning vectors are dependent"));
    }
    normalized(&n)
}

pub fn to_vector3(p: &Point) -> Vector3<f64> {
    Vector3::new(p[0], p[1], p[2])
}
