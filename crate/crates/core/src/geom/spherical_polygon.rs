use nalgebra::Vector3;

use crate::error::{degenerate, Error, Result};

/// Convex polygon on S^2 with counter-clockwise vertices, i.e.
/// `det(v_i, v_{i+1}, v_j) > 0` for every other vertex `v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalPolygon {
    vertices: Vec<Vector3<f64>>,
}

impl SphericalPolygon {
    /// Normalizes the vertices and fixes the orientation; clockwise input is
    /// reversed.
    pub fn new(vertices: Vec<Vector3<f64>>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(degenerate(format!("a spherical polygon needs at least 3 vertices, got {n}")));
        }
        let mut vs = Vec::with_capacity(n);
        for v in vertices {
            let len = v.norm();
            if !(len > 0.0) || !len.is_finite() {
                return Err(degenerate("zero or non-finite vertex"));
            }
            vs.push(v / len);
        }
        for i in 0..n {
            if vs[i].cross(&vs[(i + 1) % n]).norm() < 1e-12 {
                return Err(degenerate(format!("vertices {i} and {} coincide or are antipodal", (i + 1) % n)));
            }
        }
        let sign = orientation(&vs)?;
        if sign < 0.0 {
            vs.reverse();
        }
        Ok(Self { vertices: vs })
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// +1 for counter-clockwise, -1 for clockwise; error when mixed.
fn orientation(vs: &[Vector3<f64>]) -> Result<f64> {
    let n = vs.len();
    let mut sign = 0.0;
    for i in 0..n {
        let edge = vs[i].cross(&vs[(i + 1) % n]);
        for (j, v) in vs.iter().enumerate() {
            if j == i || j == (i + 1) % n {
                continue;
            }
            let s = edge.dot(v);
            if s.abs() < 1e-14 {
                return Err(degenerate(format!("vertex {j} lies on the great circle through edge {i}")));
            }
            if sign == 0.0 {
                sign = s.signum();
            } else if s.signum() != sign {
                return Err(Error::BadShape("polygon is not convex".into()));
            }
        }
    }
    Ok(sign)
}
