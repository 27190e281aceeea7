use std::f64::consts::PI;

use nalgebra::Vector3;

use super::MeasureEstimate;
use crate::error::{Error, Result};
use crate::geom::{Cone, SimplicialCone, SphericalPolygon};
use crate::linalg::{angle3, angle_between, orthonormal_basis, Point};

/// Angle of a 2-dimensional cone, in `(0, π)`.
pub fn plane_angle(c: &SimplicialCone) -> Result<f64> {
    if c.dim() != 2 {
        return Err(Error::BadDim(c.dim()));
    }
    let g = c.generators();
    Ok(angle_between(&g[0], &g[1]))
}

/// Girard excess: sum of interior angles minus `(n-2)π`.
pub fn spherical_polygon_area(p: &SphericalPolygon) -> f64 {
    let v = p.vertices();
    let n = v.len();
    let angle_sum: f64 = (0..n)
        .map(|i| {
            let here = v[i];
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let t_prev = prev - here * prev.dot(&here);
            let t_next = next - here * next.dot(&here);
            angle3(&t_prev, &t_next)
        })
        .sum();
    angle_sum - (n as f64 - 2.0) * PI
}

pub fn spherical_polygon_perimeter(p: &SphericalPolygon) -> f64 {
    let v = p.vertices();
    let n = v.len();
    (0..n).map(|i| angle3(&v[i], &v[(i + 1) % n])).sum()
}

/// The spherical polygon cut out by a pointed cone in R^3.
pub fn polygon_of_cone(cone: &Cone) -> Result<SphericalPolygon> {
    match cone {
        Cone::Simplicial(c) if c.dim() == 3 => {
            SphericalPolygon::new(c.generators().iter().map(|g| Vector3::new(g[0], g[1], g[2])).collect())
        }
        Cone::Polyhedral(c) => SphericalPolygon::new(c.generators().to_vec()),
        other => Err(Error::BadDim(other.dim())),
    }
}

/// Solid angle of a pointed cone in R^3 from the area of its spherical
/// polygon; normalized by 4π.
pub fn solid_angle_exact_3d(cone: &Cone) -> Result<MeasureEstimate> {
    let polygon = polygon_of_cone(cone)?;
    Ok(MeasureEstimate::exact(spherical_polygon_area(&polygon) / (4.0 * PI)))
}

/// Exact measure of a cone in R^2 or R^3.
pub fn solid_angle_exact(cone: &Cone) -> Result<MeasureEstimate> {
    match (cone, cone.dim()) {
        (Cone::Simplicial(c), 2) => Ok(MeasureEstimate::exact(plane_angle(c)? / (2.0 * PI))),
        (_, 3) => solid_angle_exact_3d(cone),
        (_, d) => Err(Error::BadDim(d)),
    }
}

/// Area of the boundary of a spherical tetrahedron in S^3: the sum of its
/// four facet triangles, each measured inside its own 3-dimensional span.
pub fn boundary_area_s3(c: &SimplicialCone) -> Result<f64> {
    if c.dim() != 4 {
        return Err(Error::BadDim(c.dim()));
    }
    let g = c.generators();
    let mut total = 0.0;
    for omit in 0..4 {
        let facet: Vec<Point> = (0..4).filter(|&k| k != omit).map(|k| g[k].clone()).collect();
        let basis = orthonormal_basis(&facet)?;
        let local: Vec<Vector3<f64>> =
            facet.iter().map(|x| Vector3::new(basis[0].dot(x), basis[1].dot(x), basis[2].dot(x))).collect();
        total += spherical_polygon_area(&SphericalPolygon::new(local)?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::regular_simplex;
    use crate::rng::{stream_rng, unit_vector};

    fn v3(x: f64, y: f64, z: f64) -> Vector3<f64> {
        Vector3::new(x, y, z)
    }

    /// Independent oracle: tan(Ω/2) = |det(a,b,c)| / (1 + a·b + b·c + c·a).
    fn oosterom_strackee(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
        let num = a.dot(&b.cross(c)).abs();
        let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
        2.0 * num.atan2(den)
    }

    fn octant() -> SphericalPolygon {
        SphericalPolygon::new(vec![v3(1.0, 0.0, 0.0), v3(0.0, 1.0, 0.0), v3(0.0, 0.0, 1.0)]).unwrap()
    }

    #[test]
    fn plane_angles() {
        let p = |x: f64, y: f64| Point::from_column_slice(&[x, y]);
        let right = SimplicialCone::new(vec![p(1.0, 0.0), p(0.0, 1.0)]).unwrap();
        assert!((plane_angle(&right).unwrap() - PI / 2.0).abs() < 1e-15);
        let one = SimplicialCone::new(vec![p(1.0, 0.0), p(1f64.cos(), 1f64.sin())]).unwrap();
        assert!((plane_angle(&one).unwrap() - 1.0).abs() < 1e-15);
        let mut last = 0.0;
        for k in 1..8 {
            let delta = 10f64.powi(-k);
            let wide = SimplicialCone::new(vec![p(1.0, 0.0), p(-1.0, delta)]).unwrap();
            let a = plane_angle(&wide).unwrap();
            assert!(a < PI && a > last);
            last = a;
        }
        assert!(PI - last < 1e-6);
    }

    #[test]
    fn octant_area_and_perimeter() {
        let t = octant();
        assert!((spherical_polygon_area(&t) - PI / 2.0).abs() < 1e-15);
        assert!((spherical_polygon_perimeter(&t) - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn partition_triangle() {
        // three vertices of the centered regular tetrahedron
        let s = regular_simplex(3).unwrap();
        let t = SphericalPolygon::new((0..3).map(|i| { let v = s.vertex(i); v3(v[0], v[1], v[2]) }).collect()).unwrap();
        assert!((spherical_polygon_area(&t) - PI).abs() < 1e-13);
        // each side is arccos(-1/3)
        assert!((spherical_polygon_perimeter(&t) - 3.0 * (-1.0f64 / 3.0).acos()).abs() < 1e-13);
    }

    #[test]
    fn two_point_polygon_is_degenerate() {
        assert!(SphericalPolygon::new(vec![v3(1.0, 0.0, 0.0), v3(0.0, 1.0, 0.0)]).is_err());
        assert!(SphericalPolygon::new(vec![v3(1.0, 0.0, 0.0), v3(-1.0, 0.0, 0.0), v3(0.0, 0.0, 1.0)]).is_err());
    }

    #[test]
    fn girard_matches_oosterom_strackee() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..2000 {
            let a = unit_vector(&mut rng, 3);
            let b = unit_vector(&mut rng, 3);
            let c = unit_vector(&mut rng, 3);
            let (a, b, c) = (v3(a[0], a[1], a[2]), v3(b[0], b[1], b[2]), v3(c[0], c[1], c[2]));
            let Ok(t) = SphericalPolygon::new(vec![a, b, c]) else { continue };
            let oracle = oosterom_strackee(&a, &b, &c);
            assert!((spherical_polygon_area(&t) - oracle).abs() < 1e-11, "{oracle}");
        }
    }

    #[test]
    fn regular_tetrahedron_vertex_angle() {
        let s = regular_simplex(3).unwrap();
        let expected = 3.0 * (1.0f64 / 3.0).acos() - PI;
        for i in 0..4 {
            let m = solid_angle_exact_3d(&s.vertex_cone(i).unwrap().into()).unwrap();
            assert!((m.normalized * 4.0 * PI - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn orthant_boundary_area() {
        let b = boundary_area_s3(&SimplicialCone::orthant(4)).unwrap();
        assert!((b - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn sliver_boundary_converges() {
        // four generators collapsing into the hyperplane x4 = 0: the boundary
        // tends to twice the area of the limiting spherical triangle
        let base = [[1.0, 0.1, 0.1], [0.1, 1.0, 0.2], [0.2, 0.1, 1.0]];
        let sliver = |eps: f64| {
            let mut gens: Vec<Point> = base.iter().map(|b| Point::from_column_slice(&[b[0], b[1], b[2], 0.0])).collect();
            // fourth generator inside the base triangle, lifted by eps
            gens.push(Point::from_column_slice(&[0.4, 0.4, 0.4, eps]));
            SimplicialCone::new(gens).unwrap()
        };
        let a6 = boundary_area_s3(&sliver(1e-6)).unwrap();
        let a7 = boundary_area_s3(&sliver(1e-7)).unwrap();
        assert!((a6 - a7).abs() < 1e-4);
        let tri = SphericalPolygon::new(base.iter().map(|b| v3(b[0], b[1], b[2])).collect()).unwrap();
        assert!((a7 - 2.0 * spherical_polygon_area(&tri)).abs() < 1e-4);
    }
}
