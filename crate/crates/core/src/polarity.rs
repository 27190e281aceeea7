//! Polar cones and normal fans, with the convention
//! `C° = { y : ⟨y, x⟩ <= 0 for all x in C }`.

use nalgebra::DMatrix;

use crate::error::{degenerate, Error, Result};
use crate::geom::{cone_from_directions, Body, Cone, SimplicialCone};
use crate::linalg::Point;

/// Polar of a simplicial cone. Generator `i` is the unit outward normal of
/// the facet opposite generator `i`, so `⟨w_i, g_j⟩ = 0` for `i != j`.
///
/// With `w_i = -r_i / |r_i|` for the rows `r_i` of `G⁻¹`, the polar's own
/// inverse is `-diag(|r_i|) Gᵀ`, so no second inversion is needed and thin
/// cones keep well-conditioned polars.
pub fn polar_cone(c: &SimplicialCone) -> Result<SimplicialCone> {
    let inv = c.inverse();
    let d = c.dim();
    let mut generators = Vec::with_capacity(d);
    let mut polar_inverse = DMatrix::zeros(d, d);
    for i in 0..d {
        let row: Point = inv.row(i).transpose();
        let len = row.norm();
        if !(len.is_finite() && len > 0.0) {
            return Err(degenerate("cone inverse has a vanishing row"));
        }
        generators.push(-row / len);
        for (j, x) in c.generators()[i].iter().enumerate() {
            polar_inverse[(i, j)] = -len * x;
        }
    }
    Ok(SimplicialCone::from_parts(generators, polar_inverse))
}

/// Polar of either cone kind; polyhedral polars come back re-sorted.
pub fn polar(c: &Cone) -> Result<Cone> {
    match c {
        Cone::Simplicial(s) => Ok(polar_cone(s)?.into()),
        Cone::Polyhedral(_) => cone_from_directions(c.inward_normals().into_iter().map(|n| -n).collect()),
    }
}

/// The polars of a body's vertex cones, one per vertex; they tile the sphere.
#[derive(Debug, Clone)]
pub struct NormalFan {
    cones: Vec<SimplicialCone>,
    source: Body,
}

impl NormalFan {
    pub fn cones(&self) -> &[SimplicialCone] {
        &self.cones
    }

    pub fn source(&self) -> &Body {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }
}

pub fn normal_fan(body: &Body) -> Result<NormalFan> {
    let cones = (0..body.vertex_count())
        .map(|v| match body.vertex_cone(v)? {
            Cone::Simplicial(c) => polar_cone(&c),
            Cone::Polyhedral(_) => Err(Error::NotSimple(v)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalFan { cones, source: body.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{random_simplex, regular_polytope, regular_simplex, EuclideanSimplex, RegularSolid};
    use crate::measure::{plane_angle, solid_angle_exact};
    use crate::rng::stream_rng;

    fn p(v: &[f64]) -> Point {
        Point::from_row_slice(v)
    }

    /// Sorted pairwise inner products, a congruence invariant of unit frames.
    fn gram_signature(c: &SimplicialCone) -> Vec<f64> {
        let g = c.generators();
        let mut out: Vec<f64> = (0..g.len()).flat_map(|i| (i + 1..g.len()).map(move |j| g[i].dot(&g[j]))).collect();
        out.sort_by(f64::total_cmp);
        out
    }

    #[test]
    fn octant_polar_is_negative_octant() {
        let q = polar_cone(&SimplicialCone::orthant(3)).unwrap();
        for (i, w) in q.generators().iter().enumerate() {
            let mut e = Point::zeros(3);
            e[i] = -1.0;
            assert!((w - e).norm() < 1e-15);
        }
    }

    #[test]
    fn involution_and_orthogonality() {
        let mut rng = stream_rng(3, 0);
        for d in 2..=4 {
            for _ in 0..50 {
                let s = random_simplex(&mut rng, d);
                let c = s.vertex_cone(0).unwrap();
                let w = polar_cone(&c).unwrap();
                for i in 0..d {
                    for j in 0..d {
                        let ip = w.generators()[i].dot(&c.generators()[j]);
                        if i == j {
                            assert!(ip < 0.0);
                        } else {
                            assert!(ip.abs() < 1e-12);
                        }
                    }
                }
                let back = polar_cone(&w).unwrap();
                for (a, b) in back.generators().iter().zip(c.generators()) {
                    assert!((a - b).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn polar_of_partition_cell_is_the_tetrahedral_vertex_cone() {
        // the cone over a face of the centred regular tetrahedron is one cell
        // of the standard partition; its polar is congruent to the vertex
        // cone of the tetrahedron, not to the cell itself
        let t = regular_simplex(3).unwrap();
        let cell = SimplicialCone::new(t.vertices()[1..].to_vec()).unwrap();
        let q = polar_cone(&cell).unwrap();
        let vertex = t.vertex_cone(0).unwrap();
        for (a, b) in gram_signature(&q).iter().zip(gram_signature(&vertex)) {
            assert!((a - b).abs() < 1e-10);
        }
        for ip in gram_signature(&cell) {
            assert!((ip + 1.0 / 3.0).abs() < 1e-12);
        }
        for ip in gram_signature(&vertex) {
            assert!((ip - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn order_reversal() {
        let big = SimplicialCone::orthant(3);
        let small = SimplicialCone::new(vec![p(&[1.0, 0.2, 0.2]), p(&[0.2, 1.0, 0.2]), p(&[0.2, 0.2, 1.0])]).unwrap();
        let (pb, ps) = (polar_cone(&big).unwrap(), polar_cone(&small).unwrap());
        assert!(pb.generators().iter().all(|w| ps.contains(w)));
        assert!(!ps.generators().iter().all(|w| pb.contains(w)));
    }

    #[test]
    fn triangle_fan_angles_sum_to_full_turn() {
        let t = EuclideanSimplex::from_rows(&[vec![0.0, 0.0], vec![3.0, 0.1], vec![0.4, 2.0]]).unwrap();
        let fan = normal_fan(&t.into()).unwrap();
        let sum: f64 = fan.cones().iter().map(|c| plane_angle(c).unwrap()).sum();
        assert!((sum - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn regular_tetrahedron_fan_is_quartered() {
        let fan = normal_fan(&regular_simplex(3).unwrap().into()).unwrap();
        assert_eq!(fan.len(), 4);
        for c in fan.cones() {
            let v = solid_angle_exact(&c.clone().into()).unwrap().normalized;
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn random_fans_tile_the_sphere() {
        let mut rng = stream_rng(17, 0);
        for _ in 0..200 {
            let fan = normal_fan(&random_simplex(&mut rng, 3).into()).unwrap();
            let sum: f64 = fan.cones().iter().map(|c| solid_angle_exact(&c.clone().into()).unwrap().normalized).sum();
            assert!((sum * 4.0 * std::f64::consts::PI - 4.0 * std::f64::consts::PI).abs() < 1e-9);
        }
    }

    #[test]
    fn non_simple_bodies_rejected() {
        let oct = regular_polytope(RegularSolid::Octahedron).unwrap();
        assert!(matches!(normal_fan(&oct), Err(Error::NotSimple(_))));
        let cube = regular_polytope(RegularSolid::Cube).unwrap();
        assert_eq!(normal_fan(&cube).unwrap().len(), 8);
    }

    #[test]
    fn polyhedral_polar_round_trip() {
        let oct = regular_polytope(RegularSolid::Octahedron).unwrap();
        let c = oct.vertex_cone(0).unwrap();
        let back = polar(&polar(&c).unwrap()).unwrap();
        assert_eq!(back.generator_count(), 4);
        for g in back.generators() {
            assert!(c.generators().iter().any(|h| (&g - h).norm() < 1e-10));
        }
    }
}
