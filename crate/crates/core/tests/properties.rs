use approx::{assert_abs_diff_eq, assert_relative_eq};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use spherangle::conjectures::ShapeCoordinates;
use spherangle::geom::{EuclideanSimplex, SphericalPolygon};
use spherangle::identities::{three_crofton_residual, two_crofton_residual};
use spherangle::io::{body_to_json, parse_body};
use spherangle::measure::{polygon_of_cone, solid_angle_exact, volume_s3_quadrature};
use spherangle::polarity::polar_cone;
use spherangle::rng::{random_orthogonal, stream_rng};
use spherangle::{Body, SimplicialCone};

fn well_conditioned(d: usize) -> impl Strategy<Value = SimplicialCone> {
    prop::collection::vec(-1.0..1.0_f64, d * d).prop_filter_map("degenerate", move |xs| {
        let gens: Vec<DVector<f64>> = xs.chunks(d).map(|c| DVector::from_column_slice(c)).collect();
        if gens.iter().any(|g| g.norm() < 0.1) {
            return None;
        }
        let m = DMatrix::from_columns(&gens);
        let units: Vec<_> = gens.iter().map(|g| g.normalize()).collect();
        if DMatrix::from_columns(&units).determinant().abs() < 0.05 || m.determinant().abs() < 1e-3 {
            return None;
        }
        SimplicialCone::new(gens).ok()
    })
}

fn simplex(d: usize) -> impl Strategy<Value = EuclideanSimplex> {
    prop::collection::vec(-1.0..1.0_f64, d * (d + 1)).prop_filter_map("flat", move |xs| {
        let rows: Vec<Vec<f64>> = xs.chunks(d).map(|c| c.to_vec()).collect();
        let s = EuclideanSimplex::from_rows(&rows).ok()?;
        // keep away from slivers so decode is well conditioned
        let e = s.edge_lengths();
        let lo = e.iter().cloned().fold(f64::INFINITY, f64::min);
        (lo > 0.2).then_some(s)
    })
}

fn same_direction(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    (a.normalize() - b.normalize()).norm() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn polar_is_an_involution(c in well_conditioned(4)) {
        let back = polar_cone(&polar_cone(&c).unwrap()).unwrap();
        for g in c.generators() {
            prop_assert!(back.generators().iter().any(|h| same_direction(g, h)));
        }
    }

    #[test]
    fn polar_generators_are_orthogonal_to_opposite_faces(c in well_conditioned(3)) {
        let p = polar_cone(&c).unwrap();
        for (i, w) in p.generators().iter().enumerate() {
            for (j, g) in c.generators().iter().enumerate() {
                let dot = w.dot(g) / g.norm();
                if i == j { prop_assert!(dot < 0.0) } else { prop_assert!(dot.abs() < 1e-9) }
            }
        }
    }

    #[test]
    fn two_crofton_holds(c in well_conditioned(3)) {
        let poly = polygon_of_cone(&c.into()).unwrap();
        prop_assert!(two_crofton_residual(&poly).unwrap() < 1e-9);
    }

    #[test]
    fn three_crofton_holds(c in well_conditioned(4)) {
        prop_assert!(three_crofton_residual(&c).unwrap() < 1e-9);
    }

    #[test]
    fn shape_coordinates_round_trip(s in simplex(4)) {
        let coords = ShapeCoordinates::encode(&s).unwrap();
        let again = ShapeCoordinates::encode(&coords.decode().unwrap()).unwrap();
        for (a, b) in coords.params().iter().zip(again.params()) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn solid_angles_are_rotation_invariant(c in well_conditioned(3), seed in 0u64..1000) {
        let q = random_orthogonal(&mut stream_rng(seed, 0), 3);
        let a = solid_angle_exact(&c.clone().into()).unwrap().normalized;
        let b = solid_angle_exact(&c.transformed(&q).unwrap().into()).unwrap().normalized;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact(s in simplex(3)) {
        let body: Body = s.into();
        let back = parse_body(&body_to_json(&body)).unwrap();
        prop_assert_eq!(back.vertices(), body.vertices());
    }
}

#[test]
fn quadrature_is_rotation_invariant() {
    let mut rng = stream_rng(77, 0);
    let c = SimplicialCone::new(vec![
        DVector::from_vec(vec![1.0, 0.2, 0.1, 0.3]),
        DVector::from_vec(vec![0.1, 1.0, -0.2, 0.2]),
        DVector::from_vec(vec![0.0, 0.3, 1.0, 0.1]),
        DVector::from_vec(vec![0.2, -0.1, 0.1, 1.0]),
    ])
    .unwrap();
    let base = volume_s3_quadrature(&c).unwrap().normalized;
    for _ in 0..10 {
        let q = random_orthogonal(&mut rng, 4);
        let turned = volume_s3_quadrature(&c.transformed(&q).unwrap()).unwrap().normalized;
        assert_relative_eq!(base, turned, max_relative = 1e-12);
    }
}

#[test]
fn hemisphere_cap_polygon() {
    // a fine regular polygon near the equator approaches half the sphere
    let n = 400;
    let z = 1e-3_f64;
    let v = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            nalgebra::Vector3::new(t.cos(), t.sin(), z).normalize()
        })
        .collect();
    let poly = SphericalPolygon::new(v).unwrap();
    let area = spherangle::measure::spherical_polygon_area(&poly);
    assert_abs_diff_eq!(area, 2.0 * std::f64::consts::PI, epsilon = 1e-2);
}
