//! Regular solids of R^3 and R^4, centered at the origin.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::body::Body;
use super::polytope::SimplePolytope;
use super::simplex::regular_simplex;
use crate::error::{Error, Result};
use crate::linalg::Point;

/// Golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularSolid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
    Tesseract,
    Cell120,
}

impl RegularSolid {
    pub const ALL: [RegularSolid; 7] = [
        RegularSolid::Tetrahedron,
        RegularSolid::Cube,
        RegularSolid::Octahedron,
        RegularSolid::Dodecahedron,
        RegularSolid::Icosahedron,
        RegularSolid::Tesseract,
        RegularSolid::Cell120,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegularSolid::Tetrahedron => "tetrahedron",
            RegularSolid::Cube => "cube",
            RegularSolid::Octahedron => "octahedron",
            RegularSolid::Dodecahedron => "dodecahedron",
            RegularSolid::Icosahedron => "icosahedron",
            RegularSolid::Tesseract => "tesseract",
            RegularSolid::Cell120 => "cell120",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            RegularSolid::Tesseract | RegularSolid::Cell120 => 4,
            _ => 3,
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            RegularSolid::Tetrahedron => 4,
            RegularSolid::Cube => 8,
            RegularSolid::Octahedron => 6,
            RegularSolid::Dodecahedron => 20,
            RegularSolid::Icosahedron => 12,
            RegularSolid::Tesseract => 16,
            RegularSolid::Cell120 => 600,
        }
    }

    pub fn vertex_degree(self) -> usize {
        match self {
            RegularSolid::Octahedron => 4,
            RegularSolid::Icosahedron => 5,
            s => s.dim(),
        }
    }
}

impl fmt::Display for RegularSolid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegularSolid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegularSolid::ALL
            .into_iter()
            .find(|r| r.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

pub fn regular_polytope_by_name(name: &str) -> Result<Body> {
    regular_polytope(name.parse()?)
}

/// The named regular solid with unit circumradius.
pub fn regular_polytope(solid: RegularSolid) -> Result<Body> {
    let (dim, raw) = match solid {
        RegularSolid::Tetrahedron => return Ok(Body::Simplex(regular_simplex(3)?)),
        RegularSolid::Cube => (3, signed_products(&[1.0, 1.0, 1.0])),
        RegularSolid::Octahedron => (3, all_permutations(&[[1.0, 0.0, 0.0]])),
        RegularSolid::Dodecahedron => {
            let mut v = signed_products(&[1.0, 1.0, 1.0]);
            v.extend(cyclic_permutations(&[0.0, 1.0 / PHI, PHI]));
            (3, v)
        }
        RegularSolid::Icosahedron => (3, cyclic_permutations(&[0.0, 1.0, PHI])),
        RegularSolid::Tesseract => (4, signed_products(&[1.0, 1.0, 1.0, 1.0])),
        RegularSolid::Cell120 => (4, cell120_vertices()),
    };
    let vertices: Vec<Point> = raw
        .into_iter()
        .map(|v| {
            let p = Point::from_vec(v);
            let n = p.norm();
            p / n
        })
        .collect();
    debug_assert_eq!(vertices.len(), solid.vertex_count());
    Ok(Body::Polytope(SimplePolytope::from_equal_edges(dim, vertices)?))
}

/// All sign patterns applied to the nonzero entries of `base`.
fn signed_products(base: &[f64]) -> Vec<Vec<f64>> {
    let nz: Vec<usize> = (0..base.len()).filter(|&i| base[i] != 0.0).collect();
    (0..1u32 << nz.len())
        .map(|mask| {
            let mut v = base.to_vec();
            for (bit, &i) in nz.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    v[i] = -v[i];
                }
            }
            v
        })
        .collect()
}

fn dedup(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    points.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-12));
    points
}

fn cyclic_permutations(base: &[f64; 3]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for shift in 0..3 {
        let rotated = [base[shift % 3], base[(shift + 1) % 3], base[(shift + 2) % 3]];
        out.extend(signed_products(&rotated));
    }
    dedup(out)
}

fn permutations_of(n: usize) -> Vec<(Vec<usize>, bool)> {
    // recursive enumeration, tagged with parity
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (p, inversions % 2 == 0)
        })
        .collect()
}

fn permuted(base: &[f64], even_only: bool) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for (perm, even) in permutations_of(base.len()) {
        if even_only && !even {
            continue;
        }
        let v: Vec<f64> = perm.iter().map(|&i| base[i]).collect();
        out.extend(signed_products(&v));
    }
    dedup(out)
}

fn all_permutations(bases: &[[f64; 3]]) -> Vec<Vec<f64>> {
    dedup(bases.iter().flat_map(|b| permuted(b, false)).collect())
}

/// The 600 vertices of the 120-cell with circumradius `2*sqrt(2)`.
fn cell120_vertices() -> Vec<Vec<f64>> {
    let s5 = 5f64.sqrt();
    let p = PHI;
    let full: [[f64; 4]; 4] = [
        [0.0, 0.0, 2.0, 2.0],
        [1.0, 1.0, 1.0, s5],
        [1.0 / (p * p), p, p, p],
        [1.0 / p, 1.0 / p, 1.0 / p, p * p],
    ];
    let even: [[f64; 4]; 3] = [[0.0, 1.0 / (p * p), 1.0, p * p], [0.0, 1.0 / p, p, s5], [1.0 / p, 1.0, p, 2.0]];
    let mut out = Vec::new();
    for b in &full {
        out.extend(permuted(b, false));
    }
    for b in &even {
        out.extend(permuted(b, true));
    }
    dedup(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_degrees() {
        for solid in RegularSolid::ALL {
            let body = regular_polytope(solid).unwrap();
            assert_eq!(body.vertex_count(), solid.vertex_count(), "{solid}");
            for v in 0..body.vertex_count() {
                assert_eq!(body.degree(v), solid.vertex_degree(), "{solid} vertex {v}");
            }
        }
    }

    #[test]
    fn facet_counts() {
        let expect = [
            (RegularSolid::Cube, 6),
            (RegularSolid::Octahedron, 8),
            (RegularSolid::Dodecahedron, 12),
            (RegularSolid::Icosahedron, 20),
            (RegularSolid::Tesseract, 8),
            (RegularSolid::Cell120, 120),
        ];
        for (solid, facets) in expect {
            let Body::Polytope(p) = regular_polytope(solid).unwrap() else { panic!() };
            assert_eq!(p.facets().len(), facets, "{solid}");
        }
    }

    #[test]
    fn ridge_counts() {
        // edges of 3D solids, 2-faces of 4D solids
        let expect = [
            (RegularSolid::Cube, 12),
            (RegularSolid::Octahedron, 12),
            (RegularSolid::Dodecahedron, 30),
            (RegularSolid::Icosahedron, 30),
            (RegularSolid::Tesseract, 24),
            (RegularSolid::Cell120, 720),
        ];
        for (solid, ridges) in expect {
            let Body::Polytope(p) = regular_polytope(solid).unwrap() else { panic!() };
            assert_eq!(p.ridges().len(), ridges, "{solid}");
        }
    }

    #[test]
    fn equal_edges() {
        for solid in RegularSolid::ALL {
            let body = regular_polytope(solid).unwrap();
            let v = body.vertices();
            let mut lengths = Vec::new();
            for i in 0..body.vertex_count() {
                for &j in &body.neighbor_list(i) {
                    lengths.push((&v[i] - &v[j]).norm());
                }
            }
            let first = lengths[0];
            assert!(lengths.iter().all(|l| (l - first).abs() < 1e-12), "{solid}");
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(regular_polytope_by_name("24-cell"), Err(Error::UnknownName(_))));
        assert!(regular_polytope_by_name("Cell120").is_ok());
    }
}
