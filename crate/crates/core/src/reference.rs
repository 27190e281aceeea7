//! Reference values of the regular bodies used as comparison points.
//!
//! Vertex angles of the regular 4-simplex and the 120-cell have no closed
//! form here; they are pinned from one long Monte Carlo run (seed and size
//! recorded below) and cross-checked against quadrature in the tests.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{regular_polytope, regular_simplex, Body, RegularSolid};
use crate::measure::{solid_angle_exact, total_measure, MeasureEstimate, Method};

/// A Monte Carlo value fixed at build time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedConstant {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl PinnedConstant {
    pub fn estimate(&self) -> MeasureEstimate {
        MeasureEstimate {
            normalized: self.value,
            stderr: self.stderr,
            method: Method::MonteCarlo,
            samples: self.samples,
            seed: Some(self.seed),
        }
    }
}

/// Normalized vertex angle of the regular 4-simplex.
pub const SIMPLEX4_VERTEX: PinnedConstant =
    PinnedConstant { value: 9.80356e-3, stderr: 9.852639e-6, samples: 100_000_000, seed: 20_260_101 };

/// Normalized vertex angle of the 120-cell.
pub const CELL120_VERTEX: PinnedConstant =
    PinnedConstant { value: 0.31833338, stderr: 4.658296e-5, samples: 100_000_000, seed: 20_260_101 };

/// Comparison bodies of the 4-dimensional theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference4d {
    Simplex,
    Tesseract,
    Cell120,
}

impl Reference4d {
    pub fn body(self) -> Result<Body> {
        match self {
            Reference4d::Simplex => Ok(regular_simplex(4)?.into()),
            Reference4d::Tesseract => regular_polytope(RegularSolid::Tesseract),
            Reference4d::Cell120 => regular_polytope(RegularSolid::Cell120),
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            Reference4d::Simplex => 5,
            Reference4d::Tesseract => 16,
            Reference4d::Cell120 => 600,
        }
    }

    pub fn vertex_angle(self) -> MeasureEstimate {
        match self {
            Reference4d::Simplex => SIMPLEX4_VERTEX.estimate(),
            Reference4d::Tesseract => MeasureEstimate::exact(1.0 / 16.0),
            Reference4d::Cell120 => CELL120_VERTEX.estimate(),
        }
    }

    /// Dihedral angle in radians.
    pub fn dihedral(self) -> f64 {
        match self {
            Reference4d::Simplex => 0.25_f64.acos(),
            Reference4d::Tesseract => PI / 2.0,
            Reference4d::Cell120 => 0.8 * PI,
        }
    }

    /// Edge figures are regular triangles whose angles are the dihedrals;
    /// steradians.
    pub fn edge_figure(self) -> f64 {
        3.0 * self.dihedral() - PI
    }
}

/// Membership of a 4-dimensional regular solid in the comparison set.
pub fn reference_4d(solid: RegularSolid) -> Option<Reference4d> {
    match solid {
        RegularSolid::Tesseract => Some(Reference4d::Tesseract),
        RegularSolid::Cell120 => Some(Reference4d::Cell120),
        _ => None,
    }
}

/// Exact vertex solid angle (normalized) of a 3-dimensional regular solid.
pub fn platonic_vertex_angle(solid: RegularSolid) -> Result<MeasureEstimate> {
    if solid.dim() != 3 {
        return Err(Error::BadDim(solid.dim()));
    }
    solid_angle_exact(&regular_polytope(solid)?.vertex_cone(0)?)
}

/// Dihedral angle of a 3-dimensional regular solid, radians.
pub fn platonic_dihedral(solid: RegularSolid) -> Result<f64> {
    if solid.dim() != 3 {
        return Err(Error::BadDim(solid.dim()));
    }
    let d = regular_polytope(solid)?.dihedral_angles()?;
    Ok(d.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Regular `k`-face figure value of the regular `d`-simplex: exact in
/// figures of dimension 2 and 3, pinned for the 4-simplex vertex.
pub fn regular_simplex_face_value(d: usize, k: usize) -> Result<MeasureEstimate> {
    if k + 2 > d {
        return Err(Error::OutOfRange(format!("face dimension {k} outside 0..={}", d.saturating_sub(2))));
    }
    match d - k {
        2 | 3 => {
            let s = regular_simplex(d)?;
            let face: Vec<usize> = (0..=k).collect();
            solid_angle_exact(&s.face_figure_cone(&face)?.into())
        }
        4 if d == 4 => Ok(SIMPLEX4_VERTEX.estimate()),
        _ => Err(Error::BadDim(d)),
    }
}

/// One row of the reference table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub solid: RegularSolid,
    pub quantity: &'static str,
    pub estimate: MeasureEstimate,
    /// Steradians for solid angles and edge figures, radians for dihedrals.
    pub natural: f64,
}

/// Vertex, edge and dihedral reference values of a regular solid. In R³ the
/// edge figure is the dihedral angle itself, as a fraction of a full turn.
pub fn reference_rows(solid: RegularSolid) -> Result<Vec<ReferenceRow>> {
    let row = |quantity, estimate: MeasureEstimate, sphere_dim| -> Result<ReferenceRow> {
        Ok(ReferenceRow { solid, quantity, natural: estimate.natural(sphere_dim)?, estimate })
    };
    match reference_4d(solid) {
        None => {
            let dihedral = MeasureEstimate::exact(platonic_dihedral(solid)? / (2.0 * PI));
            Ok(vec![
                row("vertex", platonic_vertex_angle(solid)?, 2)?,
                row("edge", dihedral, 1)?,
                row("dihedral", dihedral, 1)?,
            ])
        }
        Some(r) => Ok(vec![
            row("vertex", r.vertex_angle(), 3)?,
            row("edge", MeasureEstimate::exact(r.edge_figure() / total_measure(2)?), 2)?,
            row("dihedral", MeasureEstimate::exact(r.dihedral() / (2.0 * PI)), 1)?,
        ]),
    }
}
