use super::cone::{Cone, SimplicialCone};
use super::polytope::SimplePolytope;
use super::simplex::EuclideanSimplex;
use crate::error::{Error, Result};
use crate::linalg::Point;

/// Either kind of body the toolkit measures.
#[derive(Debug, Clone)]
pub enum Body {
    Simplex(EuclideanSimplex),
    Polytope(SimplePolytope),
}

/// Figure of a 4-body at one of its edges, seen from the edge's first vertex.
#[derive(Debug, Clone)]
pub struct EdgeFigure {
    pub edge: (usize, usize),
    pub cone: SimplicialCone,
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Simplex(s) => s.dim(),
            Body::Polytope(p) => p.dim(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn vertices(&self) -> &[Point] {
        match self {
            Body::Simplex(s) => s.vertices(),
            Body::Polytope(p) => p.vertices(),
        }
    }

    pub fn neighbor_list(&self, v: usize) -> Vec<usize> {
        match self {
            Body::Simplex(s) => (0..s.vertices().len()).filter(|&w| w != v).collect(),
            Body::Polytope(p) => p.neighbors(v).to_vec(),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        match self {
            Body::Simplex(s) => s.dim(),
            Body::Polytope(p) => p.neighbors(v).len(),
        }
    }

    pub fn is_simple(&self) -> bool {
        match self {
            Body::Simplex(_) => true,
            Body::Polytope(p) => p.is_simple(),
        }
    }

    pub fn vertex_cone(&self, v: usize) -> Result<Cone> {
        match self {
            Body::Simplex(s) => Ok(s.vertex_cone(v)?.into()),
            Body::Polytope(p) => p.vertex_cone(v),
        }
    }

    pub fn vertex_cones(&self) -> Result<Vec<Cone>> {
        (0..self.vertex_count()).map(|v| self.vertex_cone(v)).collect()
    }

    /// Interior dihedral angles at all ridges.
    pub fn dihedral_angles(&self) -> Result<Vec<f64>> {
        match self {
            Body::Simplex(s) => s.dihedral_angles(),
            Body::Polytope(p) => Ok(p.dihedral_angles()),
        }
    }

    /// Edge figures (cones in R^{d-1}) of every edge `(v, w)`, `v < w`.
    pub fn edge_figures(&self) -> Result<Vec<EdgeFigure>> {
        let mut out = Vec::new();
        for v in 0..self.vertex_count() {
            let nb = self.neighbor_list(v);
            let cone = match self.vertex_cone(v)? {
                Cone::Simplicial(c) => c,
                Cone::Polyhedral(_) => return Err(Error::NotSimple(v)),
            };
            for (slot, &w) in nb.iter().enumerate() {
                if w > v {
                    out.push(EdgeFigure { edge: (v, w), cone: cone.face_figure(&[slot])? });
                }
            }
        }
        Ok(out)
    }

    pub fn as_simplex(&self) -> Option<&EuclideanSimplex> {
        match self {
            Body::Simplex(s) => Some(s),
            Body::Polytope(_) => None,
        }
    }

    pub fn as_polytope(&self) -> Option<&SimplePolytope> {
        match self {
            Body::Polytope(p) => Some(p),
            Body::Simplex(_) => None,
        }
    }
}

impl From<EuclideanSimplex> for Body {
    fn from(s: EuclideanSimplex) -> Self {
        Body::Simplex(s)
    }
}

impl From<SimplePolytope> for Body {
    fn from(p: SimplePolytope) -> Self {
        Body::Polytope(p)
    }
}
