//! Solid angles, spherical polar duals and normal fans of simplices and
//! simple polytopes in dimensions 2 to 4.
//!
//! Measures are reported as fractions of the full sphere ([`MeasureEstimate`]).
//! Exact formulas cover S^1 and S^2 and boundary areas on S^3; volumes on S^3
//! come from seeded Monte Carlo or deterministic quadrature.

pub mod conjectures;
pub mod error;
pub mod geom;
pub mod identities;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod polarity;
pub mod reference;
pub mod rng;

pub use error::{Error, Result};
pub use measure::{MeasureEstimate, Method};
pub use geom::{Body, Cone, EuclideanSimplex, PolyhedralCone, RegularSolid, SimplePolytope, SimplicialCone};

