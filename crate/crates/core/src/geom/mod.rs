//! Euclidean bodies, their cones and face figures.

mod body;
mod cone;
mod fixtures;
mod polytope;
mod regular;
mod simplex;
mod spherical_polygon;

pub use body::{Body, EdgeFigure};
pub use cone::{cone_from_directions, Cone, PolyhedralCone, SimplicialCone, DET_TOL, MEMBERSHIP_TOL, NORM_TOL};
pub use fixtures::{flat_simplex, needle_tetrahedron, perturb, random_simplex};
pub use polytope::{Facet, Ridge, SimplePolytope};
pub use regular::{regular_polytope, regular_polytope_by_name, RegularSolid, PHI};
pub use simplex::{regular_simplex, EuclideanSimplex};
pub use spherical_polygon::SphericalPolygon;
