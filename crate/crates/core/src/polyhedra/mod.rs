//! Exact rational polyhedral geometry.

mod cone;
mod dd;
pub mod linalg;
mod lp;
mod polytope;

pub use cone::{extreme_rays, triangulate_cone, ConicCoordinates, PointedCone, SimplicialFan, MAX_CONE_DIM};
pub use dd::{cone_generators, ConeGenerators};
pub use lp::{lp_solve, LpResult, Sense};
pub use polytope::{polytope_equal, AsVertices, Constraint, HPolytope, VPolytope, MAX_VERTEX_DIM, MAX_VERTEX_ROWS};
