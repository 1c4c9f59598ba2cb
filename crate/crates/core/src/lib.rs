//! Census of hyperbolic 3-manifolds with totally geodesic boundary built from
//! small ideal triangulations.

pub mod census;
pub mod enumerate;
pub mod geometry;
pub mod kojima;
pub mod par;
pub mod perm;
pub mod solver;
pub mod triangulation;
