//! Hyperbolic truncated tetrahedra described by their six dihedral angles.
//!
//! Angles are indexed by edge slot (see [`crate::triangulation::EDGE_VERTICES`]):
//! the angle of the edge joining vertices `k, l` is the dihedral angle between
//! the faces `i, j` with `{i, j, k, l} = {0, 1, 2, 3}`. Vertex `v` is cut off by
//! a truncation triangle whose angles are the three dihedral angles at edges
//! through `v`; it is hyperbolic, and the vertex truncated, when their sum is
//! below `π`, and Euclidean, the vertex ideal, when the sum equals `π`.

mod dilog;
mod gram;
mod minkowski;
mod quadrature;
mod volume;

pub use dilog::{clausen, li2, lobachevsky};
pub use gram::GramData;
pub use minkowski::{
    angles_from_normals, lorentz_defect, lorentz_inner, lorentz_norm2, map_between, normals_from_points,
    shape_from_points, LorentzMatrix, MinkowskiRealization, Vec4,
};
pub use quadrature::{tanh_sinh, Quadrature};
pub use volume::{
    regular_ideal_volume, volume, volume_closed_form, volume_schlafli, VolumeMethod, VolumeValue,
};

use crate::perm::Perm4;
use crate::triangulation::{edge_index, opposite_edge, EDGE_VERTICES};
use std::f64::consts::PI;
use thiserror::Error;

/// Tolerance on `|s_v - π|` for calling a vertex ideal.
pub const EPS_CUSP: f64 = 1e-7;

/// Edge slots through each vertex.
pub const VERTEX_EDGES: [[usize; 3]; 4] = [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("angle {index} = {value} is outside (0, π)")]
    AngleOutOfRange { index: usize, value: f64 },
    #[error("angle sum {sum} at vertex {vertex} exceeds π")]
    VertexSumExceedsPi { vertex: usize, sum: f64 },
    #[error("infinite length: edge {edge} has an ideal endpoint")]
    InfiniteLength { edge: usize },
    #[error("ill-conditioned: vertex {vertex} is within tolerance of ideal")]
    IllConditioned { vertex: usize },
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("integration did not converge: {0}")]
    IntegrationFailed(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexKind {
    Truncated,
    Ideal,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct TetShape {
    pub angles: [f64; 6],
}

impl TetShape {
    /// Checks `0 < θ < π` and vertex sums `≤ π + EPS_CUSP`.
    pub fn new(angles: [f64; 6]) -> Result<Self, GeometryError> {
        for (index, &value) in angles.iter().enumerate() {
            if !(value > 0.0 && value < PI) {
                return Err(GeometryError::AngleOutOfRange { index, value });
            }
        }
        let s = TetShape { angles };
        for v in 0..4 {
            let sum = s.vertex_sum(v);
            if sum > PI + EPS_CUSP {
                return Err(GeometryError::VertexSumExceedsPi { vertex: v, sum });
            }
        }
        Ok(s)
    }

    pub fn regular(theta: f64) -> Self {
        TetShape { angles: [theta; 6] }
    }

    pub fn vertex_sum(&self, v: usize) -> f64 {
        VERTEX_EDGES[v].iter().map(|&e| self.angles[e]).sum()
    }

    pub fn vertex_sums(&self) -> [f64; 4] {
        std::array::from_fn(|v| self.vertex_sum(v))
    }

    pub fn vertex_kind(&self, v: usize) -> VertexKind {
        if (self.vertex_sum(v) - PI).abs() <= EPS_CUSP {
            VertexKind::Ideal
        } else {
            VertexKind::Truncated
        }
    }

    pub fn ideal_vertices(&self) -> Vec<usize> {
        (0..4).filter(|&v| self.vertex_kind(v) == VertexKind::Ideal).collect()
    }

    /// Dihedral angle between faces `i != j`.
    pub fn face_angle(&self, i: usize, j: usize) -> f64 {
        self.angles[opposite_edge(edge_index(i, j))]
    }

    /// The same tetrahedron with vertex `v` renamed `p(v)`.
    pub fn permuted(&self, p: Perm4) -> TetShape {
        let mut out = [0.0; 6];
        for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
            out[edge_index(p.apply(a), p.apply(b))] = self.angles[e];
        }
        TetShape { angles: out }
    }

    pub fn gram(&self) -> GramData {
        GramData::new(self)
    }

    /// `cosh` of the six edge lengths; infinite edges give `+∞`.
    pub fn cosh_lengths(&self) -> [f64; 6] {
        self.gram().cosh_lengths()
    }

    pub fn edge_length(&self, edge: usize) -> Result<f64, GeometryError> {
        let (a, b) = EDGE_VERTICES[edge];
        if self.vertex_kind(a) == VertexKind::Ideal || self.vertex_kind(b) == VertexKind::Ideal {
            return Err(GeometryError::InfiniteLength { edge });
        }
        Ok(self.gram().cosh_lengths()[edge].max(1.0).acosh())
    }

    /// Lengths of all edges, for all-truncated shapes.
    pub fn lengths(&self) -> Result<[f64; 6], GeometryError> {
        let mut out = [0.0; 6];
        for (e, slot) in out.iter_mut().enumerate() {
            *slot = self.edge_length(e)?;
        }
        Ok(out)
    }

    /// `∂ℓ_e / ∂θ_f` for all-truncated shapes away from the ideal limit.
    pub fn length_jacobian(&self) -> Result<[[f64; 6]; 6], GeometryError> {
        let g = self.gram();
        let h = g.cosh_lengths();
        let dh = g.cosh_length_jacobian(self)?;
        let mut out = [[0.0; 6]; 6];
        for e in 0..6 {
            let s = (h[e] * h[e] - 1.0).sqrt();
            for f in 0..6 {
                out[e][f] = dh[e][f] / s;
            }
        }
        Ok(out)
    }

    pub fn realize(&self) -> Result<MinkowskiRealization, GeometryError> {
        MinkowskiRealization::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_edges_match_slots() {
        for v in 0..4 {
            for &e in &VERTEX_EDGES[v] {
                let (a, b) = EDGE_VERTICES[e];
                assert!(a == v || b == v);
            }
        }
    }

    #[test]
    fn domain_checks() {
        assert!(TetShape::new([PI / 3.0; 6]).is_ok());
        assert!(matches!(TetShape::new([0.0, 1.0, 1.0, 1.0, 1.0, 1.0]), Err(GeometryError::AngleOutOfRange { index: 0, .. })));
        assert!(matches!(TetShape::new([1.2; 6]), Err(GeometryError::VertexSumExceedsPi { .. })));
        let s = TetShape::regular(PI / 3.0);
        assert_eq!(s.ideal_vertices(), vec![0, 1, 2, 3]);
        assert!(matches!(s.edge_length(0), Err(GeometryError::InfiniteLength { edge: 0 })));
    }

    #[test]
    fn regular_lengths_agree() {
        let s = TetShape::regular(PI / 6.0);
        let l = s.lengths().unwrap();
        for x in l {
            assert!((x - l[0]).abs() < 1e-14 && x > 0.0);
        }
    }
}
