//! Face tilts.
//!
//! Weighted dual points `q_v` of a tetrahedron lie on an affine hyperplane
//! `⟨N, x⟩ = 1`, with `N = Σ_v n_v / ⟨q_v, n_v⟩`. The tilt at face `k` is
//! `⟨N, n_k⟩`. Across a glued face, the far apex `q'` satisfies
//! `⟨N, q'⟩ - 1 = -(t₁ + t₂)⟨n_k, q'⟩` with `⟨n_k, q'⟩ < 0`, so the hull is
//! strictly convex there exactly when `t₁ + t₂ < 0`.
//!
//! Horospheres are taken in the limit of small cusp neighbourhoods with equal
//! areas: ideal points are scaled by `λ → ∞`, so each tilt splits into a part
//! from truncated vertices and a cusp part of order `1/λ`, and signs are
//! decided lexicographically.

use super::realization::GluedRealization;
use crate::geometry::{lorentz_inner, TetShape, Vec4, VertexKind};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiltSign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Tilt {
    /// Contribution of truncated vertices.
    pub truncated: f64,
    /// Contribution of ideal vertices at unit cusp area.
    pub cusp: f64,
}

impl Tilt {
    fn add(self, o: Tilt) -> Tilt {
        Tilt { truncated: self.truncated + o.truncated, cusp: self.cusp + o.cusp }
    }

    pub fn sign(&self, eps: f64) -> TiltSign {
        let of = |x: f64| if x > 0.0 { TiltSign::Positive } else { TiltSign::Negative };
        if self.truncated.abs() > eps {
            of(self.truncated)
        } else if self.cusp.abs() > eps {
            of(self.cusp)
        } else {
            TiltSign::Zero
        }
    }

    /// Size used to order positive faces.
    pub fn magnitude(&self) -> (f64, f64) {
        (self.truncated, self.cusp)
    }
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct FaceTilt {
    pub tet: usize,
    pub face: usize,
    pub other_tet: usize,
    pub other_face: usize,
    pub t1: Tilt,
    pub t2: Tilt,
    pub sum: Tilt,
}

/// Tilts of the four faces from angles and log-scales only: `Σ_v G_vk w_v`,
/// with `w_v = √(G⁻¹)_vv` at truncated and `e^{-σ_v}` at ideal vertices.
pub fn tilts_closed_form(shape: &TetShape, log_scales: &[f64; 4]) -> [Tilt; 4] {
    let gd = shape.gram();
    let inv = gd.inverse();
    std::array::from_fn(|k| {
        let mut t = Tilt { truncated: 0.0, cusp: 0.0 };
        for v in 0..4 {
            match shape.vertex_kind(v) {
                VertexKind::Truncated => t.truncated += gd.gram[v][k] * inv[v][v].sqrt(),
                VertexKind::Ideal => t.cusp += gd.gram[v][k] * (-log_scales[v]).exp(),
            }
        }
        t
    })
}

/// The same tilts from the realised normals and dual points.
pub fn tilts_geometric(normals: &[Vec4; 4], points: &[Vec4; 4], kinds: &[VertexKind; 4]) -> [Tilt; 4] {
    let mut trunc = Vec4::zeros();
    let mut cusp = Vec4::zeros();
    for v in 0..4 {
        let w = normals[v] / lorentz_inner(&points[v], &normals[v]);
        match kinds[v] {
            VertexKind::Truncated => trunc += w,
            VertexKind::Ideal => cusp += w,
        }
    }
    std::array::from_fn(|k| Tilt { truncated: lorentz_inner(&trunc, &normals[k]), cusp: lorentz_inner(&cusp, &normals[k]) })
}

/// One entry per glued pair of faces, listed from the smaller side.
pub fn compute_tilts(g: &GluedRealization) -> Vec<FaceTilt> {
    let per_tet: Vec<[Tilt; 4]> =
        g.tets.iter().map(|r| tilts_geometric(&r.face_normals, &r.dual_points, &r.kinds)).collect();
    let mut out = Vec::new();
    for tet in 0..g.tets.len() {
        for face in 0..4 {
            let gl = g.triangulation.gluing(tet, face);
            if (tet, face) > (gl.tet, gl.face) {
                continue;
            }
            let t1 = per_tet[tet][face];
            let t2 = per_tet[gl.tet][gl.face];
            out.push(FaceTilt { tet, face, other_tet: gl.tet, other_face: gl.face, t1, t2, sum: t1.add(t2) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MinkowskiRealization;
    use std::f64::consts::PI;

    fn check_forms(shape: &TetShape, scales: [f64; 4]) {
        let r = MinkowskiRealization::decorated(shape, scales).unwrap();
        let a = tilts_closed_form(shape, &scales);
        let b = tilts_geometric(&r.face_normals, &r.dual_points, &r.kinds);
        for k in 0..4 {
            assert!((a[k].truncated - b[k].truncated).abs() < 1e-9, "{a:?} {b:?}");
            assert!((a[k].cusp - b[k].cusp).abs() < 1e-9, "{a:?} {b:?}");
        }
    }

    #[test]
    fn closed_form_matches_realization() {
        check_forms(&TetShape::regular(PI / 6.0), [0.0; 4]);
        check_forms(&TetShape::new([0.3, 0.5, 0.7, 0.4, 0.6, 0.2]).unwrap(), [0.0; 4]);
        // Vertex 0 ideal: edges 01, 02, 03 sum to π.
        let ideal = TetShape::new([1.2, 1.0, PI - 2.2, 0.4, 0.3, 0.5]).unwrap();
        assert_eq!(ideal.vertex_kind(0), VertexKind::Ideal);
        check_forms(&ideal, [0.7, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn regular_faces_tilt_inward() {
        for t in tilts_closed_form(&TetShape::regular(PI / 6.0), &[0.0; 4]) {
            assert!(t.truncated < 0.0 && t.cusp == 0.0);
        }
    }

    #[test]
    fn sign_is_lexicographic() {
        let t = |a, b| Tilt { truncated: a, cusp: b };
        assert_eq!(t(1e-3, -5.0).sign(1e-8), TiltSign::Positive);
        assert_eq!(t(1e-12, -5.0).sign(1e-8), TiltSign::Negative);
        assert_eq!(t(-1e-12, 1e-12).sign(1e-8), TiltSign::Zero);
    }
}
