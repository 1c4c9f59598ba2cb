//! Tetrahedra of a solved triangulation placed in Minkowski space, with the
//! Lorentz maps matching them across faces.

use super::KojimaError;
use crate::geometry::{lorentz_defect, lorentz_inner, map_between, LorentzMatrix, MinkowskiRealization, TetShape, Vec4, VERTEX_EDGES};
use crate::solver::{GeometricSolution, Regime};
use crate::triangulation::{compute_boundary, Triangulation};
use std::collections::VecDeque;

/// Largest Lorentz defect of a face map accepted as consistent.
pub const MATCH_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct GluedRealization {
    pub triangulation: Triangulation,
    pub shapes: Vec<TetShape>,
    /// Each tetrahedron in its own gauge.
    pub tets: Vec<MinkowskiRealization>,
    /// `face_maps[t][f]` takes the frame of the neighbour across face `f` to
    /// the frame of `t`.
    pub face_maps: Vec<[LorentzMatrix; 4]>,
    /// Frame of each tetrahedron to the frame of `base`, along a spanning tree.
    pub placement: Vec<LorentzMatrix>,
    pub base: usize,
    /// Log-scales of ideal corners after normalising every cusp to unit area.
    pub log_scales: Vec<[f64; 4]>,
    /// Largest Lorentz defect over the face maps.
    pub max_defect: f64,
}

/// Horosphere area of the cusp triangle at an ideal corner with log-scale
/// `σ`: the triangle has circumradius `e^{-σ}`.
pub fn corner_area(shape: &TetShape, v: usize, sigma: f64) -> f64 {
    let r = (-sigma).exp();
    2.0 * r * r * VERTEX_EDGES[v].iter().map(|&e| shape.angles[e].sin()).product::<f64>()
}

/// Shifts the log-scales of every cusp so its cross-section has area 1.
pub fn unit_area_scales(t: &Triangulation, sol: &GeometricSolution) -> Vec<[f64; 4]> {
    let mut scales = sol.log_scales.clone();
    if let Regime::Cusped { cusps } = &sol.regime {
        let b = compute_boundary(t);
        for &c in cusps {
            let corners = &b.components[c].corners;
            let area: f64 = corners.iter().map(|&(tet, v)| corner_area(&sol.shapes[tet], v, scales[tet][v])).sum();
            let shift = 0.5 * area.ln();
            for &(tet, v) in corners {
                scales[tet][v] -= shift;
            }
        }
    }
    scales
}

/// Lorentz map taking `other` (the tetrahedron across face `f` of `here`,
/// reached by `perm`) to the frame of `here`: shared dual points go to
/// shared dual points and the far side's normal to the reversed normal.
pub(crate) fn face_map(here: &MinkowskiRealization, other: &MinkowskiRealization, f: usize, perm: crate::perm::Perm4) -> Option<LorentzMatrix> {
    let mut src = [Vec4::zeros(); 4];
    let mut dst = [Vec4::zeros(); 4];
    let mut k = 0;
    for v in (0..4).filter(|&v| v != f) {
        src[k] = other.dual_points[perm.apply(v)];
        dst[k] = here.dual_points[v];
        k += 1;
    }
    src[3] = other.face_normals[perm.apply(f)];
    dst[3] = -here.face_normals[f];
    map_between(&src, &dst)
}

pub fn glue_realizations(t: &Triangulation, sol: &GeometricSolution) -> Result<GluedRealization, KojimaError> {
    glue_with_base(t, sol, 0)
}

pub fn glue_with_base(t: &Triangulation, sol: &GeometricSolution, base: usize) -> Result<GluedRealization, KojimaError> {
    if !sol.is_success() {
        return Err(KojimaError::Unsolved);
    }
    let n = t.tet_count();
    let log_scales = unit_area_scales(t, sol);
    let mut tets = Vec::with_capacity(n);
    for (k, s) in sol.shapes.iter().enumerate() {
        let r = MinkowskiRealization::decorated(s, log_scales[k])
            .map_err(|e| KojimaError::InconsistentSolution(format!("tetrahedron {k}: {e}")))?;
        tets.push(r);
    }
    let mut face_maps = vec![[LorentzMatrix::identity(); 4]; n];
    let mut max_defect: f64 = 0.0;
    for a in 0..n {
        for f in 0..4 {
            let g = t.gluing(a, f);
            if let Some(v) = (0..4).find(|&v| v != f && tets[a].kinds[v] != tets[g.tet].kinds[g.perm.apply(v)]) {
                return Err(KojimaError::InconsistentSolution(format!("corner ({a}, {v}) ideal on one side only")));
            }
            let m = face_map(&tets[a], &tets[g.tet], f, g.perm)
                .ok_or_else(|| KojimaError::InconsistentSolution(format!("face ({a}, {f}) has dependent vertices")))?;
            let d = lorentz_defect(&m);
            max_defect = max_defect.max(d);
            if !(d <= MATCH_TOLERANCE) {
                return Err(KojimaError::InconsistentSolution(format!("face ({a}, {f}) map has Lorentz defect {d:.3e}")));
            }
            face_maps[a][f] = m;
        }
    }
    let mut placement = vec![LorentzMatrix::identity(); n];
    let mut seen = vec![false; n];
    seen[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(a) = queue.pop_front() {
        for f in 0..4 {
            let b = t.gluing(a, f).tet;
            if !seen[b] {
                seen[b] = true;
                placement[b] = placement[a] * face_maps[a][f];
                queue.push_back(b);
            }
        }
    }
    Ok(GluedRealization { triangulation: t.clone(), shapes: sol.shapes.clone(), tets, face_maps, placement, base, log_scales, max_defect })
}

impl GluedRealization {
    /// Dual point of vertex `v` of the tetrahedron across face `f` of `t`,
    /// expressed in the frame of `t`; this is the far apex of the bipyramid.
    pub fn far_apex(&self, t: usize, f: usize) -> Vec4 {
        let g = self.triangulation.gluing(t, f);
        self.face_maps[t][f] * self.tets[g.tet].dual_points[g.face]
    }

    /// Composite of face maps around each edge class, as it deviates from the
    /// identity (largest entry of `H - I`).
    pub fn edge_holonomy_defects(&self) -> Vec<f64> {
        let edges = crate::triangulation::compute_edge_classes(&self.triangulation);
        edges
            .classes
            .iter()
            .map(|class| {
                let mut h = LorentzMatrix::identity();
                for inc in &class.incidences {
                    h *= self.face_maps[inc.tet][inc.vertices[3]];
                }
                (h - LorentzMatrix::identity()).abs().max()
            })
            .collect()
    }

    /// Pairings `⟨n_f, q⟩` of the transported far apex with the face normal:
    /// positive on the near side, so negative for a geometric bipyramid.
    pub fn apex_side(&self, t: usize, f: usize) -> f64 {
        lorentz_inner(&self.tets[t].face_normals[f], &self.far_apex(t, f))
    }
}
