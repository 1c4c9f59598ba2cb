//! Canonical decompositions of solved triangulations.
//!
//! Faces with positive tilt sum are removed by 2-3 moves, re-solving after
//! each; faces with zero sum are then merged into polyhedral blocks, and the
//! block complex gets a signature that identifies the manifold.

mod blocks;
mod realization;
mod tilt;

pub use blocks::{Block, BlockShape};
use blocks::{decomposition_signature, find_blocks};
pub use realization::{corner_area, glue_realizations, glue_with_base, unit_area_scales, GluedRealization, MATCH_TOLERANCE};
pub use tilt::{compute_tilts, tilts_closed_form, tilts_geometric, FaceTilt, Tilt, TiltSign};

use crate::geometry::{lorentz_inner, shape_from_points, LorentzMatrix, TetShape, Vec4, VertexKind};
use crate::solver::{build_system, default_init, newton_solve, GeometricSolution, Regime, SolverConfig};
use crate::triangulation::{compute_boundary, compute_edge_classes, edge_index, iso_signature, move_2_3, move_3_2, pachner_neighbours, EdgeClass, EdgeStructure, Triangulation};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub const EPS_TILT: f64 = 1e-8;
pub const MAX_FLIPS: usize = 100;
/// Largest volume change accepted across a flip.
pub const FLIP_VOLUME_DRIFT: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KojimaError {
    #[error("solution was not successful")]
    Unsolved,
    #[error("inconsistent solution: {0}")]
    InconsistentSolution(String),
    #[error("re-solve failed after a flip on {signature}: {detail}")]
    ResolveFailed { signature: String, detail: String },
    #[error("volume changed by {drift:.3e} across a flip on {signature}")]
    VolumeDrift { signature: String, drift: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalConfig {
    pub max_flips: usize,
    pub eps_tilt: f64,
    pub solver: SolverConfig,
}

impl Default for CanonicalConfig {
    fn default() -> Self {
        CanonicalConfig { max_flips: MAX_FLIPS, eps_tilt: EPS_TILT, solver: SolverConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipStep {
    pub kind: FlipKind,
    pub tet: usize,
    pub face: usize,
    pub tilt: Tilt,
    /// Unoriented signature of the triangulation after the flip.
    pub result: String,
    pub volume_drift: f64,
}

#[derive(Clone, Debug)]
pub struct KojimaDecomposition {
    /// Final triangulation, subdividing the blocks.
    pub triangulation: Triangulation,
    pub solution: GeometricSolution,
    pub tilts: Vec<FaceTilt>,
    /// Face pairs `(tet, face)` (smaller side) merged into a block.
    pub merged: Vec<(usize, usize)>,
    pub blocks: Vec<Block>,
    /// Hex encoding of the minimal code of the block complex.
    pub signature: String,
    pub flips: Vec<FlipStep>,
    pub converged: bool,
    /// Anything unexpected about the result.
    pub flags: Vec<String>,
}

impl KojimaDecomposition {
    /// Sorted block shape names.
    pub fn shape_multiset(&self) -> Vec<String> {
        let mut v: Vec<String> = self.blocks.iter().map(|b| b.shape.to_string()).collect();
        v.sort();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ManifoldId {
    pub signature: String,
    pub cusps: usize,
    pub boundary_genera: Vec<u32>,
}

impl ManifoldId {
    /// A short digest of all fields.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(self.signature.as_bytes());
        h.update(format!("|{}|{:?}", self.cusps, self.boundary_genera).as_bytes());
        hex::encode(&h.finalize()[..8])
    }
}

impl fmt::Display for ManifoldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.boundary_genera.iter().map(u32::to_string).collect();
        write!(f, "c{}:g{}:{}", self.cusps, g.join(","), self.digest())
    }
}

pub fn manifold_id(k: &KojimaDecomposition) -> ManifoldId {
    let b = compute_boundary(&k.triangulation);
    ManifoldId { signature: k.signature.clone(), cusps: k.solution.cusps(), boundary_genera: b.genus_vector() }
}

/// A local move removing a non-convex face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlipKind {
    /// 2-3 move across the face.
    TwoThree,
    /// 3-2 move removing a valence-3 edge of the face.
    ThreeTwo,
}

/// Shapes and log-scales of the untouched tetrahedra followed by those of
/// the tetrahedra spanned by developed dual points.
fn developed(g: &GluedRealization, removed: &[usize], new_points: &[[Vec4; 4]]) -> (Vec<TetShape>, Vec<[f64; 4]>) {
    let mut shapes: Vec<TetShape> = Vec::new();
    let mut scales: Vec<[f64; 4]> = Vec::new();
    for k in (0..g.tets.len()).filter(|k| !removed.contains(k)) {
        shapes.push(g.shapes[k]);
        scales.push(g.log_scales[k]);
    }
    for pts in new_points {
        let shape = shape_from_points(pts).unwrap_or(TetShape { angles: [f64::NAN; 6] });
        let mut ls = [0.0; 4];
        if let Ok(n) = crate::geometry::normals_from_points(pts) {
            for v in 0..4 {
                if shape.vertex_kind(v) == VertexKind::Ideal {
                    ls[v] = lorentz_inner(&pts[v], &n[v]).ln();
                }
            }
        }
        shapes.push(shape);
        scales.push(ls);
    }
    (shapes, scales)
}

type Moved = (Triangulation, Vec<TetShape>, Vec<[f64; 4]>);

/// The 2-3 move at `(tet, face)` with the geometry of its new tetrahedra.
fn two_three(g: &GluedRealization, tet: usize, face: usize) -> Result<Moved, String> {
    let t = &g.triangulation;
    let next = move_2_3(t, tet, face).map_err(|e| e.to_string())?;
    let a = &g.tets[tet];
    let bottom = g.far_apex(tet, face);
    let ring: Vec<usize> = (0..4).filter(|&v| v != face).collect();
    let pts: Vec<[Vec4; 4]> = ring
        .iter()
        .map(|&z| {
            let xy: Vec<usize> = ring.iter().copied().filter(|&v| v != z).collect();
            [a.dual_points[face], bottom, a.dual_points[xy[0]], a.dual_points[xy[1]]]
        })
        .collect();
    let (shapes, scales) = developed(g, &[tet, t.gluing(tet, face).tet], &pts);
    Ok((next, shapes, scales))
}

/// The 3-2 move on `edge` with the geometry of its two new tetrahedra.
fn three_two(g: &GluedRealization, edge: &EdgeClass) -> Result<Moved, String> {
    let next = move_3_2(&g.triangulation, edge).map_err(|e| e.to_string())?;
    let inc = &edge.incidences;
    let mut frame = LorentzMatrix::identity();
    let mut ring = [Vec4::zeros(); 3];
    for (j, i) in inc.iter().enumerate() {
        ring[j] = frame * g.tets[i.tet].dual_points[i.vertices[2]];
        frame *= g.face_maps[i.tet][i.vertices[3]];
    }
    let first = &g.tets[inc[0].tet];
    let ends = [first.dual_points[inc[0].vertices[0]], first.dual_points[inc[0].vertices[1]]];
    let pts: Vec<[Vec4; 4]> = ends.iter().map(|&apex| [apex, ring[0], ring[1], ring[2]]).collect();
    let removed: Vec<usize> = inc.iter().map(|i| i.tet).collect();
    let (shapes, scales) = developed(g, &removed, &pts);
    Ok((next, shapes, scales))
}

/// `None` when the segment between the two apexes meets the shared face in
/// its interior, so the three new tetrahedra are non-degenerate; otherwise
/// the ring vertex across whose opposite edge the segment passes.
fn flip_obstruction(g: &GluedRealization, tet: usize, face: usize) -> Option<usize> {
    let bottom = g.far_apex(tet, face);
    let n = &g.tets[tet].face_normals;
    (0..4)
        .filter(|&z| z != face)
        .map(|z| (z, lorentz_inner(&n[z], &bottom)))
        .filter(|&(_, p)| p <= 0.0)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(z, _)| z)
}

/// The move to try at a positive face: a 2-3 move when it is geometric,
/// otherwise a 3-2 move on the obstructing edge when that edge allows one.
fn choose_move(g: &GluedRealization, edges: &EdgeStructure, tet: usize, face: usize) -> Option<(FlipKind, Option<usize>)> {
    match flip_obstruction(g, tet, face) {
        None => Some((FlipKind::TwoThree, None)),
        Some(z) => {
            let xy: Vec<usize> = (0..4).filter(|&v| v != face && v != z).collect();
            let class = edges.class_of[tet][edge_index(xy[0], xy[1])];
            let c = &edges.classes[class];
            (c.valence() == 3 && c.distinct_tets() == 3 && !c.self_reversed).then_some((FlipKind::ThreeTwo, Some(class)))
        }
    }
}

fn sig_of(t: &Triangulation) -> String {
    iso_signature(t, false).to_string()
}

/// Re-solves on `next` from the developed geometry and checks the volume.
fn resolve(moved: Moved, sol: &GeometricSolution, cfg: &CanonicalConfig) -> Result<(Triangulation, GeometricSolution, f64), KojimaError> {
    let (next, shapes, scales) = moved;
    let regime = match sol.regime {
        Regime::Compact => Regime::Compact,
        Regime::Cusped { .. } => {
            let b = compute_boundary(&next);
            let cusps = (0..b.components.len())
                .filter(|&c| b.components[c].corners.iter().any(|&(k, v)| shapes[k].vertex_kind(v) == VertexKind::Ideal))
                .collect();
            Regime::Cusped { cusps }
        }
    };
    let fail = |detail: String| KojimaError::ResolveFailed { signature: sig_of(&next), detail };
    let sys = build_system(&next, regime).map_err(|e| fail(e.to_string()))?;
    let mut init = sys.pack(&shapes, Some(&scales));
    if !init.iter().all(|x| x.is_finite()) || !sys.in_domain(&init) {
        init = default_init(&sys);
    }
    let solved = newton_solve(&sys, &init, &cfg.solver);
    if let crate::solver::Classification::Failed { reason } = &solved.classification {
        return Err(fail(reason.summary()));
    }
    let drift = (solved.volume() - sol.volume()).abs();
    if !(drift <= FLIP_VOLUME_DRIFT) {
        return Err(KojimaError::VolumeDrift { signature: sig_of(&next), drift });
    }
    Ok((next, solved, drift))
}

pub fn canonicalize(t: &Triangulation, sol: &GeometricSolution) -> Result<KojimaDecomposition, KojimaError> {
    canonicalize_with(t, sol, &CanonicalConfig::default())
}

pub fn canonicalize_with(t: &Triangulation, sol: &GeometricSolution, cfg: &CanonicalConfig) -> Result<KojimaDecomposition, KojimaError> {
    let mut tri = t.clone();
    let mut sol = sol.clone();
    let mut flips = Vec::new();
    let mut flags = Vec::new();
    let mut converged = true;
    let (glued, tilts) = loop {
        let g = glue_realizations(&tri, &sol)?;
        let tilts = compute_tilts(&g);
        let mut positive: Vec<&FaceTilt> =
            tilts.iter().filter(|ft| ft.sum.sign(cfg.eps_tilt) == TiltSign::Positive).collect();
        if positive.is_empty() {
            break (g, tilts);
        }
        if flips.len() >= cfg.max_flips {
            converged = false;
            flags.push(format!("no canonical triangulation after {} flips", flips.len()));
            break (g, tilts);
        }
        positive.sort_by(|a, b| b.sum.magnitude().partial_cmp(&a.sum.magnitude()).unwrap_or(std::cmp::Ordering::Equal));
        positive.retain(|ft| ft.tet != ft.other_tet);
        let edges = compute_edge_classes(&tri);
        // Faces whose move is realised by non-degenerate tetrahedra come
        // first, then plain 2-3 moves; the first move that re-solves is taken.
        let mut moves: Vec<(&FaceTilt, FlipKind, Option<usize>)> = positive
            .iter()
            .filter_map(|ft| choose_move(&g, &edges, ft.tet, ft.face).map(|(k, e)| (*ft, k, e)))
            .collect();
        moves.extend(positive.iter().map(|ft| (*ft, FlipKind::TwoThree, None)));
        if moves.is_empty() {
            converged = false;
            flags.push("positive tilt only on faces joining a tetrahedron to itself".into());
            break (g, tilts);
        }
        let mut first_err = None;
        let mut taken = None;
        for &(ft, kind, edge) in &moves {
            let moved = match edge {
                Some(e) => three_two(&g, &edges.classes[e]),
                None => two_three(&g, ft.tet, ft.face),
            };
            let attempt = moved
                .map_err(|detail| KojimaError::ResolveFailed { signature: sig_of(&tri), detail })
                .and_then(|m| resolve(m, &sol, cfg));
            match attempt {
                Ok(r) => {
                    taken = Some((ft, kind, r));
                    break;
                }
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        let Some((ft, kind, (next, solved, drift))) = taken else {
            return Err(first_err.expect("at least one move was tried"));
        };
        flips.push(FlipStep { kind, tet: ft.tet, face: ft.face, tilt: ft.sum, result: sig_of(&next), volume_drift: drift });
        tri = next;
        sol = solved;
    };
    let merged: Vec<(usize, usize)> = tilts
        .iter()
        .filter(|ft| ft.sum.sign(cfg.eps_tilt) == TiltSign::Zero)
        .map(|ft| (ft.tet, ft.face))
        .collect();
    let found = find_blocks(&glued, &merged);
    flags.extend(found.flags);
    let signature = decomposition_signature(&tri, &found.merged_mask, &found.diagonal, &glued);
    Ok(KojimaDecomposition {
        triangulation: tri,
        solution: sol,
        tilts,
        merged,
        blocks: found.blocks,
        signature,
        flips,
        converged,
        flags,
    })
}

/// Limits on the search through nearby triangulations made by
/// [`canonicalize_or_retry`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RetryConfig {
    /// Largest number of moves away from the input.
    pub depth: usize,
    /// Largest number of tetrahedra above the input's count.
    pub extra_tets: usize,
    /// Largest number of neighbours solved.
    pub max_attempts: usize,
}

impl Default for RetryConfig {
    fn default() -> Self {
        RetryConfig { depth: 3, extra_tets: 2, max_attempts: 400 }
    }
}

/// Canonicalizes `t`, and when there is no solution on `t` or the flip
/// sequence breaks down, tries triangulations reached by 2-3 and 3-2 moves in
/// breadth-first order instead. A neighbour is used only if it solves and,
/// when `sol` is successful, has the same volume. The first neighbour that
/// canonicalizes wins; it is named in the flags.
pub fn canonicalize_or_retry(
    t: &Triangulation,
    sol: &GeometricSolution,
    cfg: &CanonicalConfig,
    retry: &RetryConfig,
) -> Result<KojimaDecomposition, KojimaError> {
    let first = if sol.is_success() { canonicalize_with(t, sol, cfg) } else { Err(KojimaError::Unsolved) };
    let err = match first {
        Ok(k) => return Ok(k),
        Err(e) => e,
    };
    let max_tets = t.tet_count() + retry.extra_tets;
    let mut seen = std::collections::HashSet::from([iso_signature(t, false)]);
    let mut queue = std::collections::VecDeque::from([(t.clone(), 0usize)]);
    let mut attempts = 0;
    while let Some((u, depth)) = queue.pop_front() {
        if depth > 0 {
            attempts += 1;
            let s = crate::solver::solve_with_cusp_handoff(&u, &cfg.solver);
            let volume_ok = !sol.is_success() || (s.volume() - sol.volume()).abs() <= FLIP_VOLUME_DRIFT;
            if s.is_success() && volume_ok {
                if let Ok(mut k) = canonicalize_with(&u, &s, cfg) {
                    k.flags.push(format!("canonicalized from {} at {depth} moves", sig_of(&u)));
                    return Ok(k);
                }
            }
            if attempts >= retry.max_attempts {
                break;
            }
        }
        if depth < retry.depth {
            for w in pachner_neighbours(&u) {
                if w.tet_count() <= max_tets && seen.insert(iso_signature(&w, false)) {
                    queue.push_back((w, depth + 1));
                }
            }
        }
    }
    Err(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_candidates, EnumerationConfig};
    use crate::perm::S4;
    use crate::solver::solve;

    #[test]
    fn one_edged_triangulations_are_canonical() {
        let stream = enumerate_candidates(&EnumerationConfig::new(2));
        let mut ids = std::collections::BTreeSet::new();
        for (_, t) in &stream.candidates {
            let k = canonicalize(t, &solve(t)).unwrap();
            assert!(k.converged && k.flips.is_empty());
            assert_eq!(k.shape_multiset(), ["tetrahedron", "tetrahedron"]);
            let id = manifold_id(&k);
            assert!(id.to_string().starts_with("c0:g2:"), "{id}");
            ids.insert(id);
        }
        assert_eq!(ids.len(), 8);
    }

    #[test]
    fn id_ignores_labels() {
        let stream = enumerate_candidates(&EnumerationConfig::new(2));
        let (_, t) = &stream.candidates[3];
        let id = manifold_id(&canonicalize(t, &solve(t)).unwrap());
        let u = t.relabel(&[1, 0], &[S4[7], S4[19]]);
        assert_eq!(manifold_id(&canonicalize(&u, &solve(&u)).unwrap()), id);
    }
}
