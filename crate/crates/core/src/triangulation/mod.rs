//! Combinatorial ideal triangulations.
//!
//! A triangulation is a set of `n` tetrahedra whose `4n` faces are glued in
//! pairs. Vertices of each tetrahedron are labelled `0..4`; face `f` is the
//! face opposite vertex `f`. A gluing of face `(t, f)` to face `(t', f')` is
//! recorded with a permutation `p` of the vertex labels, mapping the vertices
//! of `t` to the vertices of `t'` with `p(f) = f'`.
//!
//! Edge slots are indexed by vertex pairs in the order of [`EDGE_VERTICES`].
//! The edge joining vertices `k, l` is the intersection of the two faces `i, j`
//! with `{i, j, k, l} = {0, 1, 2, 3}`.

mod boundary;
mod edges;
mod format;
mod isosig;
mod moves;
mod pi1;

pub use boundary::{compute_boundary, BoundaryComponent, BoundarySurface};
pub use edges::{compute_edge_classes, EdgeClass, EdgeIncidence, EdgeStructure};
pub use format::{parse_triangulations, write_triangulation, ParseError, TriangulationBlock};
pub use isosig::{iso_signature, IsoSignature};
pub use moves::{move_2_3, move_3_2, pachner_neighbours};
pub use pi1::{fundamental_group, GroupPresentation};

use crate::perm::Perm4;
use thiserror::Error;

/// Vertex pairs of the six edge slots of a tetrahedron.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot index of the edge joining vertices `a != b`.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge joins vertex {a} to itself or out-of-range vertices"),
    }
}

/// The edge slot disjoint from slot `e`.
pub fn opposite_edge(e: usize) -> usize {
    5 - e
}

/// One side of a face pairing: the face `(tet, face)` it leads to and the
/// vertex bijection.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub perm: Perm4,
}

/// Identifies a face of a triangulation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FaceId {
    pub tet: usize,
    pub face: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("a triangulation needs at least one tetrahedron")]
    Empty,
    #[error("face ({tet}, {face}) is glued to tetrahedron {target}, which does not exist")]
    TetOutOfRange { tet: usize, face: usize, target: usize },
    #[error("face ({tet}, {face}) is glued to itself")]
    SelfGluing { tet: usize, face: usize },
    #[error("face ({tet}, {face}): permutation {perm} sends vertex {tet_face} to {image}, not to face {target_face}")]
    FaceMismatch { tet: usize, face: usize, perm: Perm4, tet_face: usize, image: usize, target_face: usize },
    #[error("gluing of face ({tet}, {face}) is not matched by the inverse gluing on the other side")]
    NotInvolution { tet: usize, face: usize },
    #[error("move inapplicable: {0}")]
    MoveInapplicable(String),
}

/// An ideal triangulation with every face glued.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
}

impl Triangulation {
    /// Validates that the gluings form a fixed-point-free involution on faces
    /// with inverse vertex bijections.
    pub fn new(gluings: Vec<[Gluing; 4]>) -> Result<Self, TriangulationError> {
        if gluings.is_empty() {
            return Err(TriangulationError::Empty);
        }
        let n = gluings.len();
        for (t, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                if g.tet >= n {
                    return Err(TriangulationError::TetOutOfRange { tet: t, face: f, target: g.tet });
                }
                if g.perm.apply(f) != g.face {
                    return Err(TriangulationError::FaceMismatch {
                        tet: t,
                        face: f,
                        perm: g.perm,
                        tet_face: f,
                        image: g.perm.apply(f),
                        target_face: g.face,
                    });
                }
                if g.tet == t && g.face == f {
                    return Err(TriangulationError::SelfGluing { tet: t, face: f });
                }
                let back = gluings[g.tet][g.face];
                if back.tet != t || back.face != f || back.perm != g.perm.inverse() {
                    return Err(TriangulationError::NotInvolution { tet: t, face: f });
                }
            }
        }
        Ok(Triangulation { gluings })
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    /// Each face pairing once, from its lexicographically smaller side.
    pub fn face_pairs(&self) -> impl Iterator<Item = (FaceId, Gluing)> + '_ {
        self.gluings.iter().enumerate().flat_map(|(t, row)| {
            row.iter().enumerate().filter_map(move |(f, g)| {
                ((t, f) < (g.tet, g.face)).then_some((FaceId { tet: t, face: f }, *g))
            })
        })
    }

    /// Relabels tetrahedra by `tet_map[old] = new` and the vertices of old
    /// tetrahedron `t` by `vertex_maps[t]` (old label to new label).
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Triangulation {
        let n = self.tet_count();
        assert_eq!(tet_map.len(), n);
        assert_eq!(vertex_maps.len(), n);
        let placeholder = Gluing { tet: 0, face: 0, perm: Perm4::IDENTITY };
        let mut out = vec![[placeholder; 4]; n];
        for t in 0..n {
            let sigma = vertex_maps[t];
            for f in 0..4 {
                let g = self.gluings[t][f];
                let tau = vertex_maps[g.tet];
                out[tet_map[t]][sigma.apply(f)] = Gluing {
                    tet: tet_map[g.tet],
                    face: tau.apply(g.face),
                    perm: tau.compose(g.perm).compose(sigma.inverse()),
                };
            }
        }
        Triangulation::new(out).expect("relabelling preserves validity")
    }

    /// The same triangulation with every tetrahedron relabelled by a
    /// transposition, which reverses the orientation induced by the labels.
    pub fn mirror(&self) -> Triangulation {
        let n = self.tet_count();
        let tet_map: Vec<usize> = (0..n).collect();
        self.relabel(&tet_map, &vec![Perm4::transposition(0, 1); n])
    }

    /// Orientation signs per tetrahedron making every gluing orientation
    /// reversing; the first tetrahedron of each component gets `+1`.
    /// Returns `None` when no such choice exists.
    pub fn orientation(&self) -> Option<Vec<i32>> {
        let n = self.tet_count();
        let mut sign = vec![0i32; n];
        let mut stack = Vec::new();
        for root in 0..n {
            if sign[root] != 0 {
                continue;
            }
            sign[root] = 1;
            stack.push(root);
            while let Some(t) = stack.pop() {
                for g in &self.gluings[t] {
                    let want = -sign[t] * g.perm.sign();
                    if sign[g.tet] == 0 {
                        sign[g.tet] = want;
                        stack.push(g.tet);
                    } else if sign[g.tet] != want {
                        return None;
                    }
                }
            }
        }
        Some(sign)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    /// True when every gluing permutation is odd, i.e. the vertex labels of
    /// all tetrahedra induce one consistent orientation.
    pub fn is_oriented(&self) -> bool {
        self.gluings.iter().flatten().all(|g| !g.perm.is_even())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.tet_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in &self.gluings[t] {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Relabels so that all gluings are odd; requires orientability.
    pub fn oriented(&self) -> Option<Triangulation> {
        let signs = self.orientation()?;
        let n = self.tet_count();
        let tet_map: Vec<usize> = (0..n).collect();
        let maps: Vec<Perm4> = signs
            .iter()
            .map(|&s| if s > 0 { Perm4::IDENTITY } else { Perm4::transposition(2, 3) })
            .collect();
        Some(self.relabel(&tet_map, &maps))
    }
}
