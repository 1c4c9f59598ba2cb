//! Blocks: tetrahedra merged across zero-tilt faces.
//!
//! The boundary of a block is described by a generalised map whose darts are
//! `(tet, face, v, w)`: a boundary face of the block, one of its edges `vw`,
//! and the end `v`. `α0` swaps `v` and `w`, `α1` moves to the other edge at
//! `v`, `α2` walks around `vw` through the block to the next boundary face,
//! and `α3` crosses the face into the neighbouring block. Boundary triangles
//! lying in one plane are joined into polygons by skipping their shared
//! edges in `α1`.

use super::realization::GluedRealization;
use crate::geometry::{lorentz_inner, LorentzMatrix, VertexKind};
use crate::triangulation::{edge_index, Triangulation};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Coplanarity tolerance on `1 - ⟨n, n'⟩` for adjacent boundary faces.
const COPLANAR_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockShape {
    Tetrahedron,
    SquarePyramid,
    Octahedron,
    /// Sorted side counts of the faces.
    Other(Vec<usize>),
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockShape::Tetrahedron => f.write_str("tetrahedron"),
            BlockShape::SquarePyramid => f.write_str("square-pyramid"),
            BlockShape::Octahedron => f.write_str("octahedron"),
            BlockShape::Other(v) => {
                let s: Vec<String> = v.iter().map(usize::to_string).collect();
                write!(f, "other({})", s.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub tets: Vec<usize>,
    pub shape: BlockShape,
    pub vertices: usize,
    pub edges: usize,
    /// Sorted side counts of the polygonal faces.
    pub faces: Vec<usize>,
}

pub(crate) struct FoundBlocks {
    pub blocks: Vec<Block>,
    pub flags: Vec<String>,
    pub merged_mask: Vec<[bool; 4]>,
    /// `diagonal[t][f][slot]`: edge `slot` of boundary face `(t, f)` lies
    /// inside a polygon.
    pub diagonal: Vec<[[bool; 6]; 4]>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Dart {
    tet: usize,
    face: usize,
    v: usize,
    w: usize,
}

fn third(face: usize, v: usize, w: usize) -> usize {
    6 - face - v - w
}

/// Walks around edge `vw` from boundary face `(tet, face)` to the next
/// boundary face, returning it with the map from its frame to the start.
fn walk(t: &Triangulation, merged: &[[bool; 4]], d: Dart, maps: Option<&GluedRealization>) -> (Dart, LorentzMatrix) {
    let (mut tet, mut from, mut v, mut w) = (d.tet, d.face, d.v, d.w);
    let mut m = LorentzMatrix::identity();
    for _ in 0..=4 * t.tet_count() {
        let u = third(from, v, w);
        if !merged[tet][u] {
            return (Dart { tet, face: u, v, w }, m);
        }
        let g = t.gluing(tet, u);
        if let Some(r) = maps {
            m *= r.face_maps[tet][u];
        }
        let p = g.perm;
        tet = g.tet;
        from = p.apply(u);
        v = p.apply(v);
        w = p.apply(w);
    }
    panic!("edge walk did not reach a boundary face");
}

fn merged_mask(t: &Triangulation, merged: &[(usize, usize)]) -> Vec<[bool; 4]> {
    let mut mask = vec![[false; 4]; t.tet_count()];
    for &(tet, face) in merged {
        let g = t.gluing(tet, face);
        mask[tet][face] = true;
        mask[g.tet][g.face] = true;
    }
    mask
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The involutions on polygon darts, shared by shape counting and signatures.
struct GMap {
    darts: Vec<Dart>,
    alpha: Vec<[usize; 4]>,
}

fn build_gmap(t: &Triangulation, mask: &[[bool; 4]], diagonal: &[[[bool; 6]; 4]], flags: &mut Vec<String>) -> GMap {
    let mut darts = Vec::new();
    for tet in 0..t.tet_count() {
        for face in (0..4).filter(|&f| !mask[tet][f]) {
            for v in (0..4).filter(|&v| v != face) {
                for w in (0..4).filter(|&w| w != face && w != v) {
                    if !diagonal[tet][face][edge_index(v, w)] {
                        darts.push(Dart { tet, face, v, w });
                    }
                }
            }
        }
    }
    let index: std::collections::HashMap<_, _> =
        darts.iter().enumerate().map(|(i, d)| ((d.tet, d.face, d.v, d.w), i)).collect();
    let look = |d: Dart, what: &str, flags: &mut Vec<String>| -> usize {
        match index.get(&(d.tet, d.face, d.v, d.w)) {
            Some(&i) => i,
            None => {
                flags.push(format!("{what} of a polygon edge lands on a diagonal at ({}, {})", d.tet, d.face));
                usize::MAX
            }
        }
    };
    let mut alpha = Vec::with_capacity(darts.len());
    for &d in &darts {
        let a0 = Dart { v: d.w, w: d.v, ..d };
        let mut e = Dart { w: third(d.face, d.v, d.w), ..d };
        let mut guard = 0;
        while diagonal[e.tet][e.face][edge_index(e.v, e.w)] && guard <= 24 * t.tet_count() {
            let (n, _) = walk(t, mask, e, None);
            e = Dart { w: third(n.face, n.v, n.w), ..n };
            guard += 1;
        }
        let (a2, _) = walk(t, mask, d, None);
        let g = t.gluing(d.tet, d.face);
        let a3 = Dart { tet: g.tet, face: g.face, v: g.perm.apply(d.v), w: g.perm.apply(d.w) };
        alpha.push([look(a0, "α0", flags), look(e, "α1", flags), look(a2, "α2", flags), look(a3, "α3", flags)]);
    }
    GMap { darts, alpha }
}

fn orbits(g: &GMap, members: &[usize], gens: [usize; 2]) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut sizes = Vec::new();
    for &s in members {
        if !seen.insert(s) {
            continue;
        }
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(d) = stack.pop() {
            size += 1;
            for &k in &gens {
                let n = g.alpha[d][k];
                if n != usize::MAX && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

fn classify(faces: &[usize], vertices: usize) -> BlockShape {
    let tri = faces.iter().filter(|&&s| s == 3).count();
    let quad = faces.iter().filter(|&&s| s == 4).count();
    match (faces.len(), tri, quad, vertices) {
        (4, 4, 0, 4) => BlockShape::Tetrahedron,
        (5, 4, 1, 5) => BlockShape::SquarePyramid,
        (8, 8, 0, 6) => BlockShape::Octahedron,
        _ => BlockShape::Other(faces.to_vec()),
    }
}

pub(crate) fn find_blocks(g: &GluedRealization, merged: &[(usize, usize)]) -> FoundBlocks {
    let t = &g.triangulation;
    let n = t.tet_count();
    let mask = merged_mask(t, merged);
    let mut flags = Vec::new();

    let mut parent: Vec<usize> = (0..n).collect();
    let mut cycles = 0;
    for &(tet, face) in merged {
        let (a, b) = (find(&mut parent, tet), find(&mut parent, t.gluing(tet, face).tet));
        if a == b {
            cycles += 1;
        } else {
            parent[a.max(b)] = a.min(b);
        }
    }

    let mut diagonal = vec![[[false; 6]; 4]; n];
    for tet in 0..n {
        for face in (0..4).filter(|&f| !mask[tet][f]) {
            for v in (0..4).filter(|&v| v != face) {
                for w in (v + 1..4).filter(|&w| w != face) {
                    let (o, m) = walk(t, &mask, Dart { tet, face, v, w }, Some(g));
                    let near = g.tets[tet].face_normals[face];
                    let far = m * g.tets[o.tet].face_normals[o.face];
                    if (1.0 - lorentz_inner(&near, &far)).abs() <= COPLANAR_TOLERANCE {
                        diagonal[tet][face][edge_index(v, w)] = true;
                    }
                }
            }
        }
    }
    // The relation must be symmetric across each edge.
    for tet in 0..n {
        for face in (0..4).filter(|&f| !mask[tet][f]) {
            for v in (0..4).filter(|&v| v != face) {
                for w in (v + 1..4).filter(|&w| w != face) {
                    let (o, _) = walk(t, &mask, Dart { tet, face, v, w }, None);
                    if diagonal[tet][face][edge_index(v, w)] != diagonal[o.tet][o.face][edge_index(o.v, o.w)] {
                        flags.push(format!("coplanarity of faces ({tet}, {face}) and ({}, {}) is asymmetric", o.tet, o.face));
                    }
                }
            }
        }
    }

    let gmap = build_gmap(t, &mask, &diagonal, &mut flags);
    let roots: Vec<usize> = (0..n).map(|k| find(&mut parent, k)).collect();
    let mut order: Vec<usize> = roots.clone();
    order.sort_unstable();
    order.dedup();
    let mut blocks = Vec::new();
    for &r in &order {
        let tets: Vec<usize> = (0..n).filter(|&k| roots[k] == r).collect();
        let members: Vec<usize> = (0..gmap.darts.len()).filter(|&i| roots[gmap.darts[i].tet] == r).collect();
        let vertices = orbits(&gmap, &members, [1, 2]).len();
        let edges = orbits(&gmap, &members, [0, 2]).len();
        let mut faces: Vec<usize> = orbits(&gmap, &members, [0, 1]).into_iter().map(|s| s / 2).collect();
        faces.sort_unstable();
        let euler = vertices as i64 - edges as i64 + faces.len() as i64;
        if euler != 2 {
            flags.push(format!("block with tetrahedra {tets:?} has boundary Euler characteristic {euler}"));
        }
        blocks.push(Block { shape: classify(&faces, vertices), tets, vertices, edges, faces });
    }
    if blocks.len() + merged.len() != n + cycles {
        flags.push(format!("{} blocks from {n} tetrahedra and {} merged faces", blocks.len(), merged.len()));
    }
    FoundBlocks { blocks, flags, merged_mask: mask, diagonal }
}

/// Breadth-first code of the polygon darts from `start`; `None` once it
/// exceeds `best`.
fn code_from(g: &GMap, kinds: &[u8], start: usize, best: Option<&[u32]>) -> Option<Vec<u32>> {
    let m = g.darts.len();
    let mut label = vec![u32::MAX; m];
    let mut order = Vec::with_capacity(m);
    label[start] = 0;
    order.push(start);
    let mut code = Vec::with_capacity(5 * m + 1);
    code.push(m as u32);
    let mut tied = best.is_some();
    let mut k = 0;
    while k < order.len() {
        let d = order[k];
        let before = code.len();
        for i in 0..4 {
            let nb = g.alpha[d][i];
            let l = if nb == usize::MAX {
                u32::MAX
            } else {
                if label[nb] == u32::MAX {
                    label[nb] = order.len() as u32;
                    order.push(nb);
                }
                label[nb]
            };
            code.push(l);
        }
        code.push(kinds[d] as u32);
        if tied {
            let b = best.unwrap();
            match code[before..].cmp(&b[before..code.len()]) {
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Less => tied = false,
                std::cmp::Ordering::Equal => {}
            }
        }
        k += 1;
    }
    Some(code)
}

/// Minimal breadth-first code of the block complex over all start darts.
pub(crate) fn decomposition_signature(t: &Triangulation, mask: &[[bool; 4]], diagonal: &[[[bool; 6]; 4]], g: &GluedRealization) -> String {
    let mut flags = Vec::new();
    let gmap = build_gmap(t, mask, diagonal, &mut flags);
    let kinds: Vec<u8> = gmap
        .darts
        .iter()
        .map(|d| match g.tets[d.tet].kinds[d.v] {
            VertexKind::Truncated => 0,
            VertexKind::Ideal => 1,
        })
        .collect();
    let mut best: Option<Vec<u32>> = None;
    for s in 0..gmap.darts.len() {
        if let Some(c) = code_from(&gmap, &kinds, s, best.as_deref()) {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    let bytes: Vec<u8> = best.unwrap_or_default().iter().flat_map(|x| (*x as u16).to_be_bytes()).collect();
    hex::encode(bytes)
}
