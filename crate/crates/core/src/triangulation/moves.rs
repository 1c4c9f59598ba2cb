//! The 2-3 and 3-2 Pachner moves.
//!
//! New tetrahedra are described by "names" for their vertices, shared across
//! the new tetrahedra, so internal gluings follow from matching names. Faces on
//! the outside of the affected region carry a map from the new tetrahedron's
//! local vertices to the vertices of the old tetrahedron that owned the face.

use super::edges::EdgeClass;
use super::{Gluing, Triangulation, TriangulationError};
use crate::perm::Perm4;
use std::collections::HashMap;

enum FaceSpec {
    Internal,
    /// The face coincides with face `face` of old tetrahedron `tet`; `map`
    /// sends new local vertices to old ones.
    External { tet: usize, face: usize, map: Perm4 },
}

struct NewTet {
    names: [u8; 4],
    faces: [FaceSpec; 4],
}

fn rebuild(t: &Triangulation, removed: &[usize], new_tets: &[NewTet]) -> Triangulation {
    let n = t.tet_count();
    let mut renumber = vec![usize::MAX; n];
    let mut next = 0;
    for (old, slot) in renumber.iter_mut().enumerate() {
        if !removed.contains(&old) {
            *slot = next;
            next += 1;
        }
    }
    let base = next;

    // Old face of a removed tetrahedron -> (new tet, new face, local map).
    let mut outer: HashMap<(usize, usize), (usize, usize, Perm4)> = HashMap::new();
    for (i, nt) in new_tets.iter().enumerate() {
        for (f, spec) in nt.faces.iter().enumerate() {
            if let FaceSpec::External { tet, face, map } = *spec {
                debug_assert_eq!(map.apply(f), face);
                outer.insert((tet, face), (base + i, f, map));
            }
        }
    }
    // Where a face of some old tetrahedron now points, with the vertex map
    // from old local labels of `tet` composed in.
    let redirect = |tet: usize, face: usize, perm: Perm4| -> Gluing {
        match outer.get(&(tet, face)) {
            Some(&(nt, nf, map)) => Gluing { tet: nt, face: nf, perm: map.inverse().compose(perm) },
            None => Gluing { tet: renumber[tet], face, perm },
        }
    };

    let placeholder = Gluing { tet: 0, face: 0, perm: Perm4::IDENTITY };
    let mut rows = vec![[placeholder; 4]; base + new_tets.len()];
    for old in (0..n).filter(|o| !removed.contains(o)) {
        for f in 0..4 {
            let g = t.gluing(old, f);
            rows[renumber[old]][f] = redirect(g.tet, g.face, g.perm);
        }
    }
    for (i, nt) in new_tets.iter().enumerate() {
        for (f, spec) in nt.faces.iter().enumerate() {
            rows[base + i][f] = match *spec {
                FaceSpec::External { tet, face, map } => {
                    let g = t.gluing(tet, face);
                    redirect(g.tet, g.face, g.perm.compose(map))
                }
                FaceSpec::Internal => internal_gluing(new_tets, i, f, base),
            };
        }
    }
    Triangulation::new(rows).expect("Pachner move produced an invalid gluing")
}

fn internal_gluing(new_tets: &[NewTet], i: usize, f: usize, base: usize) -> Gluing {
    let names = new_tets[i].names;
    let shared: Vec<u8> = (0..4).filter(|&v| v != f).map(|v| names[v]).collect();
    let j = (0..new_tets.len())
        .find(|&j| j != i && shared.iter().all(|s| new_tets[j].names.contains(s)))
        .expect("internal face has a partner");
    let other = new_tets[j].names;
    let mut images = [0u8; 4];
    for v in 0..4 {
        let name = if v == f { *other.iter().find(|x| !names.contains(x)).unwrap() } else { names[v] };
        images[v] = other.iter().position(|&x| x == name).unwrap() as u8;
    }
    let perm = Perm4::new(images).unwrap();
    Gluing { tet: base + j, face: perm.apply(f), perm }
}

fn perm_from(images: [usize; 4]) -> Perm4 {
    Perm4::new(images.map(|x| x as u8)).expect("vertex map is a bijection")
}

/// Replaces the two distinct tetrahedra on either side of face `(tet, face)`
/// by three tetrahedra around a new edge. Untouched tetrahedra keep their
/// relative order and come first; the three new ones are appended.
pub fn move_2_3(t: &Triangulation, tet: usize, face: usize) -> Result<Triangulation, TriangulationError> {
    let g = t.gluing(tet, face);
    if g.tet == tet {
        return Err(TriangulationError::MoveInapplicable(format!(
            "face ({tet}, {face}) joins tetrahedron {tet} to itself"
        )));
    }
    let p = g.perm;
    let top = face;
    let bottom_name = 4u8;
    let ring: Vec<usize> = (0..4).filter(|&v| v != top).collect();
    let new_tets: Vec<NewTet> = ring
        .iter()
        .map(|&z| {
            let xy: Vec<usize> = ring.iter().copied().filter(|&v| v != z).collect();
            let (x, y) = (xy[0], xy[1]);
            NewTet {
                names: [top as u8, bottom_name, x as u8, y as u8],
                faces: [
                    FaceSpec::External { tet: g.tet, face: p.apply(z), map: perm_from([p.apply(z), g.face, p.apply(x), p.apply(y)]) },
                    FaceSpec::External { tet, face: z, map: perm_from([top, z, x, y]) },
                    FaceSpec::Internal,
                    FaceSpec::Internal,
                ],
            }
        })
        .collect();
    Ok(rebuild(t, &[tet, g.tet], &new_tets))
}

/// Replaces the three distinct tetrahedra around a valence-3 edge by two.
pub fn move_3_2(t: &Triangulation, edge: &EdgeClass) -> Result<Triangulation, TriangulationError> {
    if edge.valence() != 3 || edge.distinct_tets() != 3 || edge.self_reversed {
        return Err(TriangulationError::MoveInapplicable(format!(
            "edge has valence {} on {} distinct tetrahedra",
            edge.valence(),
            edge.distinct_tets()
        )));
    }
    let inc = &edge.incidences;
    // Ring vertex names 0, 1, 2. Consecutive incidences share the face
    // through `c` of the first and `d` of the second, so naming `c` of
    // incidence `j` as ring vertex `j` makes its `d` ring vertex `j - 1`.
    let (top, bottom) = (3u8, 4u8);
    let make = |apex: u8, endpoint: usize| NewTet {
        names: [apex, 0, 1, 2],
        faces: std::array::from_fn(|local| {
            if local == 0 {
                return FaceSpec::Internal;
            }
            // Local 0 is the apex and local r+1 is ring vertex r; this face
            // misses ring vertex k and lies in the incidence spanning k+1, k+2.
            let k = local - 1;
            let i = &inc[(k + 2) % 3];
            let [e0, e1, c, d] = i.vertices;
            let (ends, away) = if endpoint == 0 { (e0, e1) } else { (e1, e0) };
            let mut images = [0usize; 4];
            images[0] = ends;
            images[k + 1] = away;
            images[(k + 2) % 3 + 1] = c;
            images[(k + 1) % 3 + 1] = d;
            FaceSpec::External { tet: i.tet, face: away, map: perm_from(images) }
        }),
    };
    let upper = make(top, 0);
    let lower = make(bottom, 1);
    let removed: Vec<usize> = inc.iter().map(|i| i.tet).collect();
    Ok(rebuild(t, &removed, &[upper, lower]))
}

/// Every triangulation one 2-3 or 3-2 move away, in a fixed order: 2-3
/// moves by `(tet, face)`, then 3-2 moves by edge class.
pub fn pachner_neighbours(t: &Triangulation) -> Vec<Triangulation> {
    let mut out = Vec::new();
    for tet in 0..t.tet_count() {
        for face in 0..4 {
            if let Ok(u) = move_2_3(t, tet, face) {
                out.push(u);
            }
        }
    }
    for class in super::compute_edge_classes(t).classes {
        if let Ok(u) = move_3_2(t, &class) {
            out.push(u);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{compute_boundary, compute_edge_classes, iso_signature};
    use crate::triangulation::fixtures::glue;

    fn sample() -> Triangulation {
        glue(&[
            [(1, 0, "0123"), (1, 1, "0123"), (1, 2, "0123"), (1, 3, "0123")],
            [(0, 0, "0123"), (0, 1, "0123"), (0, 2, "0123"), (0, 3, "0123")],
        ])
    }

    #[test]
    fn two_three_then_three_two() {
        let t = sample();
        for face in 0..4 {
            let u = move_2_3(&t, 0, face).unwrap();
            assert_eq!(u.tet_count(), 3);
            let edges = compute_edge_classes(&u);
            let new_edge = edges.class_of[2][0];
            let class = &edges.classes[new_edge];
            // Slot (0,1) of every new tetrahedron is the new edge.
            assert_eq!(class.valence(), 3);
            let back = move_3_2(&u, class).unwrap();
            assert_eq!(iso_signature(&back, false), iso_signature(&t, false));
            assert_eq!(compute_boundary(&u).euler_characteristic(), compute_boundary(&t).euler_characteristic());
        }
    }

    #[test]
    fn self_glued_face_is_rejected() {
        let t = glue(&[[(0, 1, "1023"), (0, 0, "1023"), (0, 3, "0132"), (0, 2, "0132")]]);
        assert!(matches!(move_2_3(&t, 0, 0), Err(TriangulationError::MoveInapplicable(_))));
    }
}
