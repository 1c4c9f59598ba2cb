use super::edges::compute_edge_classes;
use super::Triangulation;

/// A connected component of the boundary surface, tiled by truncation
/// triangles. Corners are `(tet, vertex)` pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryComponent {
    pub corners: Vec<(usize, usize)>,
    pub euler_characteristic: i64,
    pub orientable: bool,
}

impl BoundaryComponent {
    pub fn triangle_count(&self) -> usize {
        self.corners.len()
    }

    /// Genus, for orientable components.
    pub fn genus(&self) -> Option<u32> {
        (self.orientable && self.euler_characteristic <= 2).then(|| ((2 - self.euler_characteristic) / 2) as u32)
    }

    pub fn is_torus(&self) -> bool {
        self.orientable && self.euler_characteristic == 0
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundarySurface {
    pub components: Vec<BoundaryComponent>,
    /// `corner_component[t][v]` is the component holding the truncation
    /// triangle at vertex `v` of tetrahedron `t`.
    pub corner_component: Vec<[usize; 4]>,
}

impl BoundarySurface {
    pub fn euler_characteristic(&self) -> i64 {
        self.components.iter().map(|c| c.euler_characteristic).sum()
    }

    pub fn is_orientable(&self) -> bool {
        self.components.iter().all(|c| c.orientable)
    }

    /// Genera of the non-torus components, sorted in decreasing order.
    pub fn genus_vector(&self) -> Vec<u32> {
        let mut g: Vec<u32> =
            self.components.iter().filter(|c| !c.is_torus()).filter_map(BoundaryComponent::genus).collect();
        g.sort_unstable_by(|a, b| b.cmp(a));
        g
    }

    pub fn torus_count(&self) -> usize {
        self.components.iter().filter(|c| c.is_torus()).count()
    }

    /// Indices of the torus components.
    pub fn cusp_candidates(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| self.components[i].is_torus()).collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Parity of the bijection between the sorted triples `V \ {v}` and
/// `V \ {p(v)}` induced by `p`.
fn corner_parity(p: crate::perm::Perm4, v: usize) -> i32 {
    let src: Vec<usize> = (0..4).filter(|&x| x != v).collect();
    let w = p.apply(v);
    let dst: Vec<usize> = (0..4).filter(|&x| x != w).collect();
    let img: Vec<usize> = src.iter().map(|&x| dst.iter().position(|&y| y == p.apply(x)).unwrap()).collect();
    let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| img[i] > img[j]).count();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The boundary surface obtained by truncating every vertex.
pub fn compute_boundary(t: &Triangulation) -> BoundarySurface {
    let n = t.tet_count();
    let idx = |tet: usize, v: usize| 4 * tet + v;
    let mut parent: Vec<usize> = (0..4 * n).collect();
    for tet in 0..n {
        for f in 0..4 {
            let g = t.gluing(tet, f);
            for v in (0..4).filter(|&v| v != f) {
                let a = find(&mut parent, idx(tet, v));
                let b = find(&mut parent, idx(g.tet, g.perm.apply(v)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut comp_of_root = vec![usize::MAX; 4 * n];
    let mut corner_component = vec![[0usize; 4]; n];
    let mut corners: Vec<Vec<(usize, usize)>> = Vec::new();
    for tet in 0..n {
        for v in 0..4 {
            let r = find(&mut parent, idx(tet, v));
            if comp_of_root[r] == usize::MAX {
                comp_of_root[r] = corners.len();
                corners.push(Vec::new());
            }
            corner_component[tet][v] = comp_of_root[r];
            corners[comp_of_root[r]].push((tet, v));
        }
    }

    // Vertices of the boundary are the ends of edge classes.
    let mut link_vertices = vec![0i64; corners.len()];
    for class in compute_edge_classes(t).classes {
        let inc = class.incidences[0];
        link_vertices[corner_component[inc.tet][inc.vertices[0]]] += 1;
        link_vertices[corner_component[inc.tet][inc.vertices[1]]] += 1;
    }

    let components = corners
        .into_iter()
        .enumerate()
        .map(|(k, cs)| {
            let faces = cs.len() as i64;
            let euler = link_vertices[k] - 3 * faces / 2 + faces;
            BoundaryComponent { orientable: component_orientable(t, &cs), euler_characteristic: euler, corners: cs }
        })
        .collect();
    BoundarySurface { components, corner_component }
}

fn component_orientable(t: &Triangulation, corners: &[(usize, usize)]) -> bool {
    let mut sign = vec![[0i32; 4]; t.tet_count()];
    let (t0, v0) = corners[0];
    sign[t0][v0] = 1;
    let mut stack = vec![(t0, v0)];
    while let Some((tet, v)) = stack.pop() {
        for f in (0..4).filter(|&f| f != v) {
            let g = t.gluing(tet, f);
            let w = g.perm.apply(v);
            let want = -sign[tet][v] * corner_parity(g.perm, v);
            match sign[g.tet][w] {
                0 => {
                    sign[g.tet][w] = want;
                    stack.push((g.tet, w));
                }
                s if s != want => return false,
                _ => {}
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::fixtures::glue;

    #[test]
    fn identity_double_is_four_spheres() {
        let t = glue(&[
            [(1, 0, "0123"), (1, 1, "0123"), (1, 2, "0123"), (1, 3, "0123")],
            [(0, 0, "0123"), (0, 1, "0123"), (0, 2, "0123"), (0, 3, "0123")],
        ]);
        let b = compute_boundary(&t);
        assert_eq!(b.components.len(), 4);
        assert!(b.components.iter().all(|c| c.euler_characteristic == 2 && c.triangle_count() == 2));
    }

    #[test]
    fn corner_parity_matches_full_parity_on_fixed_vertex() {
        for p in crate::perm::S4 {
            if p.apply(3) == 3 {
                assert_eq!(corner_parity(p, 3), p.sign());
            }
        }
    }
}
