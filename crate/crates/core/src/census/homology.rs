//! First homology of the compact manifold, by Smith normal form over ℤ.
//!
//! [`compute_homology`] uses the spine dual to the triangulation: one vertex
//! per tetrahedron, one edge per face pair, one 2-cell per edge class.
//! [`truncated_homology`] instead uses the cell structure of the truncated
//! tetrahedra themselves (corner points, long and short edges, hexagons and
//! truncation triangles), and serves as an independent check.

use crate::triangulation::{compute_edge_classes, Triangulation};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// `ℤ^free_rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_k` with `t₁ | t₂ | … | t_k`, all `tᵢ > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nonzero diagonal entries of the Smith normal form of a `rows × cols`
/// matrix, in divisibility order.
pub fn smith_diagonal(mut m: Vec<Vec<i128>>, cols: usize) -> Vec<u64> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut r0 = 0;
    let mut c0 = 0;
    while r0 < rows && c0 < cols {
        // Smallest nonzero entry of the remaining block as pivot.
        let mut pivot = None;
        for i in r0..rows {
            for j in c0..cols {
                if m[i][j] != 0 && pivot.is_none_or(|(pi, pj): (usize, usize)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(r0, pi);
        for row in m.iter_mut() {
            row.swap(c0, pj);
        }
        loop {
            let p = m[r0][c0];
            let mut clean = true;
            for i in r0 + 1..rows {
                let q = m[i][c0] / p;
                if q != 0 {
                    for j in c0..cols {
                        m[i][j] -= q * m[r0][j];
                    }
                }
                clean &= m[i][c0] == 0;
            }
            for j in c0 + 1..cols {
                let q = m[r0][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(r0) {
                        row[j] -= q * row[c0];
                    }
                }
                clean &= m[r0][j] == 0;
            }
            if clean {
                break;
            }
            // A remainder smaller than the pivot becomes the new pivot.
            let (mut bi, mut bj) = (r0, c0);
            for i in r0..rows {
                if m[i][c0] != 0 && m[i][c0].abs() < m[bi][bj].abs() {
                    (bi, bj) = (i, c0);
                }
            }
            for j in c0..cols {
                if m[r0][j] != 0 && m[r0][j].abs() < m[bi][bj].abs() {
                    (bi, bj) = (r0, j);
                }
            }
            m.swap(r0, bi);
            for row in m.iter_mut() {
                row.swap(c0, bj);
            }
        }
        diag.push(m[r0][c0].unsigned_abs());
        r0 += 1;
        c0 += 1;
    }
    // Diagonal to invariant factors.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i] as i128, diag[j] as i128) as u128;
            if g != 0 {
                let l = diag[i] / g * diag[j];
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag.into_iter().map(|d| u64::try_from(d).expect("invariant factor fits in u64")).collect()
}

/// `ker ∂₁ / im ∂₂` for `c1` one-cells and `c2` two-cells.
fn h1(d1: Vec<Vec<i128>>, d2: Vec<Vec<i128>>, c1: usize, c2: usize) -> AbelianGroup {
    let rank1 = smith_diagonal(d1, c1).len();
    let inv2 = smith_diagonal(d2, c2);
    AbelianGroup {
        free_rank: c1 - rank1 - inv2.len(),
        torsion: inv2.into_iter().filter(|&d| d > 1).collect(),
    }
}

/// H₁ from the dual spine.
pub fn compute_homology(t: &Triangulation) -> AbelianGroup {
    let n = t.tet_count();
    // One-cells: face pairs, oriented from the smaller (tet, face) side.
    let mut pair_of = vec![[(0usize, 0i128); 4]; n];
    let mut ends = Vec::new();
    for tet in 0..n {
        for f in 0..4 {
            let g = t.gluing(tet, f);
            if (tet, f) < (g.tet, g.face) {
                pair_of[tet][f] = (ends.len(), 1);
                pair_of[g.tet][g.face] = (ends.len(), -1);
                ends.push((tet, g.tet));
            }
        }
    }
    let c1 = ends.len();
    let mut d1 = vec![vec![0i128; c1]; n];
    for (k, &(from, to)) in ends.iter().enumerate() {
        d1[to][k] += 1;
        d1[from][k] -= 1;
    }
    let classes = compute_edge_classes(t).classes;
    let mut d2 = vec![vec![0i128; classes.len()]; c1];
    for (e, class) in classes.iter().enumerate() {
        for inc in &class.incidences {
            let (k, s) = pair_of[inc.tet][inc.vertices[3]];
            d2[k][e] += s;
        }
    }
    h1(d1, d2, c1, classes.len())
}

/// Union-find over cells, tracking the relative orientation of each cell
/// to its root.
struct SignedClasses {
    parent: Vec<usize>,
    sign: Vec<i128>,
}

impl SignedClasses {
    fn new(k: usize) -> Self {
        SignedClasses { parent: (0..k).collect(), sign: vec![1; k] }
    }

    fn find(&mut self, x: usize) -> (usize, i128) {
        let p = self.parent[x];
        if p == x {
            return (x, 1);
        }
        let (r, s) = self.find(p);
        self.parent[x] = r;
        self.sign[x] *= s;
        (r, self.sign[x])
    }

    /// Records `x = s · y`.
    fn union(&mut self, x: usize, y: usize, s: i128) {
        let (rx, sx) = self.find(x);
        let (ry, sy) = self.find(y);
        if rx != ry {
            self.parent[rx] = ry;
            self.sign[rx] = sx * s * sy;
        }
    }

    /// Dense class index and sign relative to the class for every slot
    /// accepted by `valid`, plus the class count.
    fn resolve(mut self, valid: impl Fn(usize) -> bool) -> (Vec<(usize, i128)>, usize) {
        let mut index = HashMap::new();
        let mut out = vec![(usize::MAX, 0); self.parent.len()];
        for (x, slot) in out.iter_mut().enumerate() {
            if valid(x) {
                let (r, s) = self.find(x);
                let next = index.len();
                *slot = (*index.entry(r).or_insert(next), s);
            }
        }
        (out, index.len())
    }
}

/// H₁ from the cell structure of the truncated tetrahedra.
pub fn truncated_homology(t: &Triangulation) -> AbelianGroup {
    let n = t.tet_count();
    // Slot `16 tet + 4 v + w` stands for the point P(t, v, w) near vertex v
    // on edge vw, the long edge L(t, v, w) (v < w) from P(t,v,w) to P(t,w,v),
    // and the short edge S(t, v, w) in the truncation triangle at v lying on
    // face w, running from the lower to the higher remaining vertex.
    let slot = |tet: usize, v: usize, w: usize| 16 * tet + 4 * v + w;
    let others = |v: usize, f: usize| -> (usize, usize) {
        let r: Vec<usize> = (0..4).filter(|&x| x != v && x != f).collect();
        (r[0], r[1])
    };

    let mut points = SignedClasses::new(16 * n);
    let mut longs = SignedClasses::new(16 * n);
    let mut shorts = SignedClasses::new(16 * n);
    for tet in 0..n {
        for f in 0..4 {
            let g = t.gluing(tet, f);
            let p = |x: usize| g.perm.apply(x);
            for v in (0..4).filter(|&v| v != f) {
                for w in (0..4).filter(|&w| w != f && w != v) {
                    points.union(slot(tet, v, w), slot(g.tet, p(v), p(w)), 1);
                    if v < w {
                        let (pv, pw) = (p(v), p(w));
                        let s = if pv < pw { 1 } else { -1 };
                        longs.union(slot(tet, v, w), slot(g.tet, pv.min(pw), pv.max(pw)), s);
                    }
                }
                let (a, b) = others(v, f);
                let s = if p(a) < p(b) { 1 } else { -1 };
                shorts.union(slot(tet, v, f), slot(g.tet, p(v), p(f)), s);
            }
        }
    }
    let (point_of, c0) = points.resolve(|x| (x / 4) % 4 != x % 4);
    let (long_of, nl) = longs.resolve(|x| (x / 4) % 4 < x % 4);
    let (short_of, ns) = shorts.resolve(|x| (x / 4) % 4 != x % 4);
    let c1 = nl + ns;
    let p_idx = |tet: usize, v: usize, w: usize| point_of[slot(tet, v, w)].0;
    // Class and sign of the long edge traversed from v to w.
    let l_idx = |tet: usize, v: usize, w: usize| {
        let (k, s) = long_of[slot(tet, v.min(w), v.max(w))];
        (k, if v < w { s } else { -s })
    };
    let s_idx = |tet: usize, v: usize, f: usize| {
        let (k, s) = short_of[slot(tet, v, f)];
        (nl + k, s)
    };

    // Every slot of a class has the same boundary up to its sign, so the
    // columns may be filled from any of them.
    let mut d1 = vec![vec![0i128; c1]; c0];
    let mut filled = vec![false; c1];
    for tet in 0..n {
        for v in 0..4 {
            for w in (0..4).filter(|&w| w != v) {
                if v < w {
                    let (k, s) = l_idx(tet, v, w);
                    if !std::mem::replace(&mut filled[k], true) {
                        d1[p_idx(tet, w, v)][k] += s;
                        d1[p_idx(tet, v, w)][k] -= s;
                    }
                }
                let (a, b) = others(v, w);
                let (k, s) = s_idx(tet, v, w);
                if !std::mem::replace(&mut filled[k], true) {
                    d1[p_idx(tet, v, b)][k] += s;
                    d1[p_idx(tet, v, a)][k] -= s;
                }
            }
        }
    }

    let mut columns: Vec<Vec<(usize, i128)>> = Vec::new();
    // Truncation triangles, with remaining vertices a < b < c.
    for tet in 0..n {
        for v in 0..4 {
            let r: Vec<usize> = (0..4).filter(|&x| x != v).collect();
            let (a, b, c) = (r[0], r[1], r[2]);
            let neg = |(k, s): (usize, i128)| (k, -s);
            columns.push(vec![s_idx(tet, v, c), s_idx(tet, v, a), neg(s_idx(tet, v, b))]);
        }
    }
    // Hexagons, one per face pair.
    for tet in 0..n {
        for f in 0..4 {
            let g = t.gluing(tet, f);
            if (tet, f) > (g.tet, g.face) {
                continue;
            }
            let r: Vec<usize> = (0..4).filter(|&x| x != f).collect();
            let (a, b, c) = (r[0], r[1], r[2]);
            let mut col: Vec<(usize, i128)> = [(a, b), (b, c), (c, a)].iter().map(|&(x, y)| l_idx(tet, x, y)).collect();
            for (vertex, sign) in [(b, 1), (c, -1), (a, -1)] {
                let (k, s) = s_idx(tet, vertex, f);
                col.push((k, sign * s));
            }
            columns.push(col);
        }
    }
    let c2 = columns.len();
    let mut d2 = vec![vec![0i128; c2]; c1];
    for (j, col) in columns.iter().enumerate() {
        for &(k, s) in col {
            d2[k][j] += s;
        }
    }
    h1(d1, d2, c1, c2)
}

/// Whether `g` is one of the groups found for the complexity-2 and -3
/// census manifolds.
pub fn in_known_family(g: &AbelianGroup) -> bool {
    match (g.free_rank, g.torsion.as_slice()) {
        (2, []) => true,
        (2, [k]) => *k <= 8,
        (2, [2, 2]) => true,
        (3, []) => true,
        (3, [k]) => matches!(k, 2 | 3 | 5),
        (4, []) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::fixtures::glue;

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert_eq!(smith_diagonal(vec![vec![0, 0], vec![0, 0]], 2), Vec::<u64>::new());
        assert_eq!(smith_diagonal(vec![vec![4, 6, 10]], 3), vec![2]);
    }

    #[test]
    fn display() {
        assert_eq!(AbelianGroup { free_rank: 2, torsion: vec![3] }.to_string(), "Z^2 + Z/3");
        assert_eq!(AbelianGroup { free_rank: 0, torsion: vec![] }.to_string(), "0");
    }

    #[test]
    fn identity_double_is_a_ball_with_holes() {
        // Two tetrahedra glued by the identity: a 3-sphere minus four balls.
        let t = glue(&[
            [(1, 0, "0123"), (1, 1, "0123"), (1, 2, "0123"), (1, 3, "0123")],
            [(0, 0, "0123"), (0, 1, "0123"), (0, 2, "0123"), (0, 3, "0123")],
        ]);
        let zero = AbelianGroup { free_rank: 0, torsion: vec![] };
        assert_eq!(compute_homology(&t), zero);
        assert_eq!(truncated_homology(&t), zero);
    }
}
