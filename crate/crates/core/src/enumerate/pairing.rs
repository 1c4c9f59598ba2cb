//! Face-pairing graphs: connected 4-regular multigraphs, loops allowed, one
//! node per tetrahedron and one edge per pair of glued faces.

/// `mult[i][j]` counts edges between nodes `i != j`; `mult[i][i]` counts loops.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FacePairingGraph {
    pub mult: Vec<Vec<u8>>,
}

impl FacePairingGraph {
    pub fn node_count(&self) -> usize {
        self.mult.len()
    }

    fn degree(&self, i: usize) -> u32 {
        (0..self.node_count()).map(|j| if i == j { 2 * self.mult[i][i] as u32 } else { self.mult[i][j] as u32 }).sum()
    }

    fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if self.mult[i][j] > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn permuted(&self, perm: &[usize]) -> Vec<u8> {
        let n = self.node_count();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.mult[perm[i]][perm[j]]);
            }
        }
        out
    }

    /// True when no node relabelling gives a lexicographically larger
    /// adjacency matrix, so each isomorphism class is kept once.
    fn is_canonical(&self) -> bool {
        let own = self.permuted(&(0..self.node_count()).collect::<Vec<_>>());
        let mut perm: Vec<usize> = (0..self.node_count()).collect();
        let mut better = false;
        for_each_permutation(&mut perm, 0, &mut |p| {
            if self.permuted(p) > own {
                better = true;
            }
        });
        !better
    }

    /// Face pairs `((t, f), (t', f'))`, with faces handed out to half-edges in
    /// order of the node pairs `(i, j)`, `i <= j`.
    pub fn face_pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        let n = self.node_count();
        let mut next = vec![0usize; n];
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                for _ in 0..self.mult[i][j] {
                    let a = (i, next[i]);
                    next[i] += 1;
                    let b = (j, next[j]);
                    next[j] += 1;
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn for_each_permutation(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        for_each_permutation(p, k + 1, f);
        p.swap(k, i);
    }
}

/// All face-pairing graphs on `n` nodes up to isomorphism, in a fixed order.
pub fn face_pairing_graphs(n: usize) -> Vec<FacePairingGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut g = FacePairingGraph { mult: vec![vec![0; n]; n] };
    fill(&pairs, 0, &mut g, &mut out);
    out.sort();
    out
}

fn fill(pairs: &[(usize, usize)], k: usize, g: &mut FacePairingGraph, out: &mut Vec<FacePairingGraph>) {
    if k == pairs.len() {
        if (0..g.node_count()).all(|i| g.degree(i) == 4) && g.is_connected() && g.is_canonical() {
            out.push(g.clone());
        }
        return;
    }
    let (i, j) = pairs[k];
    let cost = if i == j { 2 } else { 1 };
    let mut m = 0u8;
    loop {
        if g.degree(i) > 4 || g.degree(j) > 4 {
            break;
        }
        fill(pairs, k + 1, g, out);
        m += 1;
        if (m as u32) * cost > 4 {
            break;
        }
        g.mult[i][j] = m;
        g.mult[j][i] = m;
    }
    g.mult[i][j] = 0;
    g.mult[j][i] = 0;
}
