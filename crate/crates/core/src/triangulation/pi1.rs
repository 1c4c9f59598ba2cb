//! Fundamental group presentations.
//!
//! A truncated triangulation collapses onto its dual spine, so `π₁` is
//! generated by the faces off a spanning tree of the dual graph, with one
//! relator per edge class read off by walking around the edge.

use super::edges::compute_edge_classes;
use super::Triangulation;
use std::collections::VecDeque;

/// Letters are `±(g + 1)` for generator `g` and its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Vec<i32>>,
}

pub fn fundamental_group(t: &Triangulation) -> GroupPresentation {
    let n = t.tet_count();
    // Faces are named by their side with the smaller (tet, face).
    let canonical = |tet: usize, f: usize| {
        let g = t.gluing(tet, f);
        if (tet, f) <= (g.tet, g.face) {
            (tet, f, true)
        } else {
            (g.tet, g.face, false)
        }
    };
    let mut in_tree = vec![[false; 4]; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(tet) = queue.pop_front() {
        for f in 0..4 {
            let g = t.gluing(tet, f);
            if !seen[g.tet] {
                seen[g.tet] = true;
                let (ct, cf, _) = canonical(tet, f);
                in_tree[ct][cf] = true;
                queue.push_back(g.tet);
            }
        }
    }
    let mut index = vec![[usize::MAX; 4]; n];
    let mut generators = 0;
    for tet in 0..n {
        for f in 0..4 {
            let (ct, cf, own) = canonical(tet, f);
            if own && !in_tree[ct][cf] {
                index[ct][cf] = generators;
                generators += 1;
            }
        }
    }
    let relators = compute_edge_classes(t)
        .classes
        .iter()
        .map(|class| {
            class
                .incidences
                .iter()
                .filter_map(|inc| {
                    let (ct, cf, own) = canonical(inc.tet, inc.vertices[3]);
                    let g = index[ct][cf];
                    (g != usize::MAX).then(|| if own { g as i32 + 1 } else { -(g as i32 + 1) })
                })
                .collect()
        })
        .collect();
    GroupPresentation { generators, relators }
}

fn reduce(word: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &x in word.iter() {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    while out.len() >= 2 && out[0] == -out[out.len() - 1] {
        out.pop();
        out.remove(0);
    }
    *word = out;
}

fn inverse(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|x| -x).collect()
}

impl GroupPresentation {
    /// Tietze simplification: free and cyclic reduction, and elimination of
    /// any generator occurring exactly once in some relator.
    pub fn simplify(&self) -> GroupPresentation {
        let mut rels = self.relators.clone();
        loop {
            for r in rels.iter_mut() {
                reduce(r);
            }
            rels.retain(|r| !r.is_empty());
            rels.sort();
            rels.dedup();
            let mut pick = None;
            'search: for (i, r) in rels.iter().enumerate() {
                for &x in r {
                    if r.iter().filter(|&&y| y.abs() == x.abs()).count() == 1 {
                        pick = Some((i, x));
                        break 'search;
                    }
                }
            }
            let Some((i, x)) = pick else { break };
            let r = rels.remove(i);
            let at = r.iter().position(|&y| y == x).unwrap();
            // r = u x v = 1, so x = u⁻¹ v⁻¹.
            let mut value = inverse(&r[..at]);
            value.extend(inverse(&r[at + 1..]));
            if x < 0 {
                value = inverse(&value);
            }
            let g = x.abs();
            for other in rels.iter_mut() {
                let mut out = Vec::with_capacity(other.len());
                for &y in other.iter() {
                    if y == g {
                        out.extend_from_slice(&value);
                    } else if y == -g {
                        out.extend(inverse(&value));
                    } else {
                        out.push(y);
                    }
                }
                *other = out;
            }
        }
        GroupPresentation { generators: self.generators, relators: rels }
    }

    /// True when simplification leaves no relator, or a single relator that
    /// is primitive in the free group on the generators it involves; either
    /// way the group is free. A `false` answer is inconclusive when several
    /// relators remain.
    pub fn is_evidently_free(&self) -> bool {
        let s = self.simplify();
        match s.relators.as_slice() {
            [] => true,
            [r] => is_primitive(r),
            _ => false,
        }
    }
}

fn apply_whitehead(word: &[i32], a: i32, set: &[i32]) -> Vec<i32> {
    let mut out = Vec::with_capacity(word.len() * 3);
    for &x in word {
        if x.abs() == a.abs() {
            out.push(x);
            continue;
        }
        // x ↦ a⁻¹? x a? according to whether x⁻¹ and x lie in the set.
        if set.contains(&-x) {
            out.push(-a);
        }
        out.push(x);
        if set.contains(&x) {
            out.push(a);
        }
    }
    reduce(&mut out);
    out
}

/// Whitehead's algorithm: a cyclic word is primitive exactly when repeated
/// length-reducing Whitehead automorphisms bring it down to a single letter.
pub(crate) fn is_primitive(word: &[i32]) -> bool {
    let mut w = word.to_vec();
    reduce(&mut w);
    let mut gens: Vec<i32> = w.iter().map(|x| x.abs()).collect();
    gens.sort_unstable();
    gens.dedup();
    let letters: Vec<i32> = gens.iter().flat_map(|&g| [g, -g]).collect();
    loop {
        if w.len() <= 1 {
            return w.len() == 1;
        }
        let mut improved = None;
        'search: for &a in &letters {
            let others: Vec<i32> = letters.iter().copied().filter(|x| x.abs() != a.abs()).collect();
            for mask in 1u32..(1 << others.len()) {
                let set: Vec<i32> = (0..others.len()).filter(|&i| mask >> i & 1 == 1).map(|i| others[i]).collect();
                let next = apply_whitehead(&w, a, &set);
                if next.len() < w.len() {
                    improved = Some(next);
                    break 'search;
                }
            }
        }
        match improved {
            Some(next) => w = next,
            None => return false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tietze_eliminates_and_substitutes() {
        // Eliminating c from ⟨a, b, c | abc, aba⁻¹b⁻¹⟩ leaves the commutator.
        let p = GroupPresentation { generators: 3, relators: vec![vec![1, 2, 3], vec![1, 2, -1, -2]] };
        let s = p.simplify();
        assert_eq!(s.relators.len(), 1);
        assert!(!p.is_evidently_free());
        let q = GroupPresentation { generators: 3, relators: vec![vec![1, 2, 3], vec![3, 1, 1]] };
        assert!(q.is_evidently_free());
    }

    #[test]
    fn whitehead_primitivity() {
        assert!(is_primitive(&[1, 2, 1, 2, 2]));
        assert!(is_primitive(&[1, 2, -1, 3]));
        assert!(!is_primitive(&[1, 2, -1, -2]));
        assert!(!is_primitive(&[1, 1]));
        assert!(!is_primitive(&[1, 1, 2, 2]));
    }

    #[test]
    fn cyclic_reduction() {
        let mut w = vec![2, 1, 3, -1, -2];
        reduce(&mut w);
        assert_eq!(w, vec![3]);
    }
}
