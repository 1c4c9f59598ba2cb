use super::{edge_index, Triangulation};

/// One appearance of an edge class inside a tetrahedron.
///
/// `vertices = [a, b, c, d]` lists the tetrahedron's vertices so that the edge
/// is `ab`, and walking around the edge leaves through the face opposite `d`
/// (the face `abc`) into the next incidence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EdgeIncidence {
    pub tet: usize,
    pub vertices: [usize; 4],
}

impl EdgeIncidence {
    pub fn slot(&self) -> usize {
        edge_index(self.vertices[0], self.vertices[1])
    }

    /// True when the edge is traversed from its lower to its higher vertex.
    pub fn forward(&self) -> bool {
        self.vertices[0] < self.vertices[1]
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeClass {
    /// Cyclically ordered incidences; the first is the smallest `(tet, slot)`.
    pub incidences: Vec<EdgeIncidence>,
    /// Set when the walk meets one of its slots in the reverse direction,
    /// i.e. the edge is identified with itself reversed.
    pub self_reversed: bool,
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.incidences.len()
    }

    /// Number of distinct tetrahedra around the edge.
    pub fn distinct_tets(&self) -> usize {
        let mut tets: Vec<usize> = self.incidences.iter().map(|i| i.tet).collect();
        tets.sort_unstable();
        tets.dedup();
        tets.len()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeStructure {
    pub classes: Vec<EdgeClass>,
    /// `class_of[t][slot]` is the index of the class containing that slot.
    pub class_of: Vec<[usize; 6]>,
}

impl EdgeStructure {
    pub fn valences(&self) -> Vec<usize> {
        self.classes.iter().map(EdgeClass::valence).collect()
    }

    pub fn has_self_reversed_edge(&self) -> bool {
        self.classes.iter().any(|c| c.self_reversed)
    }
}

/// Next incidence around an edge, crossing the face opposite `vertices[3]`.
pub(crate) fn step(t: &Triangulation, inc: EdgeIncidence) -> EdgeIncidence {
    let [a, b, c, d] = inc.vertices;
    let g = t.gluing(inc.tet, d);
    let p = g.perm;
    EdgeIncidence { tet: g.tet, vertices: [p.apply(a), p.apply(b), p.apply(d), p.apply(c)] }
}

fn start_incidence(tet: usize, slot: usize) -> EdgeIncidence {
    let (a, b) = super::EDGE_VERTICES[slot];
    let (c, d) = super::EDGE_VERTICES[super::opposite_edge(slot)];
    EdgeIncidence { tet, vertices: [a, b, c, d] }
}

/// Partitions the `6n` edge slots into edge classes, in order of their
/// smallest `(tet, slot)`.
pub fn compute_edge_classes(t: &Triangulation) -> EdgeStructure {
    let n = t.tet_count();
    let mut class_of = vec![[usize::MAX; 6]; n];
    let mut classes = Vec::new();
    for tet in 0..n {
        for slot in 0..6 {
            if class_of[tet][slot] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let start = start_incidence(tet, slot);
            let mut incidences = Vec::new();
            let mut self_reversed = false;
            let mut cur = start;
            loop {
                let s = cur.slot();
                if class_of[cur.tet][s] == id {
                    self_reversed = true;
                }
                class_of[cur.tet][s] = id;
                incidences.push(cur);
                cur = step(t, cur);
                if cur == start {
                    break;
                }
            }
            classes.push(EdgeClass { incidences, self_reversed });
        }
    }
    EdgeStructure { classes, class_of }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::fixtures::glue;

    #[test]
    fn identity_double_has_six_bivalent_edges() {
        let t = glue(&[
            [(1, 0, "0123"), (1, 1, "0123"), (1, 2, "0123"), (1, 3, "0123")],
            [(0, 0, "0123"), (0, 1, "0123"), (0, 2, "0123"), (0, 3, "0123")],
        ]);
        let e = compute_edge_classes(&t);
        assert_eq!(e.valences(), vec![2; 6]);
        assert!(e.classes.iter().all(|c| c.distinct_tets() == 2 && !c.self_reversed));
    }

    #[test]
    fn valences_sum_to_slot_count() {
        let t = glue(&[[(0, 1, "1023"), (0, 0, "1023"), (0, 3, "0132"), (0, 2, "0132")]]);
        let e = compute_edge_classes(&t);
        assert_eq!(e.valences().iter().sum::<usize>(), 6);
        for (k, class) in e.classes.iter().enumerate() {
            for inc in &class.incidences {
                assert_eq!(e.class_of[inc.tet][inc.slot()], k);
            }
        }
    }
}
