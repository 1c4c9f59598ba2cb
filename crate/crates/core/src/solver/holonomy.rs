//! Independent check of cusped solutions: the Euclidean triangles cut out by
//! horospheres at the ideal corners are developed into the plane from the
//! angles alone (law of sines), and every gluing not used by the development
//! must then be a translation.

use crate::geometry::TetShape;
use crate::triangulation::{edge_index, BoundaryComponent, Triangulation};
use num_complex::Complex64;
use std::collections::{HashMap, VecDeque};

/// Angle at vertex `j` of the cusp triangle at corner `k`.
fn corner_angle(s: &TetShape, k: usize, j: usize) -> f64 {
    s.angles[edge_index(k, j)]
}

fn side(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    ((b - a).conj() * (c - a)).im
}

/// For each component, the largest `|h - 1|` over the linear parts `h` of the
/// gluings between developed cusp triangles. Zero (up to rounding) exactly
/// when the cusp cross-section is a Euclidean torus.
pub fn cusp_holonomy_defects(t: &Triangulation, shapes: &[TetShape], cusps: &[&BoundaryComponent]) -> Vec<f64> {
    cusps.iter().map(|c| defect(t, shapes, c)).collect()
}

fn defect(t: &Triangulation, shapes: &[TetShape], comp: &BoundaryComponent) -> f64 {
    let mut pos: HashMap<(usize, usize), [Complex64; 4]> = HashMap::new();
    let (t0, k0) = comp.corners[0];
    let s0 = &shapes[t0];
    let others: Vec<usize> = (0..4).filter(|&v| v != k0).collect();
    let (a, b, c) = (others[0], others[1], others[2]);
    let mut p = [Complex64::new(0.0, 0.0); 4];
    let ab = corner_angle(s0, k0, c).sin();
    let ac = corner_angle(s0, k0, b).sin();
    p[b] = Complex64::new(ab, 0.0);
    p[c] = Complex64::from_polar(ac, corner_angle(s0, k0, a));
    pos.insert((t0, k0), p);
    let mut queue = VecDeque::from([(t0, k0)]);
    let mut worst: f64 = 0.0;
    while let Some((tet, k)) = queue.pop_front() {
        let here = pos[&(tet, k)];
        for f in (0..4).filter(|&f| f != k) {
            let g = t.gluing(tet, f);
            let (t2, k2) = (g.tet, g.perm.apply(k));
            let shared: Vec<usize> = (0..4).filter(|&v| v != k && v != f).collect();
            let (u, w) = (shared[0], shared[1]);
            let (a1, b1) = (here[u], here[w]);
            let (u2, w2) = (g.perm.apply(u), g.perm.apply(w));
            if let Some(there) = pos.get(&(t2, k2)) {
                let h = (b1 - a1) / (there[w2] - there[u2]);
                worst = worst.max((h - 1.0).norm());
                continue;
            }
            let s2 = &shapes[t2];
            let apex = g.perm.apply(f);
            let alpha = corner_angle(s2, k2, u2);
            let ratio = corner_angle(s2, k2, w2).sin() / corner_angle(s2, k2, apex).sin();
            let d = b1 - a1;
            let away = side(a1, b1, here[f]);
            let mut apex_pos = a1 + d * Complex64::from_polar(ratio, alpha);
            if side(a1, b1, apex_pos) * away > 0.0 {
                apex_pos = a1 + d * Complex64::from_polar(ratio, -alpha);
            }
            let mut q = [Complex64::new(0.0, 0.0); 4];
            q[u2] = a1;
            q[w2] = b1;
            q[apex] = apex_pos;
            pos.insert((t2, k2), q);
            queue.push_back((t2, k2));
        }
    }
    worst
}
