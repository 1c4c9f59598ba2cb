//! Residuals and analytic Jacobians of the hyperbolicity equations.
//!
//! Unknowns are the `6n` dihedral angles (tetrahedron-major, edge slot minor)
//! followed, in the cusped regime, by one log-scale `σ` per ideal corner. Each
//! incidence of an edge carries a matching quantity depending on its ends:
//! `cosh ℓ` when both are truncated, `log|G⁻¹_kl| - ½ log G⁻¹_ll + σ_k` for one
//! ideal end `k`, and `log|G⁻¹_kl| + σ_k + σ_l` for two. These are the
//! logarithmic distances between the truncation planes and the horospheres
//! `e^σ p_k` decorating the ideal vertices.

use super::{EquationSystem, Regime};
use crate::geometry::{GramData, TetShape, VERTEX_EDGES};
use crate::triangulation::EDGE_VERTICES;
use std::f64::consts::PI;

/// Value and gradient of one incidence's matching quantity: gradient entries
/// for the six angles of its tetrahedron and for up to two log-scales.
#[derive(Clone, Copy, Debug)]
pub(crate) struct EdgeQuantity {
    pub value: f64,
    pub d_angles: [f64; 6],
    pub d_sigma: [(usize, f64); 2],
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum DomainError {
    AngleRange { tet: usize, edge: usize },
    VertexSum { tet: usize, vertex: usize },
    Degenerate { tet: usize },
}

pub(crate) struct Evaluation {
    pub residual: Vec<f64>,
    /// Row-major `equations × unknowns`, when requested.
    pub jacobian: Option<Vec<f64>>,
}

/// Distance from `π` allowed for angle sums at ideal corners during the
/// iteration; truncated corners must stay strictly below `π`.
const IDEAL_SUM_BAND: f64 = 0.5;

impl EquationSystem {
    pub(crate) fn shapes_of(&self, x: &[f64]) -> Vec<TetShape> {
        (0..self.tet_count()).map(|t| TetShape { angles: std::array::from_fn(|e| x[6 * t + e]) }).collect()
    }

    pub(crate) fn check_domain(&self, x: &[f64]) -> Result<(), DomainError> {
        for (tet, s) in self.shapes_of(x).iter().enumerate() {
            for (edge, &a) in s.angles.iter().enumerate() {
                if !(a > 0.0 && a < PI) {
                    return Err(DomainError::AngleRange { tet, edge });
                }
            }
            for vertex in 0..4 {
                let sum = s.vertex_sum(vertex);
                let ok = match self.sigma_index[tet][vertex] {
                    None => sum < PI,
                    Some(_) => (sum - PI).abs() < IDEAL_SUM_BAND,
                };
                if !ok {
                    return Err(DomainError::VertexSum { tet, vertex });
                }
            }
        }
        Ok(())
    }

    fn edge_quantities(&self, tet: usize, shape: &TetShape, g: &GramData, x: &[f64]) -> Result<[EdgeQuantity; 6], DomainError> {
        let dc: Vec<[[f64; 4]; 4]> = (0..6).map(|m| g.cofactor_derivative(shape, m)).collect();
        let ddet: [f64; 6] = std::array::from_fn(|m| g.det_derivative(shape, m));
        let c = &g.cof;
        let det = g.det;
        if !(det < 0.0) {
            return Err(DomainError::Degenerate { tet });
        }
        let sig = |v: usize| self.sigma_index[tet][v];
        let mut out = [EdgeQuantity { value: 0.0, d_angles: [0.0; 6], d_sigma: [(usize::MAX, 0.0); 2] }; 6];
        for (e, &(k, l)) in EDGE_VERTICES.iter().enumerate() {
            let q = &mut out[e];
            match (sig(k), sig(l)) {
                (None, None) => {
                    let (ckk, cll) = (c[k][k], c[l][l]);
                    if !(ckk < 0.0 && cll < 0.0) {
                        return Err(DomainError::Degenerate { tet });
                    }
                    let r = (ckk * cll).sqrt();
                    let h = c[k][l] / r;
                    q.value = h;
                    for m in 0..6 {
                        q.d_angles[m] = dc[m][k][l] / r - 0.5 * h * (dc[m][k][k] / ckk + dc[m][l][l] / cll);
                    }
                }
                (Some(sk), None) | (None, Some(sk)) => {
                    let (ideal, trunc) = if sig(k).is_some() { (k, l) } else { (l, k) };
                    let ckl = c[ideal][trunc];
                    let ctt = c[trunc][trunc];
                    if ckl == 0.0 || !(ctt < 0.0) {
                        return Err(DomainError::Degenerate { tet });
                    }
                    // log|c_kl/det| - ½ log(c_ll/det) + σ_k
                    q.value = (ckl / det).abs().ln() - 0.5 * (ctt / det).ln() + x[sk];
                    for m in 0..6 {
                        q.d_angles[m] = dc[m][ideal][trunc] / ckl - ddet[m] / det
                            - 0.5 * (dc[m][trunc][trunc] / ctt - ddet[m] / det);
                    }
                    q.d_sigma[0] = (sk, 1.0);
                }
                (Some(sk), Some(sl)) => {
                    let ckl = c[k][l];
                    if ckl == 0.0 {
                        return Err(DomainError::Degenerate { tet });
                    }
                    q.value = (ckl / det).abs().ln() + x[sk] + x[sl];
                    for m in 0..6 {
                        q.d_angles[m] = dc[m][k][l] / ckl - ddet[m] / det;
                    }
                    q.d_sigma = [(sk, 1.0), (sl, 1.0)];
                }
            }
        }
        Ok(out)
    }

    /// Residual vector, and the Jacobian when `with_jacobian`.
    pub(crate) fn evaluate(&self, x: &[f64], with_jacobian: bool) -> Result<Evaluation, DomainError> {
        self.check_domain(x)?;
        let shapes = self.shapes_of(x);
        let mut quantities = Vec::with_capacity(shapes.len());
        for (t, s) in shapes.iter().enumerate() {
            quantities.push(self.edge_quantities(t, s, &s.gram(), x)?);
        }
        let u = self.unknown_count();
        let m = self.equation_count();
        let mut residual = Vec::with_capacity(m);
        let mut jac = if with_jacobian { Some(vec![0.0; m * u]) } else { None };
        let mut row = 0;
        let set = |jac: &mut Option<Vec<f64>>, row: usize, col: usize, v: f64| {
            if let Some(j) = jac.as_mut() {
                j[row * u + col] += v;
            }
        };
        for class in &self.edges.classes {
            let sum: f64 = class.incidences.iter().map(|i| x[6 * i.tet + i.slot()]).sum();
            residual.push(sum - 2.0 * PI);
            for i in &class.incidences {
                set(&mut jac, row, 6 * i.tet + i.slot(), 1.0);
            }
            row += 1;
        }
        for class in &self.edges.classes {
            for w in class.incidences.windows(2) {
                let (a, b) = (w[0], w[1]);
                let qa = quantities[a.tet][a.slot()];
                let qb = quantities[b.tet][b.slot()];
                residual.push(qa.value - qb.value);
                for k in 0..6 {
                    set(&mut jac, row, 6 * a.tet + k, qa.d_angles[k]);
                    set(&mut jac, row, 6 * b.tet + k, -qb.d_angles[k]);
                }
                for (col, d) in qa.d_sigma {
                    if col != usize::MAX {
                        set(&mut jac, row, col, d);
                    }
                }
                for (col, d) in qb.d_sigma {
                    if col != usize::MAX {
                        set(&mut jac, row, col, -d);
                    }
                }
                row += 1;
            }
        }
        if let Regime::Cusped { .. } = self.regime {
            // Around each cusp the corner sums add up to π times the corner
            // count once every edge sum is 2π, so the last corner of each cusp
            // is left out and replaced by a gauge row: the log-scales of the
            // cusp sum to zero.
            for cusp in &self.cusp_corners {
                for &(tet, v) in &cusp[..cusp.len() - 1] {
                    residual.push(shapes[tet].vertex_sum(v) - PI);
                    for &e in &VERTEX_EDGES[v] {
                        set(&mut jac, row, 6 * tet + e, 1.0);
                    }
                    row += 1;
                }
                let mut total = 0.0;
                for &(tet, v) in cusp {
                    let col = self.sigma_index[tet][v].expect("cusp corner has a scale");
                    total += x[col];
                    set(&mut jac, row, col, 1.0);
                }
                residual.push(total);
                row += 1;
            }
        }
        debug_assert_eq!(row, m);
        Ok(Evaluation { residual, jacobian: jac })
    }
}
