use super::{GeometryError, TetShape, VertexKind, VERTEX_EDGES};
use crate::triangulation::{opposite_edge, EDGE_VERTICES};

/// Gram matrix of the four face planes and its cofactors.
///
/// `gram[i][j] = -cos` of the angle between faces `i` and `j`. The cofactor
/// matrix `cof` equals `det · gram⁻¹`; `cof[v][v] < 0` exactly when vertex `v`
/// is truncated and vanishes when it is ideal.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GramData {
    pub gram: [[f64; 4]; 4],
    pub cof: [[f64; 4]; 4],
    pub det: f64,
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(g: &[[f64; 4]; 4], i: usize, j: usize) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (r, a) in (0..4).filter(|&a| a != i).enumerate() {
        for (c, b) in (0..4).filter(|&b| b != j).enumerate() {
            out[r][c] = g[a][b];
        }
    }
    out
}

/// `1 - x² - y² - z² - 2xyz` with `x, y, z` the cosines of `a, b, c`, written as
/// a product that stays accurate as `a + b + c → π`.
pub(crate) fn vertex_cofactor(a: f64, b: f64, c: f64) -> f64 {
    let s = a + b + c;
    -4.0 * (s / 2.0).cos() * ((s - 2.0 * a) / 2.0).cos() * ((s - 2.0 * b) / 2.0).cos() * ((s - 2.0 * c) / 2.0).cos()
}

impl GramData {
    pub fn new(shape: &TetShape) -> Self {
        let mut gram = [[0.0; 4]; 4];
        for i in 0..4 {
            gram[i][i] = 1.0;
        }
        for e in 0..6 {
            // Edge kl lies on the two faces other than k and l.
            let (i, j) = EDGE_VERTICES[opposite_edge(e)];
            let x = -shape.angles[e].cos();
            gram[i][j] = x;
            gram[j][i] = x;
        }
        let mut cof = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                cof[i][j] = sign * det3(minor(&gram, i, j));
            }
        }
        for v in 0..4 {
            let [a, b, c] = VERTEX_EDGES[v].map(|e| shape.angles[e]);
            cof[v][v] = vertex_cofactor(a, b, c);
        }
        let det = (0..4).map(|j| gram[0][j] * cof[0][j]).sum();
        GramData { gram, cof, det }
    }

    /// `cosh` of each edge length, `c_kl / sqrt(c_kk c_ll)`; `+∞` at ideal ends.
    pub fn cosh_lengths(&self) -> [f64; 6] {
        std::array::from_fn(|e| {
            let (k, l) = EDGE_VERTICES[e];
            let d = self.cof[k][k] * self.cof[l][l];
            if d <= 0.0 {
                f64::INFINITY
            } else {
                self.cof[k][l] / d.sqrt()
            }
        })
    }

    pub fn inverse(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.cof[i][j] / self.det))
    }

    /// Derivatives of every cofactor with respect to the angle of edge slot `m`.
    pub fn cofactor_derivative(&self, shape: &TetShape, m: usize) -> [[f64; 4]; 4] {
        let (i, j) = EDGE_VERTICES[opposite_edge(m)];
        let s = shape.angles[m].sin() / self.det;
        let c = &self.cof;
        std::array::from_fn(|a| {
            std::array::from_fn(|b| s * (2.0 * c[i][j] * c[a][b] - c[a][i] * c[j][b] - c[a][j] * c[i][b]))
        })
    }

    /// Derivative of `det` with respect to the angle of edge slot `m`.
    pub fn det_derivative(&self, shape: &TetShape, m: usize) -> f64 {
        let (i, j) = EDGE_VERTICES[opposite_edge(m)];
        2.0 * shape.angles[m].sin() * self.cof[i][j]
    }

    /// `∂ cosh ℓ_e / ∂θ_m`; needs every vertex truncated.
    pub fn cosh_length_jacobian(&self, shape: &TetShape) -> Result<[[f64; 6]; 6], GeometryError> {
        for v in 0..4 {
            if shape.vertex_kind(v) == VertexKind::Ideal {
                return Err(GeometryError::IllConditioned { vertex: v });
            }
        }
        let h = self.cosh_lengths();
        let mut out = [[0.0; 6]; 6];
        for m in 0..6 {
            let dc = self.cofactor_derivative(shape, m);
            for (e, &(k, l)) in EDGE_VERTICES.iter().enumerate() {
                let ckk = self.cof[k][k];
                let cll = self.cof[l][l];
                out[e][m] = dc[k][l] / (ckk * cll).sqrt() - 0.5 * h[e] * (dc[k][k] / ckk + dc[l][l] / cll);
            }
        }
        Ok(out)
    }

    /// Symmetric eigenvalues of the Gram matrix in increasing order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let m = nalgebra::Matrix4::from_fn(|i, j| self.gram[i][j]);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2], ev[3]]
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::edge_index;
    use std::f64::consts::PI;

    #[test]
    fn stable_diagonal_matches_determinant() {
        let s = TetShape { angles: [0.3, 0.5, 0.7, 0.4, 0.6, 0.8] };
        let g = GramData::new(&s);
        for v in 0..4 {
            let direct = det3(minor(&g.gram, v, v));
            assert!((direct - g.cof[v][v]).abs() < 1e-14, "{v}: {direct} vs {}", g.cof[v][v]);
            assert!(g.cof[v][v] < 0.0);
        }
        assert!(g.det < 0.0);
    }

    #[test]
    fn signature_three_one() {
        let ev = GramData::new(&TetShape::regular(PI / 7.0)).eigenvalues();
        assert!(ev[0] < 0.0 && ev[1] > 0.0);
    }

    #[test]
    fn cofactor_derivative_matches_differences() {
        let s = TetShape { angles: [0.3, 0.5, 0.7, 0.4, 0.6, 0.8] };
        let g = GramData::new(&s);
        let h = 1e-6;
        for m in 0..6 {
            let d = g.cofactor_derivative(&s, m);
            let mut sp = s;
            sp.angles[m] += h;
            let mut sm = s;
            sm.angles[m] -= h;
            let (gp, gm) = (GramData::new(&sp), GramData::new(&sm));
            for a in 0..4 {
                for b in 0..4 {
                    let fd = (gp.cof[a][b] - gm.cof[a][b]) / (2.0 * h);
                    assert!((fd - d[a][b]).abs() < 1e-8, "m={m} a={a} b={b}: {fd} vs {}", d[a][b]);
                }
            }
            let fd = (gp.det - gm.det) / (2.0 * h);
            assert!((fd - g.det_derivative(&s, m)).abs() < 1e-8);
        }
    }

    #[test]
    fn face_pair_edge_is_shared() {
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let (k, l) = EDGE_VERTICES[opposite_edge(edge_index(i, j))];
                    assert!(![k, l].contains(&i) && ![k, l].contains(&j));
                }
            }
        }
    }
}
