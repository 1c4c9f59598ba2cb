//! Realization of a truncated tetrahedron in Minkowski space `ℝ^{3,1}` with
//! the form `x₀y₀ + x₁y₁ + x₂y₂ - x₃y₃`.
//!
//! Face normals `n_i` are unit space-like with `⟨n_i, n_j⟩ = gram[i][j]`, pointing
//! into the tetrahedron. Vertex `v` has dual point `p_v = Σ_j (G⁻¹)_{vj} n_j`, so
//! `⟨p_v, n_i⟩ = δ_{vi}`; for a truncated vertex it is normalised to
//! `⟨p_v, p_v⟩ = 1` and is the dual of the truncation plane, for an ideal one it
//! is light-like and carries the scale `e^σ` of a horosphere.
//!
//! Gauge: the time axis is the direction of the sum of the dual points (each
//! ideal point rescaled to pair to `-1` with a truncated one), and the space
//! axes come from Minkowski Gram-Schmidt applied to `n_0, n_1, n_2`. All
//! coordinates are therefore functions of the angles alone.

use super::{GeometryError, TetShape, VertexKind};
use nalgebra::{Matrix4, Vector4};

pub type Vec4 = Vector4<f64>;
pub type LorentzMatrix = Matrix4<f64>;

pub fn lorentz_inner(x: &Vec4, y: &Vec4) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3]
}

pub fn lorentz_norm2(x: &Vec4) -> f64 {
    lorentz_inner(x, x)
}

#[derive(Clone, Debug)]
pub struct MinkowskiRealization {
    pub face_normals: [Vec4; 4],
    pub dual_points: [Vec4; 4],
    pub kinds: [VertexKind; 4],
}

/// Coefficient vectors in the basis of face normals, paired through `G`.
fn coeff_inner(g: &[[f64; 4]; 4], x: &[f64; 4], y: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

fn axpy(a: f64, x: &[f64; 4], y: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| a * x[i] + y[i])
}

fn scale(a: f64, x: &[f64; 4]) -> [f64; 4] {
    x.map(|v| a * v)
}

impl MinkowskiRealization {
    pub fn new(shape: &TetShape) -> Result<Self, GeometryError> {
        Self::decorated(shape, [0.0; 4])
    }

    /// Ideal dual points are multiplied by `exp(log_scales[v])`.
    pub fn decorated(shape: &TetShape, log_scales: [f64; 4]) -> Result<Self, GeometryError> {
        let gd = shape.gram();
        let ev = gd.eigenvalues();
        if !(ev[0] < 0.0 && ev[1] > 0.0) || !(gd.det < 0.0) {
            return Err(GeometryError::NotRealizable(format!("Gram eigenvalues {ev:?} lack signature (3,1)")));
        }
        let g = &gd.gram;
        let inv = gd.inverse();
        let kinds: [VertexKind; 4] = std::array::from_fn(|v| shape.vertex_kind(v));

        // Dual points as coefficient vectors.
        let mut points: [[f64; 4]; 4] = std::array::from_fn(|v| inv[v]);
        for v in 0..4 {
            match kinds[v] {
                VertexKind::Truncated => {
                    let n2 = inv[v][v];
                    if n2 <= 0.0 {
                        return Err(GeometryError::NotRealizable(format!("vertex {v} dual point is not space-like")));
                    }
                    points[v] = scale(1.0 / n2.sqrt(), &points[v]);
                }
                VertexKind::Ideal => points[v] = scale(log_scales[v].exp(), &points[v]),
            }
        }

        let reference = (0..4).find(|&v| kinds[v] == VertexKind::Truncated);
        let tau = (0..4).fold([0.0; 4], |acc, v| {
            let w = match (kinds[v], reference) {
                (VertexKind::Ideal, Some(r)) => 1.0 / coeff_inner(g, &points[v], &points[r]).abs(),
                _ => 1.0,
            };
            axpy(w, &points[v], &acc)
        });
        let tau2 = coeff_inner(g, &tau, &tau);
        if !(tau2 < 0.0) {
            return Err(GeometryError::NotRealizable("dual points do not span a time-like direction".into()));
        }
        let e3 = scale(1.0 / (-tau2).sqrt(), &tau);
        let mut frame = vec![e3];
        for i in 0..3 {
            let mut x = [0.0; 4];
            x[i] = 1.0;
            let mut y = axpy(coeff_inner(g, &x, &e3), &e3, &x);
            for e in frame.iter().skip(1) {
                y = axpy(-coeff_inner(g, &y, e), e, &y);
            }
            let nn = coeff_inner(g, &y, &y);
            if !(nn > 1e-300) {
                return Err(GeometryError::NotRealizable("degenerate face normals".into()));
            }
            frame.push(scale(1.0 / nn.sqrt(), &y));
        }
        let coords = |x: &[f64; 4]| {
            Vec4::new(
                coeff_inner(g, x, &frame[1]),
                coeff_inner(g, x, &frame[2]),
                coeff_inner(g, x, &frame[3]),
                -coeff_inner(g, x, &frame[0]),
            )
        };
        let face_normals = std::array::from_fn(|i| {
            let mut x = [0.0; 4];
            x[i] = 1.0;
            coords(&x)
        });
        let dual_points = std::array::from_fn(|v| coords(&points[v]));
        Ok(MinkowskiRealization { face_normals, dual_points, kinds })
    }

    pub fn angles(&self) -> TetShape {
        angles_from_normals(&self.face_normals)
    }

    /// Applies a Lorentz transformation to every vector.
    pub fn transformed(&self, l: &LorentzMatrix) -> Self {
        MinkowskiRealization {
            face_normals: self.face_normals.map(|n| l * n),
            dual_points: self.dual_points.map(|p| l * p),
            kinds: self.kinds,
        }
    }
}

/// Dihedral angles from inward unit face normals.
pub fn angles_from_normals(normals: &[Vec4; 4]) -> TetShape {
    let mut angles = [0.0; 6];
    for (e, slot) in angles.iter_mut().enumerate() {
        let (i, j) = crate::triangulation::EDGE_VERTICES[crate::triangulation::opposite_edge(e)];
        *slot = (-lorentz_inner(&normals[i], &normals[j])).clamp(-1.0, 1.0).acos();
    }
    TetShape { angles }
}

/// Inward unit face normals of the tetrahedron with the given dual points.
pub fn normals_from_points(points: &[Vec4; 4]) -> Result<[Vec4; 4], GeometryError> {
    // Row v of M is p_vᵀ J, so column i of M⁻¹ pairs to δ_{vi} with every p_v.
    let m = Matrix4::from_fn(|v, k| if k == 3 { -points[v][k] } else { points[v][k] });
    let inv = m.try_inverse().ok_or_else(|| GeometryError::NotRealizable("dual points are dependent".into()))?;
    let mut out = [Vec4::zeros(); 4];
    for i in 0..4 {
        let n: Vec4 = inv.column(i).into();
        let nn = lorentz_norm2(&n);
        if !(nn > 0.0) {
            return Err(GeometryError::NotRealizable(format!("face {i} is not a hyperbolic plane")));
        }
        out[i] = n / nn.sqrt();
    }
    Ok(out)
}

/// Shape of the tetrahedron spanned by four dual points.
pub fn shape_from_points(points: &[Vec4; 4]) -> Result<TetShape, GeometryError> {
    Ok(angles_from_normals(&normals_from_points(points)?))
}

/// The linear map sending each `src[k]` to `dst[k]`.
pub fn map_between(src: &[Vec4; 4], dst: &[Vec4; 4]) -> Option<LorentzMatrix> {
    let a = Matrix4::from_columns(src);
    let b = Matrix4::from_columns(dst);
    Some(b * a.try_inverse()?)
}

/// Largest entry of `Lᵀ J L - J`.
pub fn lorentz_defect(l: &LorentzMatrix) -> f64 {
    let j = Matrix4::from_diagonal(&Vec4::new(1.0, 1.0, 1.0, -1.0));
    (l.transpose() * j * l - j).abs().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn regular_shape_round_trip() {
        let s = TetShape::regular(PI / 6.0);
        let r = s.realize().unwrap();
        let back = r.angles();
        for e in 0..6 {
            assert!((back.angles[e] - s.angles[e]).abs() < 1e-12);
        }
        let ip = lorentz_inner(&r.dual_points[0], &r.dual_points[1]);
        for v in 0..4 {
            assert!((lorentz_norm2(&r.dual_points[v]) - 1.0).abs() < 1e-12);
            for w in 0..v {
                assert!((lorentz_inner(&r.dual_points[v], &r.dual_points[w]) - ip).abs() < 1e-12);
            }
        }
        let rebuilt = shape_from_points(&r.dual_points).unwrap();
        assert!((rebuilt.angles[3] - PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_vertex_is_light_like() {
        let third = PI / 3.0;
        let s = TetShape { angles: [third, third, third, 0.5, 0.6, 0.4] };
        let r = s.realize().unwrap();
        assert_eq!(r.kinds[0], VertexKind::Ideal);
        assert!(lorentz_norm2(&r.dual_points[0]).abs() < 1e-12);
        assert!(r.dual_points[0][3] > 0.0);
    }
}
