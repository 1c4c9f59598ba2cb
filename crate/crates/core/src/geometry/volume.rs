//! Volumes of truncated tetrahedra.
//!
//! The closed form is the dilogarithm expression in the exponentials of the
//! dihedral angles, evaluated at the two roots `z±` of the associated
//! quadratic. The Schläfli route integrates `dV = -½ Σ ℓ_e dθ_e` along the
//! straight path from the regular ideal tetrahedron.

use super::dilog::{li2, lobachevsky};
use super::quadrature::tanh_sinh;
use super::{GeometryError, TetShape, VertexKind};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VolumeMethod {
    ClosedForm,
    SchlafliIntegration,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct VolumeValue {
    pub volume: f64,
    pub method: VolumeMethod,
}

pub fn regular_ideal_volume() -> f64 {
    3.0 * lobachevsky(PI / 3.0)
}

pub fn volume_closed_form(shape: &TetShape) -> f64 {
    let th = |i, j| shape.face_angle(i, j);
    let (a_, b_, c_, d_, e_, f_) = (th(0, 1), th(0, 2), th(1, 2), th(2, 3), th(1, 3), th(0, 3));
    let ex = |x: f64| Complex64::from_polar(1.0, x);
    let (a, b, c, d, e, f) = (ex(a_), ex(b_), ex(c_), ex(d_), ex(e_), ex(f_));
    let det = shape.gram().det;
    let num = Complex64::new(-2.0 * (a_.sin() * d_.sin() + b_.sin() * e_.sin() + c_.sin() * f_.sin()), 0.0);
    let den = a * d + b * e + c * f + a * b * f + a * c * e + b * c * d + d * e * f + a * b * c * d * e * f;
    let sq = Complex64::new(det, 0.0).sqrt();
    let zm = (num - 2.0 * sq) / den;
    let zp = (num + 2.0 * sq) / den;
    let u = |z: Complex64| {
        0.5 * (li2(z) + li2(a * b * d * e * z) + li2(a * c * d * f * z) + li2(b * c * e * f * z)
            - li2(-a * b * c * z)
            - li2(-a * e * f * z)
            - li2(-b * d * f * z)
            - li2(-c * d * e * z))
    };
    0.5 * (u(zp) - u(zm)).im
}

/// Schläfli integration from the regular ideal tetrahedron; needs every
/// vertex of `shape` truncated.
pub fn volume_schlafli(shape: &TetShape) -> Result<f64, GeometryError> {
    if let Some(v) = (0..4).find(|&v| shape.vertex_kind(v) == VertexKind::Ideal) {
        return Err(GeometryError::IntegrationFailed(format!(
            "vertex {v} is ideal; the integration path needs truncated endpoints"
        )));
    }
    let start = PI / 3.0;
    let delta: [f64; 6] = shape.angles.map(|x| x - start);
    let integrand = |t: f64| {
        let s = TetShape { angles: std::array::from_fn(|e| start + t * delta[e]) };
        let h = s.cosh_lengths();
        (0..6).map(|e| h[e].max(1.0).acosh() * delta[e]).sum::<f64>()
    };
    let q = tanh_sinh(integrand, 0.0, 1.0, 1e-12, 1e-13).map_err(GeometryError::IntegrationFailed)?;
    Ok(regular_ideal_volume() - 0.5 * q.value)
}

pub fn volume(shape: &TetShape) -> VolumeValue {
    VolumeValue { volume: volume_closed_form(shape), method: VolumeMethod::ClosedForm }
}
