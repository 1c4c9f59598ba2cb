//! Hyperbolicity equations and their solution.
//!
//! In the compact regime every boundary component is totally geodesic and
//! the system has `6n` equations: one angle sum `2π` per edge class and, along
//! each class, `valence - 1` equalities between consecutive `cosh ℓ`. In the
//! cusped regime the corners of the chosen torus components become ideal;
//! lengths ending there are measured between horospheres, which adds one
//! unknown log-scale per ideal corner, one angle-sum-`π` equation per ideal
//! corner but the last of each cusp, and one gauge row per cusp.

mod holonomy;
mod lu;
mod system;

pub use holonomy::cusp_holonomy_defects;
pub use lu::{solve as lu_solve, Singular};

use crate::geometry::{TetShape, VERTEX_EDGES};
use crate::triangulation::{compute_boundary, compute_edge_classes, BoundarySurface, EdgeStructure, Triangulation};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use system::DomainError;
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Compact,
    /// Indices of the boundary components made into cusps.
    Cusped { cusps: Vec<usize> },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("triangulation is not orientable")]
    NonOrientable,
    #[error("cusped regime requested but the boundary has no torus component")]
    NoTorus,
    #[error("boundary component {0} is not a torus")]
    NotATorus(usize),
}

#[derive(Clone, Debug)]
pub struct EquationSystem {
    pub triangulation: Triangulation,
    pub edges: EdgeStructure,
    pub boundary: BoundarySurface,
    pub regime: Regime,
    /// Column of the log-scale of each ideal corner.
    pub(crate) sigma_index: Vec<[Option<usize>; 4]>,
    pub(crate) cusp_corners: Vec<Vec<(usize, usize)>>,
}

pub fn build_system(t: &Triangulation, regime: Regime) -> Result<EquationSystem, SystemError> {
    if !t.is_orientable() {
        return Err(SystemError::NonOrientable);
    }
    let boundary = compute_boundary(t);
    let n = t.tet_count();
    let mut sigma_index = vec![[None; 4]; n];
    let mut cusp_corners = Vec::new();
    if let Regime::Cusped { cusps } = &regime {
        if cusps.is_empty() {
            return Err(SystemError::NoTorus);
        }
        let mut next = 6 * n;
        for &c in cusps {
            let comp = boundary.components.get(c).ok_or(SystemError::NotATorus(c))?;
            if !comp.is_torus() {
                return Err(SystemError::NotATorus(c));
            }
            for &(tet, v) in &comp.corners {
                sigma_index[tet][v] = Some(next);
                next += 1;
            }
            cusp_corners.push(comp.corners.clone());
        }
    }
    Ok(EquationSystem { triangulation: t.clone(), edges: compute_edge_classes(t), boundary, regime, sigma_index, cusp_corners })
}

impl EquationSystem {
    pub fn tet_count(&self) -> usize {
        self.triangulation.tet_count()
    }

    pub fn ideal_corner_count(&self) -> usize {
        self.cusp_corners.iter().map(Vec::len).sum()
    }

    pub fn unknown_count(&self) -> usize {
        6 * self.tet_count() + self.ideal_corner_count()
    }

    pub fn angle_equation_count(&self) -> usize {
        self.edges.classes.len()
    }

    pub fn length_equation_count(&self) -> usize {
        self.edges.classes.iter().map(|c| c.valence() - 1).sum()
    }

    pub fn equation_count(&self) -> usize {
        self.angle_equation_count() + self.length_equation_count() + self.ideal_corner_count()
    }

    pub fn cusp_count(&self) -> usize {
        self.cusp_corners.len()
    }

    pub fn is_ideal_corner(&self, tet: usize, v: usize) -> bool {
        self.sigma_index[tet][v].is_some()
    }

    /// Residual at `x`, or `None` outside the domain.
    pub fn residual(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.evaluate(x, false).ok().map(|e| e.residual)
    }

    /// Row-major Jacobian at `x`, or `None` outside the domain.
    pub fn jacobian(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.evaluate(x, true).ok().and_then(|e| e.jacobian)
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        self.check_domain(x).is_ok()
    }

    /// Corners treated as truncated whose angle sum is within `margin` of `π`.
    pub fn near_ideal_corners(&self, x: &[f64], margin: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, s) in self.shapes_of(x).iter().enumerate() {
            for v in 0..4 {
                if !self.is_ideal_corner(t, v) && s.vertex_sum(v) > PI - margin {
                    out.push((t, v));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub max_halvings: usize,
    /// A truncated corner sum above `π - cusp_margin` counts as drifting.
    pub cusp_margin: f64,
    /// Consecutive drifting, stalled iterations before giving up on the regime.
    pub cusp_patience: usize,
    /// Residual ratio above which an iteration counts as stalled.
    pub stall_ratio: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 50,
            tolerance: 1e-11,
            max_halvings: 40,
            cusp_margin: 1e-4,
            cusp_patience: 3,
            stall_ratio: 0.5,
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FailureReason {
    Diverged { detail: String },
    LeftDomain { detail: String },
    CuspSuspected { corners: Vec<(usize, usize)> },
    CuspedAlsoFailed { compact: Box<FailureReason>, cusped: Box<FailureReason> },
    System { detail: String },
}

impl FailureReason {
    pub fn summary(&self) -> String {
        match self {
            FailureReason::Diverged { detail } => format!("diverged: {detail}"),
            FailureReason::LeftDomain { detail } => format!("left moduli domain: {detail}"),
            FailureReason::CuspSuspected { corners } => format!("cusp suspected at corners {corners:?}"),
            FailureReason::CuspedAlsoFailed { compact, cusped } => {
                format!("compact: {}; cusped: {}", compact.summary(), cusped.summary())
            }
            FailureReason::System { detail } => detail.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    Compact,
    Cusped { cusps: usize },
    Failed { reason: FailureReason },
}

#[derive(Clone, Debug)]
pub struct GeometricSolution {
    /// Final iterate; meaningful geometry only on success.
    pub shapes: Vec<TetShape>,
    /// `σ` per corner, zero at truncated corners.
    pub log_scales: Vec<[f64; 4]>,
    pub residual_norm: f64,
    pub regime: Regime,
    pub iterations: usize,
    pub classification: Classification,
}

impl GeometricSolution {
    pub fn is_success(&self) -> bool {
        !matches!(self.classification, Classification::Failed { .. })
    }

    pub fn cusps(&self) -> usize {
        match self.classification {
            Classification::Cusped { cusps } => cusps,
            _ => 0,
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        self.shapes.iter().flat_map(|s| s.angles).collect()
    }

    pub fn volume(&self) -> f64 {
        self.shapes.iter().map(|s| crate::geometry::volume(s).volume).sum()
    }

    fn failed(sys: &EquationSystem, x: &[f64], norm: f64, iterations: usize, reason: FailureReason) -> Self {
        GeometricSolution {
            shapes: sys.shapes_of(x),
            log_scales: sys.log_scales_of(x),
            residual_norm: norm,
            regime: sys.regime.clone(),
            iterations,
            classification: Classification::Failed { reason },
        }
    }
}

impl EquationSystem {
    fn log_scales_of(&self, x: &[f64]) -> Vec<[f64; 4]> {
        self.sigma_index.iter().map(|row| row.map(|s| s.map_or(0.0, |c| x.get(c).copied().unwrap_or(0.0)))).collect()
    }

    /// Packs shapes and log-scales into an unknown vector.
    pub fn pack(&self, shapes: &[TetShape], log_scales: Option<&[[f64; 4]]>) -> Vec<f64> {
        let mut x: Vec<f64> = shapes.iter().flat_map(|s| s.angles).collect();
        x.resize(self.unknown_count(), 0.0);
        if let Some(ls) = log_scales {
            for (t, row) in self.sigma_index.iter().enumerate() {
                for v in 0..4 {
                    if let Some(c) = row[v] {
                        x[c] = ls[t][v];
                    }
                }
            }
        }
        x
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Rescales the angles of any tetrahedron with a truncated corner sum at or
/// above `π`, so the iterate starts inside the domain.
fn retract(sys: &EquationSystem, x: &mut [f64]) {
    for t in 0..sys.tet_count() {
        let mut worst: f64 = 0.0;
        for v in 0..4 {
            if !sys.is_ideal_corner(t, v) {
                worst = worst.max(VERTEX_EDGES[v].iter().map(|&e| x[6 * t + e]).sum());
            }
        }
        let cap = PI - 0.05;
        if worst > cap {
            for e in 0..6 {
                x[6 * t + e] *= cap / worst;
            }
        }
    }
}

/// Each angle `2π / valence` of its edge, clamped into `(δ, π - δ)`, then
/// retracted into the domain when a corner sum reaches `π`; log-scales are
/// fitted by least squares for these angles.
pub fn default_init(sys: &EquationSystem) -> Vec<f64> {
    const DELTA: f64 = 1e-3;
    let mut x = vec![0.0; sys.unknown_count()];
    for class in &sys.edges.classes {
        let a = (2.0 * PI / class.valence() as f64).clamp(DELTA, PI - DELTA);
        for i in &class.incidences {
            x[6 * i.tet + i.slot()] = a;
        }
    }
    retract(sys, &mut x);
    fit_log_scales(sys, &mut x);
    x
}

/// The `k`-th restart point: every default angle multiplied by a factor in
/// `[1 - spread, 1 + spread]` from a ChaCha stream keyed by `k`, then
/// retracted into the domain. `k = 0` gives [`default_init`].
pub fn restart_init(sys: &EquationSystem, k: u64, spread: f64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut x = default_init(sys);
    if k == 0 {
        return x;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(k);
    for a in x.iter_mut().take(6 * sys.tet_count()) {
        *a = (*a * rng.random_range(1.0 - spread..=1.0 + spread)).clamp(1e-3, PI - 1e-3);
    }
    retract(sys, &mut x);
    fit_log_scales(sys, &mut x);
    x
}

/// Least-squares log-scales for the current angles; the residual is affine
/// in the log-scales.
fn fit_log_scales(sys: &EquationSystem, x: &mut [f64]) {
    let k = sys.ideal_corner_count();
    if k == 0 {
        return;
    }
    let Ok(ev) = sys.evaluate(x, true) else { return };
    let j = ev.jacobian.expect("requested");
    let u = sys.unknown_count();
    let m = sys.equation_count();
    let a = DMatrix::from_fn(m, k, |r, c| j[r * u + 6 * sys.tet_count() + c]);
    let b = DVector::from_vec(ev.residual);
    if let Ok(step) = a.svd(true, true).solve(&b, 1e-12) {
        for c in 0..k {
            x[6 * sys.tet_count() + c] -= step[c];
        }
    }
}

fn describe(e: &DomainError) -> String {
    match e {
        DomainError::AngleRange { tet, edge } => format!("angle ({tet}, {edge}) left (0, π)"),
        DomainError::VertexSum { tet, vertex } => format!("corner ({tet}, {vertex}) angle sum out of range"),
        DomainError::Degenerate { tet } => format!("tetrahedron {tet} degenerate"),
    }
}

/// Damped Newton iteration: full steps are halved until the iterate stays in
/// the domain and the residual norm decreases.
pub fn newton_solve(sys: &EquationSystem, init: &[f64], cfg: &SolverConfig) -> GeometricSolution {
    let mut x = init.to_vec();
    let mut f = match sys.evaluate(&x, false) {
        Ok(e) => e.residual,
        Err(e) => return GeometricSolution::failed(sys, &x, f64::INFINITY, 0, FailureReason::LeftDomain { detail: format!("initial point: {}", describe(&e)) }),
    };
    let mut nf = norm(&f);
    let mut drifting = 0;
    for iter in 0..=cfg.max_iterations {
        if nf <= cfg.tolerance {
            let classification = match sys.regime {
                Regime::Compact => Classification::Compact,
                Regime::Cusped { .. } => Classification::Cusped { cusps: sys.cusp_count() },
            };
            return GeometricSolution {
                shapes: sys.shapes_of(&x),
                log_scales: sys.log_scales_of(&x),
                residual_norm: nf,
                regime: sys.regime.clone(),
                iterations: iter,
                classification,
            };
        }
        if iter == cfg.max_iterations {
            break;
        }
        let j = sys.evaluate(&x, true).expect("current iterate is in the domain").jacobian.expect("requested");
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let dx = match lu_solve(j, rhs) {
            Ok(dx) => dx,
            Err(Singular { column }) => {
                return GeometricSolution::failed(sys, &x, nf, iter, drift_or(sys, &x, cfg, FailureReason::Diverged { detail: format!("singular Jacobian at column {column}") }));
            }
        };
        let mut alpha = 1.0;
        let mut accepted = None;
        let mut last_domain = None;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + alpha * d).collect();
            match sys.evaluate(&trial, false) {
                Ok(e) => {
                    let nt = norm(&e.residual);
                    if nt < nf {
                        accepted = Some((trial, e.residual, nt));
                        break;
                    }
                }
                Err(e) => last_domain = Some(e),
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew, nnew)) = accepted else {
            let reason = match last_domain {
                Some(e) => FailureReason::LeftDomain { detail: describe(&e) },
                None => FailureReason::Diverged { detail: "step underflow".into() },
            };
            return GeometricSolution::failed(sys, &x, nf, iter, drift_or(sys, &x, cfg, reason));
        };
        let stalled = nnew > cfg.stall_ratio * nf;
        x = xn;
        f = fnew;
        nf = nnew;
        if stalled && !sys.near_ideal_corners(&x, cfg.cusp_margin).is_empty() {
            drifting += 1;
            if drifting >= cfg.cusp_patience {
                let corners = sys.near_ideal_corners(&x, cfg.cusp_margin);
                return GeometricSolution::failed(sys, &x, nf, iter + 1, FailureReason::CuspSuspected { corners });
            }
        } else {
            drifting = 0;
        }
    }
    let reason = FailureReason::Diverged { detail: format!("no convergence in {} iterations", cfg.max_iterations) };
    GeometricSolution::failed(sys, &x, nf, cfg.max_iterations, drift_or(sys, &x, cfg, reason))
}

fn drift_or(sys: &EquationSystem, x: &[f64], cfg: &SolverConfig, reason: FailureReason) -> FailureReason {
    let corners = sys.near_ideal_corners(x, cfg.cusp_margin);
    if corners.is_empty() {
        reason
    } else {
        FailureReason::CuspSuspected { corners }
    }
}

/// Solves in the compact regime and, when that fails and the boundary has
/// torus components, makes them cusps and solves again starting from the
/// last compact iterate (then from the default start).
pub fn solve_with_cusp_handoff(t: &Triangulation, cfg: &SolverConfig) -> GeometricSolution {
    let compact = match build_system(t, Regime::Compact) {
        Ok(s) => s,
        Err(e) => {
            return GeometricSolution {
                shapes: Vec::new(),
                log_scales: Vec::new(),
                residual_norm: f64::INFINITY,
                regime: Regime::Compact,
                iterations: 0,
                classification: Classification::Failed { reason: FailureReason::System { detail: e.to_string() } },
            }
        }
    };
    let first = newton_solve(&compact, &default_init(&compact), cfg);
    if first.is_success() {
        return first;
    }
    let compact_reason = match &first.classification {
        Classification::Failed { reason } => reason.clone(),
        _ => unreachable!(),
    };
    let tori = compact.boundary.cusp_candidates();
    if tori.is_empty() {
        return first;
    }
    let sys = build_system(t, Regime::Cusped { cusps: tori }).expect("torus components are valid cusps");
    let mut warm = sys.pack(&first.shapes, None);
    retract(&sys, &mut warm);
    fit_log_scales(&sys, &mut warm);
    let mut attempt = newton_solve(&sys, &warm, cfg);
    if !attempt.is_success() {
        let cold = newton_solve(&sys, &default_init(&sys), cfg);
        if cold.is_success() || cold.residual_norm < attempt.residual_norm {
            attempt = cold;
        }
    }
    if attempt.is_success() {
        return attempt;
    }
    let cusped_reason = match &attempt.classification {
        Classification::Failed { reason } => reason.clone(),
        _ => unreachable!(),
    };
    attempt.classification = Classification::Failed {
        reason: FailureReason::CuspedAlsoFailed { compact: Box::new(compact_reason), cusped: Box::new(cusped_reason) },
    };
    attempt
}

pub fn solve(t: &Triangulation) -> GeometricSolution {
    solve_with_cusp_handoff(t, &SolverConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_thresholds() {
        let c = SolverConfig::default();
        assert_eq!(c.max_iterations, 50);
        assert_eq!(c.tolerance, 1e-11);
    }
}
