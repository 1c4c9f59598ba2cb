//! Line-delimited records written by each pipeline stage.

use super::hexfloat::serde_hex;
use super::homology::AbelianGroup;
use crate::geometry::TetShape;
use crate::kojima::{FlipStep, KojimaDecomposition, ManifoldId};
use crate::solver::{Classification, GeometricSolution, Regime};
use crate::triangulation::{iso_signature, IsoSignature, Triangulation};
use serde::{Deserialize, Serialize};

/// One solved (or failed) candidate. Angles and log-scales refer to the
/// canonical labelling encoded by `signature`, six and four per tetrahedron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub signature: String,
    pub tets: usize,
    pub regime: Regime,
    pub classification: Classification,
    #[serde(with = "serde_hex::vec")]
    pub angles: Vec<f64>,
    #[serde(with = "serde_hex::vec")]
    pub log_scales: Vec<f64>,
    #[serde(with = "serde_hex")]
    pub residual: f64,
    pub iterations: usize,
    #[serde(with = "serde_hex")]
    pub volume_hex: f64,
    pub volume: Option<f64>,
}

impl SolutionRecord {
    pub fn new(signature: &IsoSignature, sol: &GeometricSolution) -> Self {
        let volume = sol.is_success().then(|| sol.volume());
        SolutionRecord {
            signature: signature.to_string(),
            tets: signature.tet_count(),
            regime: sol.regime.clone(),
            classification: sol.classification.clone(),
            angles: sol.angles(),
            log_scales: sol.log_scales.iter().flatten().copied().collect(),
            residual: sol.residual_norm,
            iterations: sol.iterations,
            volume_hex: volume.unwrap_or(f64::NAN),
            volume,
        }
    }

    pub fn is_success(&self) -> bool {
        !matches!(self.classification, Classification::Failed { .. })
    }

    /// The canonically labelled triangulation and the stored solution on it.
    pub fn restore(&self) -> Result<(Triangulation, GeometricSolution), String> {
        let sig: IsoSignature = self.signature.parse()?;
        let t = sig.to_triangulation()?;
        let n = t.tet_count();
        if self.angles.len() != 6 * n || !(self.log_scales.is_empty() || self.log_scales.len() == 4 * n) {
            return Err(format!("record for {} has {} angles and {} log-scales", self.signature, self.angles.len(), self.log_scales.len()));
        }
        let shapes = self.angles.chunks(6).map(|c| TetShape { angles: std::array::from_fn(|i| c[i]) }).collect();
        let log_scales = if self.log_scales.is_empty() {
            vec![[0.0; 4]; n]
        } else {
            self.log_scales.chunks(4).map(|c| std::array::from_fn(|i| c[i])).collect()
        };
        let sol = GeometricSolution {
            shapes,
            log_scales,
            residual_norm: self.residual,
            regime: self.regime.clone(),
            iterations: self.iterations,
            classification: self.classification.clone(),
        };
        Ok((t, sol))
    }
}

/// Outcome of canonicalizing one candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KojimaRecord {
    pub input_signature: String,
    pub flips: Vec<FlipStep>,
    /// Sorted block shape names.
    pub block_shapes: Vec<String>,
    pub decomposition_signature: Option<String>,
    pub converged: bool,
    pub manifold_id: Option<ManifoldId>,
    /// Short form of `manifold_id`.
    pub id: Option<String>,
    /// Signature of the triangulation subdividing the blocks.
    pub final_signature: Option<String>,
    #[serde(with = "serde_hex")]
    pub volume_hex: f64,
    pub volume: Option<f64>,
    pub flags: Vec<String>,
    pub error: Option<String>,
}

impl KojimaRecord {
    pub fn success(input: &str, k: &KojimaDecomposition) -> Self {
        let id = crate::kojima::manifold_id(k);
        let volume = k.solution.volume();
        KojimaRecord {
            input_signature: input.to_string(),
            flips: k.flips.clone(),
            block_shapes: k.shape_multiset(),
            decomposition_signature: Some(k.signature.clone()),
            converged: k.converged,
            id: Some(id.to_string()),
            manifold_id: Some(id),
            final_signature: Some(iso_signature(&k.triangulation, false).to_string()),
            volume_hex: volume,
            volume: Some(volume),
            flags: k.flags.clone(),
            error: None,
        }
    }

    pub fn failure(input: &str, error: String) -> Self {
        KojimaRecord {
            input_signature: input.to_string(),
            flips: Vec::new(),
            block_shapes: Vec::new(),
            decomposition_signature: None,
            converged: false,
            manifold_id: None,
            id: None,
            final_signature: None,
            volume_hex: f64::NAN,
            volume: None,
            flags: Vec::new(),
            error: Some(error),
        }
    }

    /// Usable for the census: canonicalized, converged and unflagged.
    pub fn is_resolved(&self) -> bool {
        self.manifold_id.is_some() && self.converged
    }
}

/// One manifold of the census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub id: String,
    pub manifold_id: ManifoldId,
    pub complexity: usize,
    /// Genera of the non-torus boundary components, decreasing.
    pub boundary: Vec<u32>,
    pub cusps: usize,
    pub volume: f64,
    #[serde(with = "serde_hex")]
    pub volume_hex: f64,
    /// Block shapes as in [`shape_tag`].
    pub block_shapes: String,
    pub homology: AbelianGroup,
    /// Smallest candidate signature giving this manifold.
    pub representative: String,
    /// Number of candidates giving this manifold.
    pub all_triangulations: usize,
}

/// Candidates that could not be placed in the census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnresolvedRecord {
    pub signature: String,
    /// `solve` or `canonical`.
    pub stage: String,
    pub diagnostic: String,
    #[serde(with = "serde_hex")]
    pub residual: f64,
    pub volume: Option<f64>,
    /// Unresolved candidates joined by short move sequences share a group.
    pub group: usize,
    /// The group contains a triangulation with fewer tetrahedra.
    pub reducible: bool,
}

/// `"tetrahedron x4"`, `"square-pyramid x2 + tetrahedron x1"`, ...
pub fn shape_tag(shapes: &[String]) -> String {
    let mut counts: std::collections::BTreeMap<&str, usize> = Default::default();
    for s in shapes {
        *counts.entry(s).or_default() += 1;
    }
    counts.iter().map(|(s, c)| format!("{s} x{c}")).collect::<Vec<_>>().join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve;

    #[test]
    fn solution_round_trip() {
        let stream = crate::enumerate::enumerate_candidates(&crate::enumerate::EnumerationConfig::new(2));
        let (sig, canon) = stream.candidates[0].clone();
        let sol = solve(&canon);
        let rec = SolutionRecord::new(&sig, &sol);
        let line = serde_json::to_string(&rec).unwrap();
        let back: SolutionRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back.angles.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), rec.angles.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        let (t2, sol2) = back.restore().unwrap();
        assert_eq!(t2, canon);
        assert_eq!(sol2.angles(), sol.angles());
    }

    #[test]
    fn tags() {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(shape_tag(&s(&["tetrahedron", "tetrahedron"])), "tetrahedron x2");
        assert_eq!(shape_tag(&s(&["tetrahedron", "octahedron"])), "octahedron x1 + tetrahedron x1");
    }
}
