//! Bucketed summary tables of a census.

use super::records::{CensusRecord, UnresolvedRecord};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Volumes closer than this are reported as one value. Solutions are
/// accurate to about 1e-10, and distinct census volumes can lie 2e-6 apart.
pub const VOLUME_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeValue {
    /// Mean of the grouped volumes.
    pub volume: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bucket {
    pub complexity: usize,
    pub cusps: usize,
    pub boundary: Vec<u32>,
    pub block_shapes: String,
    pub count: usize,
    pub histogram: Vec<VolumeValue>,
}

impl Bucket {
    pub fn min(&self) -> f64 {
        self.histogram.first().map_or(f64::NAN, |v| v.volume)
    }

    pub fn max(&self) -> f64 {
        self.histogram.last().map_or(f64::NAN, |v| v.volume)
    }

    pub fn value_count(&self) -> usize {
        self.histogram.len()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.histogram.iter().map(|v| v.multiplicity).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub complexity: usize,
    pub certified: bool,
    pub candidates: usize,
    pub total: usize,
    /// Manifolds found again at lower complexity and dropped.
    pub lower_complexity: usize,
    pub unresolved: usize,
    pub unresolved_groups: usize,
    /// Unresolved candidates whose group reaches fewer tetrahedra.
    pub reducible: usize,
    pub buckets: Vec<Bucket>,
}

/// Groups sorted volumes, starting a new value whenever the gap to the
/// first volume of the current value exceeds [`VOLUME_TOLERANCE`].
pub fn histogram(volumes: &[f64]) -> Vec<VolumeValue> {
    let mut v = volumes.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((start, group)) if x - *start <= VOLUME_TOLERANCE => group.push(x),
            _ => out.push((x, vec![x])),
        }
    }
    out.into_iter()
        .map(|(_, g)| VolumeValue { volume: g.iter().sum::<f64>() / g.len() as f64, multiplicity: g.len() })
        .collect()
}

impl CensusReport {
    pub fn new(
        complexity: usize,
        certified: bool,
        candidates: usize,
        records: &[CensusRecord],
        lower_complexity: usize,
        unresolved: &[UnresolvedRecord],
    ) -> Self {
        let mut groups: BTreeMap<(usize, Vec<u32>, String), Vec<f64>> = BTreeMap::new();
        for r in records {
            groups.entry((r.cusps, r.boundary.clone(), r.block_shapes.clone())).or_default().push(r.volume);
        }
        let buckets = groups
            .into_iter()
            .map(|((cusps, boundary, block_shapes), vols)| Bucket {
                complexity,
                cusps,
                boundary,
                block_shapes,
                count: vols.len(),
                histogram: histogram(&vols),
            })
            .collect();
        let open: Vec<&UnresolvedRecord> = unresolved.iter().filter(|u| !u.reducible).collect();
        let mut group_ids: Vec<usize> = open.iter().map(|u| u.group).collect();
        group_ids.sort_unstable();
        group_ids.dedup();
        CensusReport {
            complexity,
            certified,
            candidates,
            total: records.len(),
            lower_complexity,
            unresolved: open.len(),
            unresolved_groups: group_ids.len(),
            reducible: unresolved.len() - open.len(),
            buckets,
        }
    }

    pub fn bucket(&self, cusps: usize, boundary: &[u32], block_shapes: &str) -> Option<&Bucket> {
        self.buckets.iter().find(|b| b.cusps == cusps && b.boundary == boundary && b.block_shapes == block_shapes)
    }

    /// Records matching `pred`, pooled across buckets.
    pub fn pooled(&self, pred: impl Fn(&Bucket) -> bool) -> Vec<VolumeValue> {
        let mut vols = Vec::new();
        for b in self.buckets.iter().filter(|b| pred(b)) {
            for v in &b.histogram {
                vols.extend(std::iter::repeat_n(v.volume, v.multiplicity));
            }
        }
        histogram(&vols)
    }

    /// Markdown rendering; identical input gives identical bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Census of complexity {}\n", self.complexity);
        if !self.certified {
            let _ = writeln!(out, "**UNCERTIFIED**: the enumeration stopped early, so counts are lower bounds.\n");
        }
        let _ = writeln!(out, "- candidates: {}", self.candidates);
        let _ = writeln!(out, "- manifolds: {}", self.total);
        let _ = writeln!(out, "- dropped as lower complexity: {}", self.lower_complexity);
        let _ = writeln!(out, "- unresolved candidates: {} in {} move classes", self.unresolved, self.unresolved_groups);
        let _ = writeln!(out, "- unresolved candidates reaching fewer tetrahedra: {}\n", self.reducible);
        let _ = writeln!(out, "| cusps | boundary genera | blocks | manifolds | values | min | max | max mult. |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|---|");
        for b in &self.buckets {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {:.6} | {:.6} | {} |",
                b.cusps,
                genera(&b.boundary),
                b.block_shapes,
                b.count,
                b.value_count(),
                b.min(),
                b.max(),
                b.max_multiplicity()
            );
        }
        for b in &self.buckets {
            let _ = writeln!(out, "\n## cusps {}, boundary genera {}, {}\n", b.cusps, genera(&b.boundary), b.block_shapes);
            let _ = writeln!(out, "| volume | manifolds |");
            let _ = writeln!(out, "|---|---|");
            for v in &b.histogram {
                let _ = writeln!(out, "| {:.6} | {} |", v.volume, v.multiplicity);
            }
        }
        out
    }
}

fn genera(g: &[u32]) -> String {
    if g.is_empty() {
        "-".into()
    } else {
        g.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping_uses_tolerance() {
        let h = histogram(&[1.0, 1.00000004, 2.0, 1.00000008, 3.0]);
        assert_eq!(h.iter().map(|v| v.multiplicity).collect::<Vec<_>>(), vec![3, 1, 1]);
        let h = histogram(&[1.0, 1.000002]);
        assert_eq!(h.len(), 2);
    }
}
