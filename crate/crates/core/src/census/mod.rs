//! The census pipeline: enumerate, solve, canonicalize, deduplicate.
//!
//! Every stage maps over its inputs in order (in parallel when enabled) and
//! the merge is a sequential pass over sorted data, so a run is a pure
//! function of its configuration.

pub mod hexfloat;
pub mod homology;
pub mod records;
pub mod report;

pub use homology::{compute_homology, in_known_family, truncated_homology, AbelianGroup};
pub use records::{shape_tag, CensusRecord, KojimaRecord, SolutionRecord, UnresolvedRecord};
pub use report::{histogram, Bucket, CensusReport, VolumeValue, VOLUME_TOLERANCE};

use crate::enumerate::{enumerate_candidates, CandidateStream, EnumerationConfig, FilterName};
use crate::kojima::{canonicalize_or_retry, CanonicalConfig, ManifoldId, RetryConfig};
use crate::par::{self, Parallelism};
use crate::solver::{solve_with_cusp_handoff, Classification};
use crate::triangulation::{compute_boundary, iso_signature, pachner_neighbours, IsoSignature, Triangulation};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::time::Duration;

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub filters: BTreeSet<FilterName>,
    pub budget_nodes: Option<u64>,
    pub budget_time: Option<Duration>,
    pub parallelism: Parallelism,
    pub canonical: CanonicalConfig,
    pub retry: RetryConfig,
    /// Moves explored from each unresolved candidate when grouping them.
    pub group_depth: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            filters: FilterName::ALL.into_iter().collect(),
            budget_nodes: None,
            budget_time: None,
            parallelism: Parallelism::default(),
            canonical: CanonicalConfig::default(),
            retry: RetryConfig::default(),
            group_depth: 2,
        }
    }
}

impl CensusConfig {
    pub fn enumeration(&self, n: usize) -> EnumerationConfig {
        EnumerationConfig {
            n,
            filters: self.filters.clone(),
            parallelism: self.parallelism,
            budget_nodes: self.budget_nodes,
            budget_time: self.budget_time,
        }
    }
}

/// Everything produced for one complexity.
#[derive(Clone, Debug)]
pub struct CensusRun {
    pub n: usize,
    /// All enumerations (this one and the lower ones) were complete.
    pub certified: bool,
    pub stream: CandidateStream,
    pub solutions: Vec<SolutionRecord>,
    pub kojima: Vec<KojimaRecord>,
    pub records: Vec<CensusRecord>,
    pub unresolved: Vec<UnresolvedRecord>,
    /// Ids found among the candidates of every lower complexity.
    pub lower_ids: BTreeSet<ManifoldId>,
    /// Manifolds of this run's candidates whose id is in `lower_ids`.
    pub dropped: Vec<ManifoldId>,
    pub report: CensusReport,
}

/// Solves every candidate.
pub fn solve_candidates(candidates: &[(IsoSignature, Triangulation)], cfg: &CensusConfig) -> Vec<SolutionRecord> {
    par::map(cfg.parallelism, candidates, |(sig, t)| {
        SolutionRecord::new(sig, &solve_with_cusp_handoff(t, &cfg.canonical.solver))
    })
}

/// Canonicalizes every solution, retrying through nearby triangulations.
pub fn canonicalize_solutions(solutions: &[SolutionRecord], cfg: &CensusConfig) -> Vec<KojimaRecord> {
    par::map(cfg.parallelism, solutions, |rec| match rec.restore() {
        Ok((t, sol)) => match canonicalize_or_retry(&t, &sol, &cfg.canonical, &cfg.retry) {
            Ok(k) => KojimaRecord::success(&rec.signature, &k),
            Err(e) => KojimaRecord::failure(&rec.signature, e.to_string()),
        },
        Err(e) => KojimaRecord::failure(&rec.signature, e),
    })
}

/// Signatures reachable from `t` in at most `depth` moves through
/// triangulations of at most `max_tets` tetrahedra, and the least
/// tetrahedron count met.
fn neighbourhood(t: &Triangulation, depth: usize, max_tets: usize) -> (Vec<IsoSignature>, usize) {
    let start = iso_signature(t, false);
    let mut seen = HashSet::from([start.clone()]);
    let mut order = vec![start];
    let mut fewest = t.tet_count();
    let mut queue = VecDeque::from([(t.clone(), 0)]);
    while let Some((u, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for w in pachner_neighbours(&u) {
            if w.tet_count() > max_tets {
                continue;
            }
            let s = iso_signature(&w, false);
            if seen.insert(s.clone()) {
                fewest = fewest.min(w.tet_count());
                order.push(s);
                queue.push_back((w, d + 1));
            }
        }
    }
    (order, fewest)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Groups triangulations whose neighbourhoods meet, numbering groups by
/// first member; also reports which groups reach fewer tetrahedra.
fn group_by_moves(items: &[Triangulation], depth: usize, par: Parallelism) -> (Vec<usize>, Vec<bool>) {
    let hoods = par::map(par, items, |t| neighbourhood(t, depth, t.tet_count() + 1));
    let mut parent: Vec<usize> = (0..items.len()).collect();
    let mut owner: HashMap<&IsoSignature, usize> = HashMap::new();
    for (i, (sigs, _)) in hoods.iter().enumerate() {
        for s in sigs {
            match owner.get(s) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                None => {
                    owner.insert(s, i);
                }
            }
        }
    }
    let mut number = HashMap::new();
    let mut group = vec![0; items.len()];
    for (i, g) in group.iter_mut().enumerate() {
        let r = find(&mut parent, i);
        let next = number.len();
        *g = *number.entry(r).or_insert(next);
    }
    let mut reducible = vec![false; number.len()];
    for (i, (_, fewest)) in hoods.iter().enumerate() {
        if *fewest < items[i].tet_count() {
            reducible[group[i]] = true;
        }
    }
    let flags = group.iter().map(|&g| reducible[g]).collect();
    (group, flags)
}

/// Distinct ids among the resolved candidates of complexity `n`, ignoring
/// lower complexities, with the completeness of the enumeration.
struct Level {
    stream: CandidateStream,
    solutions: Vec<SolutionRecord>,
    kojima: Vec<KojimaRecord>,
}

fn run_level(n: usize, cfg: &CensusConfig) -> Level {
    let stream = enumerate_candidates(&cfg.enumeration(n));
    let solutions = solve_candidates(&stream.candidates, cfg);
    let kojima = canonicalize_solutions(&solutions, cfg);
    Level { stream, solutions, kojima }
}

fn level_ids(level: &Level) -> impl Iterator<Item = ManifoldId> + '_ {
    level.kojima.iter().filter(|k| k.is_resolved()).filter_map(|k| k.manifold_id.clone())
}

/// The census of complexity `n`, with every lower complexity run first for
/// the minimality back-check.
pub fn run_census(n: usize, cfg: &CensusConfig) -> CensusRun {
    let mut lower_ids = BTreeSet::new();
    let mut certified = true;
    for m in 1..n {
        let level = run_level(m, cfg);
        certified &= level.stream.complete;
        lower_ids.extend(level_ids(&level));
    }
    let level = run_level(n, cfg);
    certified &= level.stream.complete;
    assemble(n, level, lower_ids, certified, cfg)
}

fn assemble(n: usize, level: Level, lower_ids: BTreeSet<ManifoldId>, certified: bool, cfg: &CensusConfig) -> CensusRun {
    let Level { stream, solutions, kojima } = level;
    let by_sig: HashMap<String, &Triangulation> =
        stream.candidates.iter().map(|(s, t)| (s.to_string(), t)).collect();

    let mut manifolds: BTreeMap<ManifoldId, Vec<usize>> = BTreeMap::new();
    let mut failed = Vec::new();
    for (i, k) in kojima.iter().enumerate() {
        match (&k.manifold_id, k.converged) {
            (Some(id), true) => manifolds.entry(id.clone()).or_default().push(i),
            _ => failed.push(i),
        }
    }
    let mut dropped = Vec::new();
    let mut records = Vec::new();
    for (id, members) in manifolds {
        if lower_ids.contains(&id) {
            dropped.push(id);
            continue;
        }
        // Members are in candidate order, which is signature order.
        let first = &kojima[members[0]];
        let t = by_sig[&first.input_signature];
        let volume = first.volume.expect("resolved records carry a volume");
        records.push(CensusRecord {
            id: id.to_string(),
            complexity: n,
            boundary: compute_boundary(t).genus_vector(),
            cusps: id.cusps,
            volume,
            volume_hex: volume,
            block_shapes: shape_tag(&first.block_shapes),
            homology: compute_homology(t),
            representative: first.input_signature.clone(),
            all_triangulations: members.len(),
            manifold_id: id,
        });
    }
    records.sort_by(|a, b| a.volume.total_cmp(&b.volume).then_with(|| a.id.cmp(&b.id)));

    let failed_tris: Vec<Triangulation> = failed.iter().map(|&i| by_sig[&kojima[i].input_signature].clone()).collect();
    let (groups, reducible) = group_by_moves(&failed_tris, cfg.group_depth, cfg.parallelism);
    let unresolved = failed
        .iter()
        .enumerate()
        .map(|(j, &i)| {
            let s = &solutions[i];
            let k = &kojima[i];
            let (stage, diagnostic) = match &s.classification {
                Classification::Failed { reason } => ("solve", reason.summary()),
                _ => ("canonical", k.error.clone().unwrap_or_else(|| k.flags.join("; "))),
            };
            UnresolvedRecord {
                signature: s.signature.clone(),
                stage: stage.into(),
                diagnostic,
                residual: s.residual,
                volume: s.volume,
                group: groups[j],
                reducible: reducible[j],
            }
        })
        .collect::<Vec<_>>();

    let report = CensusReport::new(n, certified, stream.candidates.len(), &records, dropped.len(), &unresolved);
    CensusRun { n, certified, stream, solutions, kojima, records, unresolved, lower_ids, dropped, report }
}

/// One JSON object per line.
pub fn to_jsonl<T: serde::Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for it in items {
        out.push_str(&serde_json::to_string(it).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn from_jsonl<T: serde::de::DeserializeOwned>(text: &str) -> Result<Vec<T>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}
