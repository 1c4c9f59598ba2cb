//! Enumeration of candidate minimal orientable ideal triangulations.
//!
//! For each face-pairing graph and each choice of tetrahedron orientation
//! signs, a depth-first search assigns the gluing permutations face by face,
//! always extending the lowest unglued face. Only permutations of the parity
//! forced by the signs are tried, so every leaf is oriented. Edge classes
//! that close up during the search are checked at once. Surviving leaves are
//! deduplicated by unoriented isomorphism signature and emitted sorted.

mod filters;
mod pairing;

pub use filters::{filter_boundary, filter_free_group, filter_low_valence, filter_manifold, FilterName, Verdict};
pub use pairing::{face_pairing_graphs, FacePairingGraph};

use crate::par::{self, Parallelism};
use crate::perm::S4;
use crate::triangulation::{
    compute_edge_classes, iso_signature, write_triangulation, Gluing, IsoSignature, Triangulation, EDGE_VERTICES,
};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub n: usize,
    pub filters: BTreeSet<FilterName>,
    pub parallelism: Parallelism,
    pub budget_nodes: Option<u64>,
    pub budget_time: Option<Duration>,
}

impl EnumerationConfig {
    pub fn new(n: usize) -> Self {
        EnumerationConfig {
            n,
            filters: FilterName::ALL.into_iter().collect(),
            parallelism: Parallelism::default(),
            budget_nodes: None,
            budget_time: None,
        }
    }

    pub fn without(mut self, filter: FilterName) -> Self {
        self.filters.remove(&filter);
        self
    }

    fn has(&self, f: FilterName) -> bool {
        self.filters.contains(&f)
    }

    /// Hash of everything that determines the output stream (not the worker
    /// count).
    pub fn config_hash(&self) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            n: usize,
            filters: Vec<&'a str>,
            budget_nodes: Option<u64>,
            budget_ms: Option<u128>,
        }
        let key = Key {
            n: self.n,
            filters: self.filters.iter().map(|f| f.as_str()).collect(),
            budget_nodes: self.budget_nodes,
            budget_ms: self.budget_time.map(|d| d.as_millis()),
        };
        let digest = Sha256::digest(serde_json::to_vec(&key).expect("serializable"));
        hex::encode(&digest[..8])
    }
}

#[derive(Clone, Debug)]
pub struct CandidateStream {
    pub config_hash: String,
    pub n: usize,
    pub complete: bool,
    pub nodes: u64,
    /// Leaf discards per reason.
    pub discards: BTreeMap<&'static str, u64>,
    /// Canonically labelled candidates, sorted by signature.
    pub candidates: Vec<(IsoSignature, Triangulation)>,
}

impl CandidateStream {
    pub fn header(&self) -> String {
        format!(
            "# candidates n={} config={} complete={} count={} nodes={}",
            self.n,
            self.config_hash,
            self.complete,
            self.candidates.len(),
            self.nodes
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for (sig, t) in &self.candidates {
            out.push_str(&format!("# sig {sig}\n"));
            out.push_str(&write_triangulation(t));
        }
        out
    }
}

/// Reads `key=value` fields from the header line written by
/// [`CandidateStream::to_text`].
pub fn parse_header(text: &str) -> Option<BTreeMap<String, String>> {
    let line = text.lines().find(|l| l.starts_with("# candidates"))?;
    Some(
        line.split_whitespace()
            .filter_map(|tok| tok.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
            .collect(),
    )
}

struct Search<'a> {
    cfg: &'a EnumerationConfig,
    pairs: Vec<((usize, usize), (usize, usize))>,
    signs: Vec<i32>,
    gluings: Vec<[Option<Gluing>; 4]>,
    nodes: u64,
    truncated: bool,
    deadline: Option<Instant>,
    found: Vec<IsoSignature>,
    discards: BTreeMap<&'static str, u64>,
}

impl Search<'_> {
    fn run(&mut self, k: usize) {
        if self.truncated {
            return;
        }
        self.nodes += 1;
        if self.cfg.budget_nodes.is_some_and(|b| self.nodes > b)
            || (self.nodes % 4096 == 0 && self.deadline.is_some_and(|d| Instant::now() > d))
        {
            self.truncated = true;
            return;
        }
        if k == self.pairs.len() {
            self.leaf();
            return;
        }
        let ((t, f), (u, g)) = self.pairs[k];
        let want = -self.signs[t] * self.signs[u];
        for p in S4 {
            if p.apply(f) != g || p.sign() != want {
                continue;
            }
            self.gluings[t][f] = Some(Gluing { tet: u, face: g, perm: p });
            self.gluings[u][g] = Some(Gluing { tet: t, face: f, perm: p.inverse() });
            if !self.prunes_at(t, f) {
                self.run(k + 1);
            }
            self.gluings[t][f] = None;
            self.gluings[u][g] = None;
        }
    }

    /// Checks the edge classes through face `(t, f)` that have just closed.
    fn prunes_at(&self, t: usize, f: usize) -> bool {
        let low = self.cfg.has(FilterName::LowValence);
        let manifold = self.cfg.has(FilterName::Manifold);
        if !low && !manifold {
            return false;
        }
        for &(a, b) in &EDGE_VERTICES {
            if a == f || b == f {
                continue;
            }
            let Some((valence, distinct, reversed)) = self.closed_class(t, a, b) else { continue };
            if reversed && manifold {
                return true;
            }
            if !reversed && low && matches!((valence, distinct), (1, _) | (2, 2) | (3, 3)) {
                return true;
            }
        }
        false
    }

    fn closed_class(&self, tet: usize, a: usize, b: usize) -> Option<(usize, usize, bool)> {
        let rest: Vec<usize> = (0..4).filter(|&v| v != a && v != b).collect();
        let start = (tet, [a, b, rest[0], rest[1]]);
        let mut cur = start;
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let mut reversed = false;
        loop {
            let (t, [a, b, c, d]) = cur;
            let slot = (t, crate::triangulation::edge_index(a, b));
            if seen.contains(&slot) {
                reversed = true;
            }
            seen.push(slot);
            let g = self.gluings[t][d]?;
            let p = g.perm;
            cur = (g.tet, [p.apply(a), p.apply(b), p.apply(d), p.apply(c)]);
            if cur == start {
                break;
            }
            if seen.len() > 6 * self.gluings.len() * 2 {
                return None;
            }
        }
        let mut tets: Vec<usize> = seen.iter().map(|s| s.0).collect();
        tets.sort_unstable();
        tets.dedup();
        Some((seen.len(), tets.len(), reversed))
    }

    fn leaf(&mut self) {
        let rows = self.gluings.iter().map(|r| r.map(|g| g.expect("complete"))).collect();
        let t = Triangulation::new(rows).expect("search builds valid gluings");
        let edges = compute_edge_classes(&t);
        let checks: [(FilterName, &dyn Fn() -> Verdict); 4] = [
            (FilterName::Manifold, &|| filter_manifold(&edges)),
            (FilterName::LowValence, &|| filters::low_valence_on(&edges)),
            (FilterName::Boundary, &|| if edges.has_self_reversed_edge() { Verdict::Keep } else { filter_boundary(&t) }),
            (FilterName::FreeGroup, &|| filter_free_group(&t)),
        ];
        for (name, check) in checks {
            if self.cfg.has(name) {
                if let Verdict::Discard { reason, .. } = check() {
                    *self.discards.entry(reason).or_default() += 1;
                    return;
                }
            }
        }
        self.found.push(iso_signature(&t, false));
    }
}

struct TaskResult {
    found: Vec<IsoSignature>,
    nodes: u64,
    truncated: bool,
    discards: BTreeMap<&'static str, u64>,
}

fn run_task(cfg: &EnumerationConfig, graph: &FacePairingGraph, signs: Vec<i32>, deadline: Option<Instant>) -> TaskResult {
    let n = graph.node_count();
    let mut s = Search {
        cfg,
        pairs: graph.face_pairs(),
        signs,
        gluings: vec![[None; 4]; n],
        nodes: 0,
        truncated: false,
        deadline,
        found: Vec::new(),
        discards: BTreeMap::new(),
    };
    s.run(0);
    let mut found = s.found;
    found.sort_unstable();
    found.dedup();
    TaskResult { found, nodes: s.nodes, truncated: s.truncated, discards: s.discards }
}

pub fn enumerate_candidates(cfg: &EnumerationConfig) -> CandidateStream {
    assert!(cfg.n >= 1, "tetrahedron count must be positive");
    let deadline = cfg.budget_time.map(|d| Instant::now() + d);
    let graphs = face_pairing_graphs(cfg.n);
    let mut tasks = Vec::new();
    for g in &graphs {
        for mask in 0..(1u32 << (cfg.n - 1)) {
            let signs: Vec<i32> =
                (0..cfg.n).map(|i| if i > 0 && mask & (1 << (i - 1)) != 0 { -1 } else { 1 }).collect();
            tasks.push((g, signs));
        }
    }
    let results = par::map(cfg.parallelism, &tasks, |(g, signs)| run_task(cfg, g, signs.clone(), deadline));
    let mut all = BTreeSet::new();
    let mut nodes = 0;
    let mut truncated = false;
    let mut discards = BTreeMap::new();
    for r in results {
        nodes += r.nodes;
        truncated |= r.truncated;
        for (k, v) in r.discards {
            *discards.entry(k).or_default() += v;
        }
        all.extend(r.found);
    }
    if cfg.budget_nodes.is_some_and(|b| nodes > b) {
        truncated = true;
    }
    let candidates = all
        .into_iter()
        .map(|sig| {
            let t = sig.to_triangulation().expect("signature encodes a triangulation");
            (sig, t)
        })
        .collect();
    CandidateStream { config_hash: cfg.config_hash(), n: cfg.n, complete: !truncated, nodes, discards, candidates }
}
