use tetcensus::census::{from_jsonl, run_census, to_jsonl, CensusConfig, CensusRecord, KojimaRecord, SolutionRecord};
use tetcensus::par::Parallelism;

#[test]
fn complexity_two() {
    let run = run_census(2, &CensusConfig::default());
    assert!(run.certified);
    assert_eq!(run.records.len(), 8);
    assert!(run.unresolved.is_empty());
    for r in &run.records {
        assert_eq!(r.boundary, [2]);
        assert_eq!(r.block_shapes, "tetrahedron x2");
        assert!((r.volume - 6.451990).abs() < 1e-6);
        assert_eq!(r.homology.to_string(), "Z^2");
    }
    let b = &run.report.buckets;
    assert_eq!(b.iter().map(|b| b.count).sum::<usize>(), run.records.len());
    for b in b {
        assert_eq!(b.histogram.iter().map(|v| v.multiplicity).sum::<usize>(), b.count);
    }
}

#[test]
fn records_survive_jsonl() {
    let run = run_census(2, &CensusConfig::default());
    let s: Vec<SolutionRecord> = from_jsonl(&to_jsonl(&run.solutions)).unwrap();
    assert_eq!(to_jsonl(&s), to_jsonl(&run.solutions));
    for (a, b) in s.iter().zip(&run.solutions) {
        assert!(a.angles.iter().zip(&b.angles).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
    let k: Vec<KojimaRecord> = from_jsonl(&to_jsonl(&run.kojima)).unwrap();
    assert_eq!(to_jsonl(&k), to_jsonl(&run.kojima));
    let c: Vec<CensusRecord> = from_jsonl(&to_jsonl(&run.records)).unwrap();
    assert_eq!(to_jsonl(&c), to_jsonl(&run.records));
}

#[test]
fn sequential_and_parallel_agree() {
    let seq = run_census(2, &CensusConfig { parallelism: Parallelism::Sequential, ..CensusConfig::default() });
    let par = run_census(2, &CensusConfig { parallelism: Parallelism::Auto, ..CensusConfig::default() });
    assert_eq!(seq.report.render(), par.report.render());
    assert_eq!(to_jsonl(&seq.records), to_jsonl(&par.records));
}

#[test]
fn budget_marks_run_uncertified() {
    let run = run_census(3, &CensusConfig { budget_nodes: Some(10), ..CensusConfig::default() });
    assert!(!run.certified);
    assert!(run.report.render().contains("UNCERTIFIED"));
}
