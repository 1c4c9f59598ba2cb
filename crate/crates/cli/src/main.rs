use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;
use tetcensus::census::{self, CensusConfig, KojimaRecord, SolutionRecord};
use tetcensus::enumerate::{enumerate_candidates, FilterName};
use tetcensus::geometry::{volume, TetShape};
use tetcensus::par::Parallelism;
use tetcensus::triangulation::{iso_signature, parse_triangulations};

#[derive(Parser)]
#[command(name = "census", about = "Census of hyperbolic 3-manifolds with geodesic boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Budget {
    /// Stop the enumeration after this many search nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Stop the enumeration after this many seconds.
    #[arg(long)]
    budget_seconds: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate candidate triangulations with n tetrahedra.
    Enumerate {
        #[arg(short)]
        n: usize,
        /// Disable a filter (manifold, low-valence, boundary, free-group).
        #[arg(long = "no-filter")]
        no_filter: Vec<FilterName>,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Solve the hyperbolicity equations for every triangulation in a file.
    Solve {
        #[arg(short)]
        i: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Canonical decompositions of solved triangulations.
    Canonical {
        #[arg(short)]
        i: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// The whole pipeline for complexity n.
    Run {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long = "no-filter")]
        no_filter: Vec<FilterName>,
        #[command(flatten)]
        budget: Budget,
        #[arg(short)]
        o: PathBuf,
    },
    /// Lengths, vertex sums and volume of one truncated tetrahedron.
    Shape {
        /// Six dihedral angles, for edges 01,02,03,12,13,23.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        angles: Vec<f64>,
    },
}

fn config(jobs: Option<usize>, no_filter: &[FilterName], budget: Option<&Budget>) -> CensusConfig {
    let mut cfg = CensusConfig { parallelism: Parallelism::from_jobs(jobs), ..CensusConfig::default() };
    for f in no_filter {
        cfg.filters.remove(f);
    }
    if let Some(b) = budget {
        cfg.budget_nodes = b.budget_nodes;
        cfg.budget_time = b.budget_seconds.map(Duration::from_secs);
    }
    cfg
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Enumerate { n, no_filter, budget, jobs, o } => {
            let cfg = config(jobs, &no_filter, Some(&budget));
            let stream = enumerate_candidates(&cfg.enumeration(n));
            write(&o, &stream.to_text())?;
            eprintln!("{}", stream.header());
        }
        Command::Solve { i, o, jobs } => {
            let cfg = config(jobs, &[], None);
            let blocks = parse_triangulations(&read(&i)?).with_context(|| format!("parsing {}", i.display()))?;
            let candidates: Vec<_> = blocks
                .iter()
                .map(|b| {
                    let sig = iso_signature(&b.triangulation, false);
                    let t = sig.to_triangulation().expect("signatures decode");
                    (sig, t)
                })
                .collect();
            let records = census::solve_candidates(&candidates, &cfg);
            let solved = records.iter().filter(|r| r.is_success()).count();
            write(&o, &census::to_jsonl(&records))?;
            eprintln!("solved {solved} of {}", records.len());
        }
        Command::Canonical { i, o, jobs } => {
            let cfg = config(jobs, &[], None);
            let solutions: Vec<SolutionRecord> =
                census::from_jsonl(&read(&i)?).map_err(anyhow::Error::msg).with_context(|| format!("parsing {}", i.display()))?;
            let records: Vec<KojimaRecord> = census::canonicalize_solutions(&solutions, &cfg);
            let ok = records.iter().filter(|r| r.is_resolved()).count();
            write(&o, &census::to_jsonl(&records))?;
            eprintln!("canonicalized {ok} of {}", records.len());
        }
        Command::Run { n, jobs, no_filter, budget, o } => {
            let cfg = config(jobs, &no_filter, Some(&budget));
            fs::create_dir_all(&o).with_context(|| format!("creating {}", o.display()))?;
            let run = census::run_census(n, &cfg);
            write(&o.join("candidates.tri"), &run.stream.to_text())?;
            write(&o.join("solutions.jsonl"), &census::to_jsonl(&run.solutions))?;
            write(&o.join("kojima.jsonl"), &census::to_jsonl(&run.kojima))?;
            write(&o.join("census.jsonl"), &census::to_jsonl(&run.records))?;
            write(&o.join("unresolved.jsonl"), &census::to_jsonl(&run.unresolved))?;
            write(&o.join("report.md"), &run.report.render())?;
            eprintln!(
                "complexity {n}: {} manifolds, {} unresolved candidates{}",
                run.records.len(),
                run.report.unresolved,
                if run.certified { "" } else { " (UNCERTIFIED)" }
            );
            if !run.certified {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Shape { angles } => {
            let a: [f64; 6] = angles.try_into().map_err(|_| anyhow::anyhow!("expected six angles"))?;
            let shape = TetShape::new(a)?;
            let kinds: Vec<String> = (0..4).map(|v| format!("{:?}", shape.vertex_kind(v)).to_lowercase()).collect();
            println!("vertex kinds: {}", kinds.join(" "));
            let sums = shape.vertex_sums();
            println!("vertex sums: {}", sums.map(|s| format!("{s:.12}")).join(" "));
            let lengths: Vec<String> = (0..6)
                .map(|e| shape.edge_length(e).map_or_else(|_| "inf".to_string(), |l| format!("{l:.12}")))
                .collect();
            println!("lengths: {}", lengths.join(" "));
            println!("volume: {:.12}", volume(&shape).volume);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    if std::env::var_os("CENSUS_SEED").is_some() {
        eprintln!("error: CENSUS_SEED is not supported; the pipeline has no random seed");
        return ExitCode::from(64);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
