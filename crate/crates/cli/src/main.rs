//! `wsheap`: trace replay, invariant audits, index-tree dumps, shortest
//! paths, benchmarks, and calibration over the working-set heap library.
//!
//! Exit status is nonzero iff an oracle mismatch, invariant violation, or
//! parse/I/O error occurred; all output except wall-clock columns is
//! deterministic given the flags and seed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use wsheap::calibrate;
use wsheap::counters::OpCounters;
use wsheap::graph::{self, Workload};
use wsheap::index_tree::IndexTree;
use wsheap::sssp::{self, HeapKind};
use wsheap::trace::{self, ReplayOptions};
use wsheap::Key;

#[derive(Parser)]
#[command(name = "wsheap", about = "Working-set heap tools", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a trace file against the naive oracle in lockstep.
    Trace {
        /// Trace file; `-` reads standard input.
        file: PathBuf,
        /// Audit structural invariants after every operation.
        #[arg(long)]
        audit: bool,
    },
    /// Generate a seeded mixed trace and audit every step.
    Audit {
        #[arg(long, default_value_t = 10_000)]
        ops: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dump the index tree for a given number of positions.
    EmitTree {
        /// Number of positions m.
        #[arg(long)]
        m: usize,
        /// Output CSV (`kind,k,j,lo,hi,children,depth`), one row per node,
        /// followed by a per-leaf `i,depth,max_path_children` table.
        #[arg(long)]
        out: PathBuf,
    },
    /// Single-source shortest paths on a DIMACS graph.
    Sssp {
        /// Graph file in DIMACS shortest-path format.
        #[arg(long)]
        graph: PathBuf,
        /// Source vertex (1-based, DIMACS numbering).
        #[arg(long, default_value_t = 1)]
        source: usize,
        #[arg(long, default_value_t = HeapKind::Workset)]
        heap: HeapKind,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare heap kinds on generated workloads.
    Bench {
        #[arg(long, default_value_t = Workload::Random)]
        workload: Workload,
        /// Instance sizes as `n:m` pairs, e.g. `256:2048`.
        #[arg(long, value_delimiter = ',', default_value = "256:2048")]
        sizes: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Report wall-clock as 0 so output is byte-identical across runs.
        #[arg(long)]
        deterministic: bool,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the empirical cost constants and write them as `name = value`.
    Calibrate {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Trace { file, audit } => cmd_trace(&file, audit),
        Command::Audit { ops, seed } => cmd_audit(ops, seed),
        Command::EmitTree { m, out } => cmd_emit_tree(m, &out),
        Command::Sssp { graph, source, heap, out } => cmd_sssp(&graph, source, heap, out.as_deref()),
        Command::Bench { workload, sizes, seed, deterministic, out } => {
            cmd_bench(workload, &sizes, seed, deterministic, out.as_deref())
        }
        Command::Calibrate { out } => cmd_calibrate(out.as_deref()),
    }
}

fn cmd_trace(file: &std::path::Path, audit: bool) -> Result<bool> {
    let text = if file.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?
    };
    let ops = trace::parse(&text).map_err(anyhow::Error::msg)?;
    let opts = ReplayOptions { audit_every_step: audit, check_pop_locality: audit };
    match trace::replay_lockstep(&ops, opts) {
        Ok(report) => {
            for line in &report.observables {
                println!("{line}");
            }
            for (index, e) in &report.op_errors {
                eprintln!("op {index}: {e}");
            }
            eprintln!("{} ops replayed, {} pops, oracle agreed on everything", report.ops, report.pops);
            Ok(report.op_errors.is_empty())
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}

fn cmd_audit(ops: usize, seed: u64) -> Result<bool> {
    let ops = trace::gen_mixed(ops, seed);
    let opts = ReplayOptions { audit_every_step: true, check_pop_locality: true };
    match trace::replay_lockstep(&ops, opts) {
        Ok(report) => {
            eprintln!(
                "{} ops audited clean (seed {seed}), {} pops, max pop bucket {}",
                report.ops, report.pops, report.max_pop_bucket
            );
            Ok(true)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}

fn cmd_emit_tree(m: usize, out: &std::path::Path) -> Result<bool> {
    if m == 0 {
        bail!("m must be at least 1");
    }
    let tree: IndexTree<Key> = IndexTree::with_len(m, OpCounters::new());
    let mut text = tree.dump_csv();
    text.push('\n');
    text.push_str("i,depth,max_path_children\n");
    for i in 1..=m {
        let _ = writeln!(text, "{i},{},{}", tree.depth(i), tree.max_children_on_path(i));
    }
    std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {} nodes for m={m} to {}", tree.dump().len(), out.display());
    Ok(true)
}

fn cmd_sssp(
    graph: &std::path::Path,
    source: usize,
    heap: HeapKind,
    out: Option<&std::path::Path>,
) -> Result<bool> {
    let g = graph::load_dimacs(graph).with_context(|| format!("loading {}", graph.display()))?;
    if source == 0 || source > g.n() {
        bail!("source {source} out of range 1..={}", g.n());
    }
    let res = sssp::dijkstra(&g, source - 1, heap);
    let mut text = String::from("vertex,distance,settle_rank\n");
    let mut rank = vec![None; g.n()];
    for (r, &v) in res.order.iter().enumerate() {
        rank[v] = Some(r);
    }
    for v in 0..g.n() {
        match (res.dist[v], rank[v]) {
            (Some(d), Some(r)) => {
                let _ = writeln!(text, "{},{d},{r}", v + 1);
            }
            _ => {
                let _ = writeln!(text, "{},inf,", v + 1);
            }
        }
    }
    emit(out, &text)?;
    eprintln!(
        "settled {} of {} vertices via {heap} heap: {} comparisons, {} pops, {} decrease-keys",
        res.order.len(),
        g.n(),
        res.stats.comparisons,
        res.stats.pops,
        res.stats.deckeys
    );
    Ok(true)
}

fn cmd_bench(
    workload: Workload,
    sizes: &[String],
    seed: u64,
    deterministic: bool,
    out: Option<&std::path::Path>,
) -> Result<bool> {
    let mut text = String::from(sssp::BENCH_CSV_HEADER);
    text.push('\n');
    for (k, size) in sizes.iter().enumerate() {
        let (n, m) = size
            .split_once(':')
            .and_then(|(n, m)| Some((n.parse().ok()?, m.parse().ok()?)))
            .with_context(|| format!("bad size `{size}`, expected `n:m`"))?;
        if n == 0 {
            bail!("infeasible workload: n must be at least 1");
        }
        if workload == Workload::Grid {
            let side = (n as f64).sqrt().round() as usize;
            if side * side != n {
                bail!("infeasible workload: grid needs a square vertex count, got {n}");
            }
        }
        for row in sssp::bench_rows(workload, n, m, seed + k as u64, deterministic) {
            text.push_str(&row);
            text.push('\n');
        }
    }
    emit(out, &text)?;
    Ok(true)
}

fn cmd_calibrate(out: Option<&std::path::Path>) -> Result<bool> {
    let c = calibrate::run_calibration();
    emit(out, &calibrate::to_kv(&c))?;
    Ok(true)
}

fn emit(out: Option<&std::path::Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
