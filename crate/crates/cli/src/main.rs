//! `tempoflow`: command-line front end for temporal-flow computation.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal
//! invariant violation.

mod bench;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use tempoflow_core::analysis::{greedy_soluble, same_timestamp_relay_count};
use tempoflow_core::extract::{extract_seed_pair, extract_subgraphs, ExtractBounds};
use tempoflow_core::greedy::greedy_flow_traced;
use tempoflow_core::instance::normalize;
use tempoflow_core::maxflow::{build_lp, emit_cplex_lp, max_flow, Strategy};
use tempoflow_core::parse::Format;
use tempoflow_core::patterns::{
    enumerate_gb, enumerate_nonrigid, enumerate_pb, instance_flow, precompute_paths, Coverage,
    Pattern, PathTable, RelaxedPattern,
};
use tempoflow_core::{FlowInstance, GraphError, Quantity};

use crate::io::{load_graph, CliError};

#[derive(Parser)]
#[command(name = "tempoflow", version, about = "Flow computation in temporal interaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Interaction file (`-` for stdin): one record per line,
    /// `src dst timestamp quantity`.
    file: String,
    /// Input record format.
    #[arg(long, default_value = "tsv")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an interaction file and emit it in canonical TSV order.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        /// Keep only interactions with T0 <= t <= T1.
        #[arg(long, num_args = 2, value_names = ["T0", "T1"])]
        window: Option<Vec<i64>>,
    },
    /// Enumerate seed-based subgraph instances (cycles through each seed).
    Extract {
        #[command(flatten)]
        input: InputArgs,
        /// Cycle hop bound (2..=4).
        #[arg(long)]
        hops: usize,
        /// Discard instances with fewer interactions.
        #[arg(long = "min-int", default_value_t = 1)]
        min_int: usize,
        /// Discard instances with more interactions.
        #[arg(long = "max-int", default_value_t = 10_000)]
        max_int: usize,
        /// Extract the non-cyclic SOURCE -> SINK path union instead of
        /// per-seed cycles (requires --source).
        #[arg(long, requires = "source")]
        sink: Option<String>,
        /// Source vertex for non-cyclic extraction.
        #[arg(long, requires = "sink")]
        source: Option<String>,
    },
    /// Compute the flow from a source to a sink.
    Flow {
        #[command(flatten)]
        input: InputArgs,
        /// Source vertex name.
        #[arg(long)]
        source: String,
        /// Sink vertex name.
        #[arg(long)]
        sink: String,
        /// greedy, lp, pre, or presim.
        #[arg(long)]
        method: String,
        /// Print the per-interaction buffer trace (greedy only).
        #[arg(long)]
        trace: bool,
        /// Write the model in CPLEX LP format before solving.
        #[arg(long = "emit-lp", value_name = "FILE")]
        emit_lp: Option<PathBuf>,
    },
    /// Precompute a path table for pattern enumeration.
    Precompute {
        #[command(flatten)]
        input: InputArgs,
        /// Path hop length.
        #[arg(long)]
        hops: usize,
        /// Record cycles (first vertex == last) instead of open paths.
        #[arg(long)]
        cyclic: bool,
        /// Directory the table file is written into.
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate pattern instances and their flows.
    Patterns {
        #[command(flatten)]
        input: InputArgs,
        /// Pattern file: one edge per line, `token -> token`.
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// gb (graph browsing) or pb (path-table join).
        #[arg(long, default_value = "gb")]
        method: String,
        /// Directory of precomputed path tables.
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Nonrigid mode: report anchors of at least N parallel cycles.
        #[arg(long = "min-paths")]
        min_paths: Option<usize>,
        /// Cycle hop length for nonrigid mode.
        #[arg(long, default_value_t = 2)]
        hops: usize,
        /// Print at most N instances.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Benchmark the flow methods over extracted or synthetic instances.
    Bench {
        /// Interaction file to extract benchmark instances from.
        file: Option<String>,
        #[arg(long, default_value = "tsv")]
        format: String,
        /// Worker threads for instance-parallel execution.
        #[arg(long)]
        jobs: Option<usize>,
        /// Base RNG seed for synthetic generation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Synthetic batch `vertices,edges,interactions,class,count`,
        /// e.g. `20,30,120,c,50`.
        #[arg(long)]
        synthetic: Option<String>,
        /// Timing repetitions per instance and method.
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version paths are successes, everything else is
            // a usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse_format(s: &str) -> Result<Format, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest { input, window } => {
            let format = parse_format(&input.format)?;
            let window = window.map(|w| (w[0], w[1]));
            let g = load_graph(&input.file, format, window)?;
            let mut out = std::io::stdout().lock();
            tempoflow_core::parse::serialize(&g, &mut out)
                .map_err(|e| CliError::Data(e.to_string()))?;
            eprintln!(
                "{} vertices, {} edges, {} interactions",
                g.vertex_count(),
                g.edge_count(),
                g.interaction_count()
            );
            Ok(())
        }
        Command::Extract {
            input,
            hops,
            min_int,
            max_int,
            sink,
            source,
        } => {
            if !(2..=4).contains(&hops) {
                return Err(CliError::Usage("--hops must be between 2 and 4".into()));
            }
            let g = load_graph(&input.file, parse_format(&input.format)?, None)?;
            let bounds = ExtractBounds {
                min_interactions: min_int,
                max_interactions: max_int,
            };
            let named = |name: &str| {
                g.lookup(name)
                    .ok_or_else(|| CliError::Data(format!("unknown vertex `{name}`")))
            };
            let instances: Vec<(String, FlowInstance)> = match (source, sink) {
                (Some(s), Some(t)) => extract_seed_pair(&g, named(&s)?, named(&t)?, hops, bounds)?
                    .map(|inst| (format!("{s}->{t}"), inst))
                    .into_iter()
                    .collect(),
                _ => extract_subgraphs(&g, hops, bounds)?
                    .into_iter()
                    .map(|(seed, inst)| (g.name(seed).to_string(), inst))
                    .collect(),
            };
            println!("seed\tvertices\tedges\tinteractions");
            for (seed, inst) in &instances {
                println!(
                    "{seed}\t{}\t{}\t{}",
                    inst.graph.vertex_count(),
                    inst.graph.edge_count(),
                    inst.interaction_count
                );
            }
            eprintln!("{} instances", instances.len());
            Ok(())
        }
        Command::Flow {
            input,
            source,
            sink,
            method,
            trace,
            emit_lp,
        } => cmd_flow(input, &source, &sink, &method, trace, emit_lp),
        Command::Precompute {
            input,
            hops,
            cyclic,
            out,
        } => {
            if hops < 1 {
                return Err(CliError::Usage("--hops must be at least 1".into()));
            }
            let g = load_graph(&input.file, parse_format(&input.format)?, None)?;
            let table = precompute_paths(&g, hops, cyclic);
            std::fs::create_dir_all(&out).map_err(|e| CliError::Data(e.to_string()))?;
            let kind = if cyclic { "cyclic" } else { "open" };
            let path = out.join(format!("paths-k{hops}-{kind}.tbl"));
            table.save(&path)?;
            println!("{} rows -> {}", table.rows.len(), path.display());
            Ok(())
        }
        Command::Patterns {
            input,
            pattern,
            method,
            tables,
            min_paths,
            hops,
            limit,
        } => cmd_patterns(input, pattern, &method, tables, min_paths, hops, limit),
        Command::Bench {
            file,
            format,
            jobs,
            seed,
            synthetic,
            reps,
        } => bench::cmd_bench(file, parse_format(&format)?, jobs, seed, synthetic, reps),
    }
}

fn cmd_flow(
    input: InputArgs,
    source: &str,
    sink: &str,
    method: &str,
    trace: bool,
    emit_lp: Option<PathBuf>,
) -> Result<(), CliError> {
    let g = load_graph(&input.file, parse_format(&input.format)?, None)?;
    let find = |name: &str| {
        g.lookup(name)
            .ok_or_else(|| CliError::Data(format!("unknown vertex `{name}`")))
    };
    let srcs = [find(source)?].into_iter().collect();
    let snks = [find(sink)?].into_iter().collect();
    let inst = normalize(&g, &srcs, &snks)?;

    if let Some(path) = emit_lp {
        let text = emit_cplex_lp(&build_lp(&inst));
        std::fs::write(&path, text).map_err(|e| CliError::Data(e.to_string()))?;
        eprintln!("wrote LP model to {}", path.display());
    }

    let start = Instant::now();
    let (res, report) = match method {
        "greedy" => {
            let relays = same_timestamp_relay_count(&inst);
            if relays > 0 {
                eprintln!(
                    "warning: {relays} same-timestamp relay(s); greedy may exceed the exact maximum here"
                );
            }
            let (res, rows) = greedy_flow_traced(&inst, trace);
            if trace {
                print_trace(&inst, &rows);
            }
            (res, Default::default())
        }
        _ => {
            if trace {
                return Err(CliError::Usage("--trace applies to --method greedy".into()));
            }
            let strategy: Strategy = method
                .parse()
                .map_err(|e: String| CliError::Usage(e))?;
            max_flow(&inst, strategy)?
        }
    };
    let runtime_us = start.elapsed().as_micros();
    println!(
        "value={} method={} reduction={{interactions:{},edges:{},vertices:{},chains:{}}} runtime_us={}",
        res.value,
        res.method,
        report.interactions_removed,
        report.edges_removed,
        report.vertices_removed,
        report.chains_reduced,
        runtime_us
    );
    Ok(())
}

fn print_trace(inst: &FlowInstance, rows: &[tempoflow_core::greedy::TraceRow]) {
    let g = &inst.graph;
    let watched: Vec<_> = rows
        .first()
        .map(|r| r.buffers.keys().copied().collect())
        .unwrap_or_default();
    let header: Vec<String> = watched.iter().map(|&v| format!("B_{}", g.name(v))).collect();
    println!("t\tedge\tq\tmoved\t{}", header.join("\t"));
    for r in rows {
        let buffers: Vec<String> = watched.iter().map(|v| r.buffers[v].to_string()).collect();
        println!(
            "{}\t{}->{}\t{}\t{}\t{}",
            r.t.0,
            g.name(r.src),
            g.name(r.dst),
            r.q,
            r.moved,
            buffers.join("\t")
        );
    }
}

fn load_tables(dir: &PathBuf) -> Result<Vec<PathTable>, CliError> {
    let mut tables = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Data(e.to_string()))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == "tbl").unwrap_or(false))
        .collect();
    paths.sort();
    for p in paths {
        tables.push(PathTable::load(&p)?);
    }
    if tables.is_empty() {
        return Err(CliError::Data(format!(
            "no path tables (*.tbl) in {}",
            dir.display()
        )));
    }
    Ok(tables)
}

fn cmd_patterns(
    input: InputArgs,
    pattern: Option<PathBuf>,
    method: &str,
    tables: Option<PathBuf>,
    min_paths: Option<usize>,
    hops: usize,
    limit: Option<usize>,
) -> Result<(), CliError> {
    let g = load_graph(&input.file, parse_format(&input.format)?, None)?;
    let limit = limit.unwrap_or(usize::MAX);

    if let Some(min_paths) = min_paths {
        // Nonrigid mode: anchors of parallel short cycles.
        if min_paths < 1 {
            return Err(CliError::Usage("--min-paths must be at least 1".into()));
        }
        let dir = tables
            .ok_or_else(|| CliError::Usage("nonrigid mode requires --tables".into()))?;
        let tables = load_tables(&dir)?;
        let rows = enumerate_nonrigid(&g, RelaxedPattern { hops, min_paths }, &tables)?;
        let mut total = Quantity::finite(0);
        for (anchor, paths, value) in rows.iter().take(limit) {
            println!("anchor={} paths={} value={}", g.name(*anchor), paths, value);
            total = total.checked_add(*value).unwrap_or(Quantity::INFINITE);
        }
        let shown = rows.len().min(limit);
        println!("instances={} avg_flow={}", shown, avg(total, shown));
        return Ok(());
    }

    let pattern_path =
        pattern.ok_or_else(|| CliError::Usage("--pattern is required (or use --min-paths)".into()))?;
    let pat = Pattern::load(&pattern_path)?;
    let instances = match method {
        "gb" => enumerate_gb(&g, &pat),
        "pb" => {
            let dir = tables
                .ok_or_else(|| CliError::Usage("--method pb requires --tables".into()))?;
            let tables = load_tables(&dir)?;
            let (instances, coverage) = enumerate_pb(&g, &pat, &tables)?;
            if coverage == Coverage::Partial {
                eprintln!("note: partial table coverage; uncovered chains matched by graph walk");
            }
            instances
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown method `{other}` (expected gb or pb)"
            )))
        }
    };
    let mut total = Quantity::finite(0);
    let mut shown = 0usize;
    for inst in instances.iter().take(limit) {
        let flow = instance_flow(&g, &pat, inst)?;
        let bindings: Vec<String> = inst
            .bindings(&pat)
            .iter()
            .map(|(label, v)| format!("{label}={}", g.name(*v)))
            .collect();
        println!("{} value={}", bindings.join(" "), flow.value);
        total = total.checked_add(flow.value).unwrap_or(Quantity::INFINITE);
        shown += 1;
    }
    println!("instances={} avg_flow={}", shown, avg(total, shown));
    Ok(())
}

fn avg(total: Quantity, n: usize) -> String {
    if n == 0 || total.is_infinite() {
        return "-".into();
    }
    format!("{:.2}", total.raw() as f64 / n as f64)
}

// Re-exported for the bench module.
pub(crate) fn classify(inst: &FlowInstance) -> Result<char, GraphError> {
    if greedy_soluble(inst) {
        return Ok('A');
    }
    if inst.graph.is_dag() {
        let (reduced, _) = tempoflow_core::analysis::preprocess(inst)?;
        if greedy_soluble(&reduced) {
            return Ok('B');
        }
    }
    Ok('C')
}
