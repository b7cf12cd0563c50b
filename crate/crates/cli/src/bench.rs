//! Benchmark harness: runs every flow method over a batch of instances,
//! enforces cross-method agreement, and prints per-class and per-size
//! summaries as aligned text and CSV.

use std::time::Instant;

use rayon::prelude::*;
use tempoflow_core::extract::{extract_subgraphs, ExtractBounds};
use tempoflow_core::greedy::greedy_flow;
use tempoflow_core::instance::FlowInstance;
use tempoflow_core::maxflow::{max_flow, Strategy};
use tempoflow_core::parse::Format;
use tempoflow_core::synth::{gen_synthetic, ClassBias, SynthSpec};
use tempoflow_core::Quantity;

use crate::io::{load_graph, CliError};
use crate::classify;

struct BenchRecord {
    id: String,
    class: char,
    interactions: usize,
    greedy_us: u128,
    lp_us: u128,
    pre_us: u128,
    presim_us: u128,
    greedy_value: Quantity,
    value: Quantity,
}

fn parse_synth_spec(spec: &str, base_seed: u64) -> Result<Vec<(String, SynthSpec)>, CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [v, e, i, class, count] = parts[..] else {
        return Err(CliError::Usage(format!(
            "bad --synthetic `{spec}` (expected vertices,edges,interactions,class,count)"
        )));
    };
    let usage = |what: &str| CliError::Usage(format!("bad --synthetic field {what}"));
    let v: usize = v.parse().map_err(|_| usage("vertices"))?;
    let e: usize = e.parse().map_err(|_| usage("edges"))?;
    let i: usize = i.parse().map_err(|_| usage("interactions"))?;
    let class: ClassBias = class.parse().map_err(CliError::Usage)?;
    let count: usize = count.parse().map_err(|_| usage("count"))?;
    Ok((0..count)
        .map(|k| {
            let seed = base_seed + k as u64;
            (
                format!("synth-{seed}"),
                SynthSpec {
                    vertices: v,
                    edges: e,
                    interactions: i,
                    class_bias: class,
                    rng_seed: seed,
                },
            )
        })
        .collect())
}

fn time_us<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, u128) {
    let mut best = u128::MAX;
    let mut out = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        out = Some(f());
        best = best.min(start.elapsed().as_micros());
    }
    (out.unwrap(), best)
}

fn bench_one(id: &str, inst: &FlowInstance, reps: usize) -> Result<BenchRecord, CliError> {
    let class = classify(inst)?;
    let (g, greedy_us) = time_us(reps, || greedy_flow(inst));
    let (lp, lp_us) = time_us(reps, || max_flow(inst, Strategy::Lp));
    let (pre, pre_us) = time_us(reps, || max_flow(inst, Strategy::Pre));
    let (presim, presim_us) = time_us(reps, || max_flow(inst, Strategy::PreSim));
    let lp = lp?.0.value;
    let pre = pre?.0.value;
    let presim = presim?.0.value;
    if lp != pre || lp != presim {
        return Err(CliError::Internal(format!(
            "{id}: method disagreement lp={lp} pre={pre} presim={presim}"
        )));
    }
    Ok(BenchRecord {
        id: id.to_string(),
        class,
        interactions: inst.interaction_count,
        greedy_us,
        lp_us,
        pre_us,
        presim_us,
        greedy_value: g.value,
        value: lp,
    })
}

pub fn cmd_bench(
    file: Option<String>,
    format: Format,
    jobs: Option<usize>,
    seed: u64,
    synthetic: Option<String>,
    reps: usize,
) -> Result<(), CliError> {
    let instances: Vec<(String, FlowInstance)> = match (&file, &synthetic) {
        (None, Some(spec)) => parse_synth_spec(spec, seed)?
            .into_iter()
            .map(|(id, s)| Ok((id, gen_synthetic(&s)?)))
            .collect::<Result<_, CliError>>()?,
        (Some(path), None) => {
            let g = load_graph(path, format, None)?;
            extract_subgraphs(&g, 3, ExtractBounds::default())?
                .into_iter()
                .map(|(v, inst)| (format!("seed-{}", g.name(v)), inst))
                .collect()
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either an input file or --synthetic, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "bench needs an input file or --synthetic SPEC".into(),
            ))
        }
    };
    if instances.is_empty() {
        return Err(CliError::Data("no benchmark instances".into()));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(1))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let records: Vec<BenchRecord> = pool.install(|| {
        instances
            .par_iter()
            .map(|(id, inst)| bench_one(id, inst, reps))
            .collect::<Result<_, _>>()
    })?;

    println!(
        "{:<16} {:>5} {:>6} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8}",
        "instance", "class", "ints", "greedy_us", "lp_us", "pre_us", "presim_us", "greedy", "max"
    );
    for r in &records {
        println!(
            "{:<16} {:>5} {:>6} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8}",
            r.id,
            r.class,
            r.interactions,
            r.greedy_us,
            r.lp_us,
            r.pre_us,
            r.presim_us,
            r.greedy_value.to_string(),
            r.value.to_string()
        );
    }

    println!();
    summary("class", &records, |r| r.class.to_string());
    println!();
    summary("size", &records, |r| {
        match r.interactions {
            0..=99 => "<100",
            100..=1000 => "100-1000",
            _ => ">1000",
        }
        .to_string()
    });
    Ok(())
}

/// Average runtimes grouped by a key, as an aligned table followed by the
/// same rows in CSV.
fn summary(kind: &str, records: &[BenchRecord], key: impl Fn(&BenchRecord) -> String) {
    let mut groups: std::collections::BTreeMap<String, Vec<&BenchRecord>> = Default::default();
    for r in records {
        groups.entry(key(r)).or_default().push(r);
    }
    let avg = |pick: &dyn Fn(&BenchRecord) -> u128, rows: &[&BenchRecord]| {
        rows.iter().map(|r| pick(r)).sum::<u128>() as f64 / rows.len() as f64
    };
    println!(
        "{:<10} {:>6} {:>12} {:>12} {:>12} {:>12}",
        kind, "n", "greedy_us", "lp_us", "pre_us", "presim_us"
    );
    let mut csv = format!("{kind},n,greedy_us,lp_us,pre_us,presim_us\n");
    for (k, rows) in &groups {
        let g = avg(&|r| r.greedy_us, rows);
        let l = avg(&|r| r.lp_us, rows);
        let p = avg(&|r| r.pre_us, rows);
        let ps = avg(&|r| r.presim_us, rows);
        println!(
            "{:<10} {:>6} {:>12.1} {:>12.1} {:>12.1} {:>12.1}",
            k,
            rows.len(),
            g,
            l,
            p,
            ps
        );
        csv.push_str(&format!("{k},{},{g:.1},{l:.1},{p:.1},{ps:.1}\n", rows.len()));
    }
    println!("--- csv ---");
    print!("{csv}");
}
