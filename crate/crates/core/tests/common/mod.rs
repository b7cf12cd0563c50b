//! Seeded random inputs shared by the property and acceptance suites.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tempoflow_core::graph::GraphBuilder;
use tempoflow_core::instance::{normalize, FlowInstance};
use tempoflow_core::TemporalGraph;

/// Random connected-ish instance with globally distinct timestamps.
/// `allow_cycles=false` keeps every edge pointing from lower to higher
/// vertex index (a DAG); otherwise back-edges are allowed.
pub fn random_instance(seed: u64, max_interactions: usize, allow_cycles: bool) -> FlowInstance {
    let g = random_graph(seed, max_interactions, allow_cycles, 8);
    let srcs = [g.lookup("v0").unwrap()].into_iter().collect();
    let n = g.vertex_count();
    let sink_name = format!("v{}", n - 1);
    let snks = [g
        .lookup(&sink_name)
        .unwrap_or_else(|| g.vertices().last().unwrap())]
    .into_iter()
    .collect();
    normalize(&g, &srcs, &snks).expect("seeded instance")
}

pub fn random_graph(
    seed: u64,
    max_interactions: usize,
    allow_cycles: bool,
    max_vertices: usize,
) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_vertices.max(3));
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    // Backbone keeps everything attached.
    for i in 0..n - 1 {
        pairs.insert((i, rng.gen_range(i + 1..n)));
    }
    let extra = rng.gen_range(0..=n + 2);
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        if !allow_cycles && a > b {
            continue;
        }
        pairs.insert((a, b));
    }
    let mut records: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in &pairs {
        let reps = rng.gen_range(1..=3usize);
        for _ in 0..reps {
            if records.len() >= max_interactions {
                break;
            }
            records.push((a, b));
        }
    }
    let mut times: Vec<i64> = (1..=3 * records.len().max(1) as i64).collect();
    times.shuffle(&mut rng);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&format!("v{i}"));
    }
    for (k, &(x, y)) in records.iter().enumerate() {
        let q = rng.gen_range(1..=9u64);
        b.add(&format!("v{x}"), &format!("v{y}"), times[k], q)
            .expect("valid record");
    }
    b.build()
}
