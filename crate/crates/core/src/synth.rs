//! Deterministic synthetic instance generation for tests and benchmarks.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;
use crate::graph::{GraphBuilder, TemporalGraph};
use crate::instance::{normalize, FlowInstance};

/// Which solubility class the topology is steered toward.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassBias {
    /// Single-out-degree DAG: soluble by greedy as-is.
    A,
    /// Class A plus dead branches that only preprocessing removes.
    B,
    /// General DAG with branching and crossing time orders.
    C,
}

impl std::str::FromStr for ClassBias {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" | "A" => Ok(ClassBias::A),
            "b" | "B" => Ok(ClassBias::B),
            "c" | "C" => Ok(ClassBias::C),
            other => Err(format!("unknown class `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SynthSpec {
    pub vertices: usize,
    pub edges: usize,
    pub interactions: usize,
    pub class_bias: ClassBias,
    pub rng_seed: u64,
}

/// Generate a connected, normalized instance, bit-identical for identical
/// specs. Vertex 0 is the source, the highest-index vertex the sink;
/// edges always point from lower to higher index, so the graph is a DAG
/// and the endpoints need no synthetic split.
pub fn gen_synthetic(spec: &SynthSpec) -> Result<FlowInstance, GraphError> {
    if spec.vertices < 2 {
        return Err(GraphError::InfeasibleSpec("need at least 2 vertices".into()));
    }
    if spec.edges < spec.vertices - 1 {
        return Err(GraphError::InfeasibleSpec(
            "need at least vertices-1 edges for connectivity".into(),
        ));
    }
    if spec.interactions < spec.edges {
        return Err(GraphError::InfeasibleSpec(
            "need at least one interaction per edge".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let n = spec.vertices;
    let name = |i: usize| format!("v{i}");
    if spec.class_bias == ClassBias::C {
        return gen_class_c(spec, &mut rng);
    }

    // Backbone: every non-sink vertex gets exactly one out-edge to a
    // higher index, which connects the graph and satisfies the
    // single-out-degree condition for interior vertices.
    let mut edge_list: Vec<(usize, usize)> = Vec::new();
    for i in 0..n - 1 {
        let j = if i == n - 2 {
            n - 1
        } else {
            rng.gen_range(i + 1..n)
        };
        edge_list.push((i, j));
    }
    // Extra capacity fans out of the source only, preserving interior
    // out-degree 1.
    let extra = spec.edges.saturating_sub(edge_list.len());
    let mut targets: Vec<usize> = (1..n)
        .filter(|&j| !edge_list.contains(&(0, j)))
        .collect();
    targets.shuffle(&mut rng);
    for j in targets.into_iter().take(extra) {
        edge_list.push((0, j));
    }

    // Dead branch for class B: one interior vertex gets a second out-edge
    // whose interactions predate everything, so preprocessing prunes it
    // and restores solubility.
    let mut dead_edges: Vec<(usize, usize)> = Vec::new();
    if spec.class_bias == ClassBias::B && n >= 4 {
        let i = rng.gen_range(1..n - 2);
        let j = rng.gen_range(i + 1..n);
        if !edge_list.contains(&(i, j)) {
            dead_edges.push((i, j));
        } else {
            let j2 = (i + 1..n).find(|&j| !edge_list.contains(&(i, j)));
            if let Some(j2) = j2 {
                dead_edges.push((i, j2));
            }
        }
    }

    // Distribute interactions: one per edge, remainder at random.
    let live = edge_list.len();
    let mut per_edge = vec![1usize; live + dead_edges.len()];
    for _ in 0..spec.interactions.saturating_sub(per_edge.len()) {
        let k = rng.gen_range(0..per_edge.len());
        per_edge[k] += 1;
    }

    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&name(i));
    }
    // Distinct timestamps throughout: same-timestamp relays are where the
    // greedy and exact semantics legitimately part ways, and synthetic
    // instances are meant to exercise ordering, not that edge case.
    let live_count: usize = per_edge[..live].iter().sum();
    let mut times: Vec<i64> = (1..=3 * live_count.max(1) as i64).collect();
    times.shuffle(&mut rng);
    times.truncate(live_count);
    let mut times = times.into_iter();
    for (k, &(i, j)) in edge_list.iter().enumerate() {
        for _ in 0..per_edge[k] {
            let t = times.next().expect("pool sized to fit");
            let q = rng.gen_range(1..=10u64);
            b.add(&name(i), &name(j), t, q)?;
        }
    }
    let mut dead_t = -1i64;
    for (k, &(i, j)) in dead_edges.iter().enumerate() {
        for _ in 0..per_edge[live + k] {
            // Strictly before any live interaction: prunable.
            let q = rng.gen_range(1..=10u64);
            b.add(&name(i), &name(j), dead_t, q)?;
            dead_t -= 1;
        }
    }
    let g: TemporalGraph = b.build();
    let srcs = [g.lookup(&name(0)).unwrap()].into_iter().collect();
    let snks = [g.lookup(&name(n - 1)).unwrap()].into_iter().collect();
    let inst = normalize(&g, &srcs, &snks)?;
    debug_assert!(inst.validate().is_ok());
    Ok(inst)
}

/// Class C instances are built from diversion gadgets rather than a plain
/// random DAG: per interior pair (y, z) the source funds y early, y's
/// first chance to spend is a high-capacity edge into the bottleneck z,
/// and only afterwards does the wide edge y -> t fire. Greedy flushes
/// everything into z and loses; the exact solver holds back at y. This
/// makes the greedy/exact gap structural instead of a roll of the dice.
/// Each gadget also carries a dead-end sibling d: transfers y -> d can
/// never reach the sink, so they inflate the solver's working set while
/// preprocessing deletes d and everything into it.
/// The interaction budget is honored exactly; the edge budget is treated
/// as a soft target (gadgets fix the shape).
fn gen_class_c(spec: &SynthSpec, rng: &mut ChaCha8Rng) -> Result<FlowInstance, GraphError> {
    let n = spec.vertices;
    if n < 4 {
        return Err(GraphError::InfeasibleSpec(
            "class C needs at least 4 vertices".into(),
        ));
    }
    let name = |i: usize| format!("v{i}");
    let interiors: Vec<usize> = (1..n - 1).collect();
    // (y, z, optional dead-end d) per gadget.
    let gadgets: Vec<(usize, usize, Option<usize>)> = interiors
        .chunks(3)
        .filter(|c| c.len() >= 2)
        .map(|c| (c[0], c[1], c.get(2).copied()))
        .collect();
    let leftover: Option<usize> =
        (interiors.len() % 3 == 1).then(|| *interiors.last().unwrap());
    let base: usize = gadgets
        .iter()
        .map(|(_, _, d)| 4 + if d.is_some() { 1 } else { 0 })
        .sum::<usize>()
        + if leftover.is_some() { 2 } else { 0 };
    let mut extra = spec.interactions.saturating_sub(base);
    // Extra interactions become either additional source supply or extra
    // decoy transfers into the dead end, spread across gadgets.
    let mut supply_per_gadget = vec![1usize; gadgets.len()];
    let mut decoys_per_gadget: Vec<usize> =
        gadgets.iter().map(|(_, _, d)| usize::from(d.is_some())).collect();
    while extra > 0 && !gadgets.is_empty() {
        let k = rng.gen_range(0..gadgets.len());
        if gadgets[k].2.is_some() && rng.gen_bool(0.5) {
            decoys_per_gadget[k] += 1;
        } else {
            supply_per_gadget[k] += 1;
        }
        extra -= 1;
    }

    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.intern(&name(i));
    }
    let mut t_cursor = 0i64;
    let tick = |rng: &mut ChaCha8Rng, t_cursor: &mut i64| {
        *t_cursor += rng.gen_range(1..=3);
        *t_cursor
    };
    for (g, &(y, z, dead)) in gadgets.iter().enumerate() {
        let mut supply = 0u64;
        for _ in 0..supply_per_gadget[g] {
            let q = rng.gen_range(2..=9u64);
            supply += q;
            let t = tick(rng, &mut t_cursor);
            b.add(&name(0), &name(y), t, q)?;
        }
        // Decoy transfers into the dead end; they can never reach the
        // sink, so preprocessing deletes them wholesale.
        if let Some(d) = dead {
            for _ in 0..decoys_per_gadget[g] {
                let t = tick(rng, &mut t_cursor);
                b.add(&name(y), &name(d), t, rng.gen_range(1..=3u64))?;
            }
        }
        // y's first live spend: everything into the bottleneck.
        let t = tick(rng, &mut t_cursor);
        b.add(&name(y), &name(z), t, supply + rng.gen_range(0..=5))?;
        // The wide exit fires too late for greedy.
        let t = tick(rng, &mut t_cursor);
        b.add(&name(y), &name(n - 1), t, supply)?;
        let t = tick(rng, &mut t_cursor);
        b.add(&name(z), &name(n - 1), t, rng.gen_range(1..=2u64))?;
    }
    if let Some(v) = leftover {
        let q = rng.gen_range(1..=9u64);
        let t = tick(rng, &mut t_cursor);
        b.add(&name(0), &name(v), t, q)?;
        let t = tick(rng, &mut t_cursor);
        b.add(&name(v), &name(n - 1), t, q)?;
    }
    let g = b.build();
    let srcs = [g.lookup(&name(0)).unwrap()].into_iter().collect();
    let snks = [g.lookup(&name(n - 1)).unwrap()].into_iter().collect();
    let inst = normalize(&g, &srcs, &snks)?;
    debug_assert!(inst.validate().is_ok());
    Ok(inst)
}
