//! Cost-reduction devices applied before exact max-flow: the greedy
//! solubility test, DAG preprocessing, and source-chain simplification.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::GraphError;
use crate::graph::{EdgeSeries, Interaction, TemporalGraph, VertexId};
use crate::greedy::greedy_chain_boundary;
use crate::instance::FlowInstance;

/// Sizes removed by a reduction pass, consistent with the before/after
/// instance sizes.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub interactions_removed: usize,
    pub edges_removed: usize,
    pub vertices_removed: usize,
    pub chains_reduced: usize,
    /// Source or sink was deleted; the maximum flow is 0.
    pub became_trivial: bool,
}

impl ReductionReport {
    pub fn merge(self, other: ReductionReport) -> ReductionReport {
        ReductionReport {
            interactions_removed: self.interactions_removed + other.interactions_removed,
            edges_removed: self.edges_removed + other.edges_removed,
            vertices_removed: self.vertices_removed + other.vertices_removed,
            chains_reduced: self.chains_reduced + other.chains_reduced,
            became_trivial: self.became_trivial || other.became_trivial,
        }
    }
}

/// True iff the instance is a DAG in which every vertex except the source
/// and the sink has exactly one outgoing edge; greedy then attains the
/// maximum flow. Cyclic instances return false.
pub fn greedy_soluble(instance: &FlowInstance) -> bool {
    if instance.zero_flow || !instance.graph.is_dag() {
        return false;
    }
    instance
        .graph
        .vertices()
        .filter(|&v| v != instance.source && v != instance.sink)
        .all(|v| instance.graph.out_degree(v) == 1)
}

/// Count of interactions that leave a non-source vertex at the same
/// timestamp as an earlier-ordered arrival to it. Greedy lets such a relay
/// pass quantity on (stable input order breaks the tie) while the exact
/// semantics require strictly earlier arrival, so the two can legitimately
/// disagree on instances where this is non-zero; callers surface it as a
/// diagnostic.
pub fn same_timestamp_relay_count(instance: &FlowInstance) -> usize {
    let all = instance.graph.interactions_in_time_order();
    let mut count = 0usize;
    for (k, i) in all.iter().enumerate() {
        if i.src == instance.source {
            continue;
        }
        if all[..k]
            .iter()
            .any(|j| j.dst == i.src && j.t == i.t)
        {
            count += 1;
        }
    }
    count
}

/// Whether preprocessing prunes interactions strictly before the earliest
/// possible inflow (the literal rule) or also those exactly at it (sound
/// under the strict prefix-balance semantics, but opt-in).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum PruneRule {
    #[default]
    Strict,
    /// Also prune interactions with `t == mintime`.
    Extended,
}

/// DAG preprocessing: visit vertices in topological order, drop from each
/// vertex's outgoing edges every interaction earlier than the vertex's
/// earliest incoming timestamp, and cascade edge/vertex deletions.
/// The maximum flow of the instance is preserved.
pub fn preprocess(
    instance: &FlowInstance,
) -> Result<(FlowInstance, ReductionReport), GraphError> {
    preprocess_with(instance, PruneRule::Strict)
}

pub fn preprocess_with(
    instance: &FlowInstance,
    rule: PruneRule,
) -> Result<(FlowInstance, ReductionReport), GraphError> {
    let order = instance.graph.topological_order()?;
    let src = instance.source;
    let sink = instance.sink;

    // Local mutable view: edge map plus adjacency sets.
    let mut edges: BTreeMap<(VertexId, VertexId), EdgeSeries> = instance.graph.edges.clone();
    let mut out: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut inc: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    let mut alive: BTreeSet<VertexId> = instance.graph.vertices().collect();
    for &(s, d) in edges.keys() {
        out.entry(s).or_default().insert(d);
        inc.entry(d).or_default().insert(s);
    }
    let deg = |m: &BTreeMap<VertexId, BTreeSet<VertexId>>, v: VertexId| {
        m.get(&v).map(BTreeSet::len).unwrap_or(0)
    };

    let delete_edge = |edges: &mut BTreeMap<(VertexId, VertexId), EdgeSeries>,
                           out: &mut BTreeMap<VertexId, BTreeSet<VertexId>>,
                           inc: &mut BTreeMap<VertexId, BTreeSet<VertexId>>,
                           s: VertexId,
                           d: VertexId| {
        edges.remove(&(s, d));
        out.get_mut(&s).map(|m| m.remove(&d));
        inc.get_mut(&d).map(|m| m.remove(&s));
    };

    // Upstream cascade: delete a vertex with no outgoing edges together
    // with its incoming edges, repeating on predecessors left dangling.
    // Worklist instead of recursion to bound stack depth.
    let cascade_upstream = |start: VertexId,
                            edges: &mut BTreeMap<(VertexId, VertexId), EdgeSeries>,
                            out: &mut BTreeMap<VertexId, BTreeSet<VertexId>>,
                            inc: &mut BTreeMap<VertexId, BTreeSet<VertexId>>,
                            alive: &mut BTreeSet<VertexId>| {
        let mut work = vec![start];
        while let Some(v) = work.pop() {
            if !alive.contains(&v) || deg(out, v) != 0 || v == sink {
                continue;
            }
            alive.remove(&v);
            let preds: Vec<VertexId> = inc.get(&v).map(|m| m.iter().copied().collect()).unwrap_or_default();
            for w in preds {
                edges.remove(&(w, v));
                out.get_mut(&w).map(|m| m.remove(&v));
                if deg(out, w) == 0 {
                    work.push(w);
                }
            }
            inc.remove(&v);
        }
    };

    for &v in &order {
        if v == src || v == sink || !alive.contains(&v) {
            continue;
        }
        if deg(&inc, v) == 0 {
            // Nothing can flow through v; drop it with its outgoing edges.
            let succs: Vec<VertexId> = out.get(&v).map(|m| m.iter().copied().collect()).unwrap_or_default();
            for u in succs {
                delete_edge(&mut edges, &mut out, &mut inc, v, u);
            }
            alive.remove(&v);
            continue;
        }
        let mintime = inc[&v]
            .iter()
            .flat_map(|&w| edges[&(w, v)].interactions.iter().map(|i| i.t))
            .min()
            .expect("incoming edges are non-empty");
        let succs: Vec<VertexId> = out.get(&v).map(|m| m.iter().copied().collect()).unwrap_or_default();
        for u in succs {
            let series = edges.get_mut(&(v, u)).expect("edge alive");
            series.interactions.retain(|i| match rule {
                PruneRule::Strict => i.t >= mintime,
                PruneRule::Extended => i.t > mintime,
            });
            if series.interactions.is_empty() {
                delete_edge(&mut edges, &mut out, &mut inc, v, u);
            }
        }
        if deg(&out, v) == 0 {
            cascade_upstream(v, &mut edges, &mut out, &mut inc, &mut alive);
        }
    }

    let source_alive = alive.contains(&src) && deg(&out, src) > 0;
    let sink_alive = alive.contains(&sink) && deg(&inc, sink) > 0;
    let became_trivial = !(source_alive && sink_alive) && instance.graph.edge_count() > 0;

    let mut g = TemporalGraph {
        names: instance.graph.names.clone(),
        vertices: BTreeSet::new(),
        edges: if became_trivial { BTreeMap::new() } else { edges },
        out_adj: Default::default(),
        in_adj: Default::default(),
        next_interaction_id: instance.graph.next_interaction_id,
    };
    g.rebuild_adjacency();
    g.vertices.insert(src);
    g.vertices.insert(sink);

    let report = ReductionReport {
        interactions_removed: instance.graph.interaction_count() - g.interaction_count(),
        edges_removed: instance.graph.edge_count() - g.edge_count(),
        vertices_removed: instance.graph.vertex_count() - g.vertex_count(),
        chains_reduced: 0,
        became_trivial,
    };
    let reduced = FlowInstance {
        interaction_count: g.interaction_count(),
        graph: g,
        source: src,
        sink,
        zero_flow: instance.zero_flow || became_trivial,
    };
    Ok((reduced, report))
}

/// Replace the chain `source -> v1 -> ... -> vk` (each interior vertex with
/// in- and out-degree 1) by a single edge `(source, vk)` carrying the
/// chain's greedy boundary sequence; merges with a pre-existing edge.
pub fn chain_reduce(
    instance: &FlowInstance,
    chain: &[VertexId],
) -> Result<FlowInstance, GraphError> {
    if chain.len() < 2 || chain[0] != instance.source {
        return Err(GraphError::NotAChain(
            "chain must start at the instance source".into(),
        ));
    }
    for &v in &chain[1..chain.len() - 1] {
        if instance.graph.in_degree(v) != 1 || instance.graph.out_degree(v) != 1 {
            return Err(GraphError::NotAChain(format!(
                "interior vertex {} must have in- and out-degree 1",
                instance.graph.name(v)
            )));
        }
    }
    if chain.len() == 2 {
        // A plain source edge; no interior vertices, nothing to reduce.
        return Ok(instance.clone());
    }
    let edge_refs: Vec<&EdgeSeries> = chain
        .windows(2)
        .map(|w| {
            instance
                .graph
                .edge(w[0], w[1])
                .ok_or_else(|| GraphError::NotAChain("missing chain edge".into()))
        })
        .collect::<Result<_, _>>()?;
    let boundary = greedy_chain_boundary(&edge_refs)?;

    let mut g = instance.graph.clone();
    for w in chain.windows(2) {
        g.edges.remove(&(w[0], w[1]));
    }
    for &v in &chain[1..chain.len() - 1] {
        g.vertices.remove(&v);
    }
    let (s, vk) = (chain[0], *chain.last().unwrap());
    let new_interactions: Vec<Interaction> = boundary
        .into_iter()
        .map(|(t, q)| Interaction {
            t,
            q,
            id: g.fresh_interaction_id(),
        })
        .collect();
    match g.edges.get_mut(&(s, vk)) {
        Some(existing) => {
            existing.interactions.extend(new_interactions);
            existing.interactions.sort_by_key(|i| (i.t, i.id));
        }
        None => {
            if !new_interactions.is_empty() {
                g.edges.insert(
                    (s, vk),
                    EdgeSeries {
                        src: s,
                        dst: vk,
                        interactions: new_interactions,
                    },
                );
            }
        }
    }
    g.rebuild_adjacency();
    g.vertices.insert(instance.source);
    g.vertices.insert(instance.sink);
    Ok(FlowInstance {
        interaction_count: g.interaction_count(),
        graph: g,
        source: instance.source,
        sink: instance.sink,
        zero_flow: instance.zero_flow,
    })
}

/// Repeatedly reduce maximal chains originating at the source until none of
/// length >= 2 edges remains. Chain selection is deterministic: the
/// lowest-id first outgoing edge is tried first.
pub fn simplify(instance: &FlowInstance) -> (FlowInstance, ReductionReport) {
    let mut current = instance.clone();
    let mut chains = 0usize;
    loop {
        let Some(chain) = find_source_chain(&current) else {
            break;
        };
        current = chain_reduce(&current, &chain).expect("chain premise checked");
        chains += 1;
    }
    let report = ReductionReport {
        interactions_removed: instance
            .graph
            .interaction_count()
            .saturating_sub(current.graph.interaction_count()),
        edges_removed: instance
            .graph
            .edge_count()
            .saturating_sub(current.graph.edge_count()),
        vertices_removed: instance.graph.vertex_count() - current.graph.vertex_count(),
        chains_reduced: chains,
        became_trivial: false,
    };
    (current, report)
}

/// Maximal chain `source -> v1 -> ... -> vk` with at least one interior
/// vertex, or `None`.
fn find_source_chain(instance: &FlowInstance) -> Option<Vec<VertexId>> {
    let g = &instance.graph;
    for &first in g.out_neighbors(instance.source) {
        let mut chain = vec![instance.source, first];
        let mut cur = first;
        while g.in_degree(cur) == 1 && g.out_degree(cur) == 1 {
            let next = g.out_neighbors(cur)[0];
            chain.push(next);
            cur = next;
        }
        if chain.len() >= 3 {
            return Some(chain);
        }
    }
    None
}
