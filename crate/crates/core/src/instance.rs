//! Normalization of arbitrary seed sets into single-source/single-sink
//! flow instances.

use std::collections::BTreeSet;

use crate::error::GraphError;
use crate::graph::{EdgeSeries, Interaction, TemporalGraph, Timestamp, VertexId};
use crate::quantity::Quantity;

/// A connected graph with exactly one source (no incoming edges) and one
/// sink (no outgoing edges); the unit of all flow computation.
#[derive(Clone, Debug)]
pub struct FlowInstance {
    pub graph: TemporalGraph,
    pub source: VertexId,
    pub sink: VertexId,
    pub interaction_count: usize,
    /// Set when the seed sets ended up disconnected; the flow is 0 by
    /// construction and solvers short-circuit.
    pub zero_flow: bool,
}

impl FlowInstance {
    /// Check the structural invariants; used by tests and debug assertions.
    pub fn validate(&self) -> Result<(), String> {
        if !self.graph.contains_vertex(self.source) {
            return Err("source missing from graph".into());
        }
        if !self.graph.contains_vertex(self.sink) {
            return Err("sink missing from graph".into());
        }
        if self.graph.in_degree(self.source) != 0 {
            return Err("source has incoming edges".into());
        }
        if self.graph.out_degree(self.sink) != 0 {
            return Err("sink has outgoing edges".into());
        }
        if self.interaction_count != self.graph.interaction_count() {
            return Err("interaction_count out of date".into());
        }
        if !self.zero_flow {
            let comp = self.graph.undirected_component(self.source);
            if comp.len() != self.graph.vertex_count() {
                return Err("graph not connected".into());
            }
        }
        if !self.graph.adjacency_consistent() {
            return Err("adjacency inconsistent".into());
        }
        Ok(())
    }
}

/// Normalize a graph with declared source and sink sets into a
/// [`FlowInstance`].
///
/// A vertex declared as both source and sink is split into an out-half
/// (keeping outgoing edges) and an in-half (keeping incoming edges); flow
/// from the out-half to the in-half equals the cyclic flow through the
/// vertex. If after splitting there is a single source with no incoming
/// edges and a single sink with no outgoing edges, the graph is used as is.
/// Otherwise a synthetic endpoint is added on each side that needs one,
/// with a single `(T_min - 1, INFINITE)` or `(T_max + 1, INFINITE)`
/// interaction per declared seed. Vertices outside the undirected component
/// of the source are dropped.
pub fn normalize(
    graph: &TemporalGraph,
    sources: &BTreeSet<VertexId>,
    sinks: &BTreeSet<VertexId>,
) -> Result<FlowInstance, GraphError> {
    if sources.is_empty() || sinks.is_empty() {
        return Err(GraphError::EmptySeedSet);
    }
    let mut g = graph.clone();
    let sources = sources.clone();
    let mut sinks = sinks.clone();

    // Split vertices playing both roles.
    let shared: Vec<VertexId> = sources.intersection(&sinks).copied().collect();
    for v in shared {
        let in_half = VertexId(g.names.len() as u32);
        let in_name = format!("{}@in", g.name(v));
        g.names.push(in_name);
        g.vertices.insert(in_half);
        let incoming: Vec<(VertexId, VertexId)> =
            g.edges.keys().filter(|&&(_, d)| d == v).copied().collect();
        for key in incoming {
            let mut series = g.edges.remove(&key).expect("edge exists");
            series.dst = in_half;
            g.edges.insert((key.0, in_half), series);
        }
        sinks.remove(&v);
        sinks.insert(in_half);
        g.rebuild_adjacency();
        g.vertices.insert(v);
        g.vertices.insert(in_half);
    }

    let (t_min, t_max) = g
        .time_range()
        .map(|(lo, hi)| (lo.0, hi.0))
        .unwrap_or((0, 0));

    let single_source = sources.len() == 1 && g.in_degree(*sources.iter().next().unwrap()) == 0;
    let single_sink = sinks.len() == 1 && g.out_degree(*sinks.iter().next().unwrap()) == 0;

    let source = if single_source {
        *sources.iter().next().unwrap()
    } else {
        let s = VertexId(g.names.len() as u32);
        g.names.push(unique_name(&g, "__source__"));
        g.vertices.insert(s);
        for &orig in &sources {
            let id = g.fresh_interaction_id();
            g.edges.insert(
                (s, orig),
                EdgeSeries {
                    src: s,
                    dst: orig,
                    interactions: vec![Interaction {
                        t: Timestamp(t_min - 1),
                        q: Quantity::INFINITE,
                        id,
                    }],
                },
            );
        }
        s
    };
    let sink = if single_sink {
        *sinks.iter().next().unwrap()
    } else {
        let t = VertexId(g.names.len() as u32);
        g.names.push(unique_name(&g, "__sink__"));
        g.vertices.insert(t);
        for &orig in &sinks {
            let id = g.fresh_interaction_id();
            g.edges.insert(
                (orig, t),
                EdgeSeries {
                    src: orig,
                    dst: t,
                    interactions: vec![Interaction {
                        t: Timestamp(t_max + 1),
                        q: Quantity::INFINITE,
                        id,
                    }],
                },
            );
        }
        t
    };
    g.rebuild_adjacency();
    g.vertices.insert(source);
    g.vertices.insert(sink);

    // Drop everything outside the source's undirected component.
    let comp = g.undirected_component(source);
    let zero_flow = !comp.contains(&sink);
    if comp.len() != g.vertex_count() {
        g.edges
            .retain(|&(s, d), _| comp.contains(&s) && comp.contains(&d));
        g.vertices.retain(|v| comp.contains(v));
        g.rebuild_adjacency();
        for &v in &comp {
            g.vertices.insert(v);
        }
    }
    if zero_flow {
        g.vertices.insert(sink);
    }

    let interaction_count = g.interaction_count();
    Ok(FlowInstance {
        graph: g,
        source,
        sink,
        interaction_count,
        zero_flow,
    })
}

fn unique_name(g: &TemporalGraph, base: &str) -> String {
    if g.lookup(base).is_none() {
        return base.to_string();
    }
    let mut n = 0usize;
    loop {
        let cand = format!("{base}{n}");
        if g.lookup(&cand).is_none() {
            return cand;
        }
        n += 1;
    }
}
