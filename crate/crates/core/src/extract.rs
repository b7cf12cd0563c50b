//! Seed-based subgraph extraction: per seed vertex, the union of all
//! directed cycles through it up to a hop bound, split into a flow
//! instance at the seed.

use std::collections::BTreeSet;

use crate::error::GraphError;
use crate::graph::{TemporalGraph, VertexId};
use crate::instance::{normalize, FlowInstance};

/// Interaction-count bounds for keeping an extracted instance.
#[derive(Clone, Copy, Debug)]
pub struct ExtractBounds {
    pub min_interactions: usize,
    pub max_interactions: usize,
}

impl Default for ExtractBounds {
    fn default() -> Self {
        // The upstream experiments discarded subgraphs above 10K
        // interactions; keep that as the default ceiling.
        ExtractBounds {
            min_interactions: 1,
            max_interactions: 10_000,
        }
    }
}

/// Union of edges of all directed cycles through `seed` of length at most
/// `max_hops`.
pub fn cycle_edges_through(
    graph: &TemporalGraph,
    seed: VertexId,
    max_hops: usize,
) -> BTreeSet<(VertexId, VertexId)> {
    let mut keep = BTreeSet::new();
    let mut path = vec![seed];
    dfs_cycles(graph, seed, max_hops, &mut path, &mut keep);
    keep
}

fn dfs_cycles(
    graph: &TemporalGraph,
    seed: VertexId,
    max_hops: usize,
    path: &mut Vec<VertexId>,
    keep: &mut BTreeSet<(VertexId, VertexId)>,
) {
    let last = *path.last().unwrap();
    for &next in graph.out_neighbors(last) {
        if next == seed {
            // Cycle closed: keep every edge along it.
            for w in path.windows(2) {
                keep.insert((w[0], w[1]));
            }
            keep.insert((last, seed));
            continue;
        }
        if path.len() < max_hops && !path.contains(&next) {
            path.push(next);
            dfs_cycles(graph, seed, max_hops, path, keep);
            path.pop();
        }
    }
}

/// For each vertex in ascending id order, merge all cycles through it of
/// length ≤ `max_hops` into one subgraph and split the vertex into a
/// source/sink pair. Seeds on no cycle, and instances outside the
/// interaction bounds, are skipped.
pub fn extract_subgraphs(
    graph: &TemporalGraph,
    max_hops: usize,
    bounds: ExtractBounds,
) -> Result<Vec<(VertexId, FlowInstance)>, GraphError> {
    assert!((2..=4).contains(&max_hops), "hop bound must be in 2..=4");
    let mut out = Vec::new();
    for seed in graph.vertices() {
        let keep = cycle_edges_through(graph, seed, max_hops);
        if keep.is_empty() {
            continue;
        }
        let sub = graph.edge_subgraph(&keep);
        let seeds: BTreeSet<VertexId> = [seed].into_iter().collect();
        let inst = normalize(&sub, &seeds, &seeds)?;
        if inst.interaction_count < bounds.min_interactions
            || inst.interaction_count > bounds.max_interactions
        {
            continue;
        }
        debug_assert!(inst.validate().is_ok());
        out.push((seed, inst));
    }
    Ok(out)
}

/// Non-cyclic variant: the union of directed paths `source → sink` of
/// length ≤ `max_hops`, normalized on that pair. `None` when no such path
/// exists or the instance falls outside the bounds.
pub fn extract_seed_pair(
    graph: &TemporalGraph,
    source: VertexId,
    sink: VertexId,
    max_hops: usize,
    bounds: ExtractBounds,
) -> Result<Option<FlowInstance>, GraphError> {
    assert!((2..=4).contains(&max_hops), "hop bound must be in 2..=4");
    let mut keep = BTreeSet::new();
    let mut path = vec![source];
    dfs_paths(graph, sink, max_hops, &mut path, &mut keep);
    if keep.is_empty() {
        return Ok(None);
    }
    let sub = graph.edge_subgraph(&keep);
    let srcs = [source].into_iter().collect();
    let snks = [sink].into_iter().collect();
    let inst = normalize(&sub, &srcs, &snks)?;
    if inst.interaction_count < bounds.min_interactions
        || inst.interaction_count > bounds.max_interactions
    {
        return Ok(None);
    }
    Ok(Some(inst))
}

fn dfs_paths(
    graph: &TemporalGraph,
    sink: VertexId,
    max_hops: usize,
    path: &mut Vec<VertexId>,
    keep: &mut BTreeSet<(VertexId, VertexId)>,
) {
    let last = *path.last().unwrap();
    for &next in graph.out_neighbors(last) {
        if next == sink {
            for w in path.windows(2) {
                keep.insert((w[0], w[1]));
            }
            keep.insert((last, sink));
            continue;
        }
        if path.len() < max_hops && !path.contains(&next) {
            path.push(next);
            dfs_paths(graph, sink, max_hops, path, keep);
            path.pop();
        }
    }
}
