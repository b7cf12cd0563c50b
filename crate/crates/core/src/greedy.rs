//! One-pass greedy flow computation over time-ordered interactions.

use std::collections::BTreeMap;

use crate::error::GraphError;
use crate::graph::{EdgeSeries, InteractionId, Timestamp, VertexId};
use crate::instance::FlowInstance;
use crate::quantity::Quantity;

/// Which computation produced a [`FlowResult`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    Greedy,
    MaxflowExpanded,
    MaxflowLp,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Greedy => "greedy",
            Method::MaxflowExpanded => "maxflow-expanded",
            Method::MaxflowLp => "maxflow-lp",
        };
        f.write_str(s)
    }
}

/// Flow value plus the realized per-interaction transfer assignment.
#[derive(Clone, Debug)]
pub struct FlowResult {
    pub value: Quantity,
    pub transfers: BTreeMap<InteractionId, Quantity>,
    pub method: Method,
}

/// Buffer snapshot after one processed interaction; drives `--trace` output.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub t: Timestamp,
    pub q: Quantity,
    pub src: VertexId,
    pub dst: VertexId,
    pub moved: Quantity,
    pub buffers: BTreeMap<VertexId, Quantity>,
}

/// Per-vertex buffered quantities; the source is pinned to INFINITE.
#[derive(Clone, Debug)]
pub struct BufferState {
    buffers: BTreeMap<VertexId, Quantity>,
    source: VertexId,
}

impl BufferState {
    pub fn new(instance: &FlowInstance) -> BufferState {
        let mut buffers: BTreeMap<VertexId, Quantity> = instance
            .graph
            .vertices()
            .map(|v| (v, Quantity::ZERO))
            .collect();
        buffers.insert(instance.source, Quantity::INFINITE);
        BufferState {
            buffers,
            source: instance.source,
        }
    }

    pub fn get(&self, v: VertexId) -> Quantity {
        self.buffers.get(&v).copied().unwrap_or(Quantity::ZERO)
    }

    /// Move `q` from `src` to `dst`; the source buffer stays infinite.
    fn transfer(&mut self, src: VertexId, dst: VertexId, q: Quantity) {
        if src != self.source {
            let b = self.buffers.get_mut(&src).expect("known vertex");
            *b = b.checked_sub(q).expect("buffer never goes negative");
        }
        let b = self.buffers.entry(dst).or_insert(Quantity::ZERO);
        *b = b.checked_add(q).expect("buffer within range");
    }

    pub fn snapshot(&self) -> BTreeMap<VertexId, Quantity> {
        self.buffers.clone()
    }
}

/// Process every interaction once in `(t, input-order)` order, transferring
/// `min(q_i, B_src)` each time. Equal-timestamp interactions see the effect
/// of their same-timestamp predecessors in the stable order.
pub fn greedy_flow(instance: &FlowInstance) -> FlowResult {
    greedy_flow_traced(instance, false).0
}

pub fn greedy_flow_traced(instance: &FlowInstance, trace: bool) -> (FlowResult, Vec<TraceRow>) {
    let mut state = BufferState::new(instance);
    let mut transfers = BTreeMap::new();
    let mut rows = Vec::new();
    for i in instance.graph.interactions_in_time_order() {
        let moved = i.q.min_with(state.get(i.src));
        state.transfer(i.src, i.dst, moved);
        transfers.insert(i.id, moved);
        if trace {
            rows.push(TraceRow {
                t: i.t,
                q: i.q,
                src: i.src,
                dst: i.dst,
                moved,
                buffers: state.snapshot(),
            });
        }
    }
    let result = FlowResult {
        value: state.get(instance.sink),
        transfers,
        method: Method::Greedy,
    };
    (result, rows)
}

/// A boundary interaction: a timestamped increase of the terminal buffer of
/// a chain under greedy.
pub type Boundary = Vec<(Timestamp, Quantity)>;

/// Run greedy on a chain of edges (the first vertex acting as an infinite
/// source) and return one `(t_i, delta_i)` per interaction on the last edge
/// that increased the terminal buffer by `delta_i > 0`. The returned
/// sequence reproduces the terminal buffer trajectory at every timestamp.
///
/// Buffers are tracked per chain position, so cyclic paths (first vertex
/// equal to the last) are handled without conflating the two endpoints.
pub fn greedy_chain_boundary(chain: &[&EdgeSeries]) -> Result<Boundary, GraphError> {
    if chain.is_empty() {
        return Err(GraphError::NotAPath);
    }
    for pair in chain.windows(2) {
        if pair[0].dst != pair[1].src {
            return Err(GraphError::NotAPath);
        }
    }
    // (t, id, edge position, quantity), merged across edges in time order.
    let mut events: Vec<(Timestamp, InteractionId, usize, Quantity)> = chain
        .iter()
        .enumerate()
        .flat_map(|(pos, e)| e.interactions.iter().map(move |i| (i.t, i.id, pos, i.q)))
        .collect();
    events.sort_by_key(|&(t, id, _, _)| (t, id));

    let mut buffers: Vec<Quantity> = vec![Quantity::ZERO; chain.len() + 1];
    buffers[0] = Quantity::INFINITE;
    let last = chain.len() - 1;
    let mut boundary = Vec::new();
    for (t, _, pos, q) in events {
        let moved = q.min_with(buffers[pos]);
        if !buffers[pos].is_infinite() {
            buffers[pos] = buffers[pos].checked_sub(moved).expect("non-negative");
        }
        buffers[pos + 1] = buffers[pos + 1].checked_add(moved).expect("in range");
        if pos == last && moved > Quantity::ZERO {
            boundary.push((t, moved));
        }
    }
    Ok(boundary)
}

/// Total quantity carried by a boundary sequence.
pub fn boundary_total(boundary: &Boundary) -> Quantity {
    let mut acc = Quantity::ZERO;
    for &(_, q) in boundary {
        acc = acc.checked_add(q).expect("in range");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::GraphBuilder;
    use crate::instance::normalize;

    fn instance_of(g: &crate::graph::TemporalGraph, s: &str, t: &str) -> FlowInstance {
        let src = [g.lookup(s).unwrap()].into_iter().collect();
        let snk = [g.lookup(t).unwrap()].into_iter().collect();
        normalize(g, &src, &snk).unwrap()
    }

    #[test]
    fn toy_network_greedy_value_is_one() {
        let g = fixtures::toy_network();
        let inst = instance_of(&g, "s", "t");
        let (res, rows) = greedy_flow_traced(&inst, true);
        assert_eq!(res.value, Quantity::finite(1));
        let y = g.lookup("y").unwrap();
        let z = g.lookup("z").unwrap();
        let t = g.lookup("t").unwrap();
        let by: Vec<u64> = rows.iter().map(|r| r.buffers[&y].raw()).collect();
        let bz: Vec<u64> = rows.iter().map(|r| r.buffers[&z].raw()).collect();
        assert_eq!(by, vec![5, 5, 0, 0, 0]);
        assert_eq!(bz, vec![0, 3, 8, 8, 7]);
        assert_eq!(rows.last().unwrap().buffers[&t], Quantity::finite(1));
    }

    #[test]
    fn single_edge_everything_arrives() {
        let mut b = GraphBuilder::new();
        b.add("s", "t", 1, 5).unwrap();
        b.add("s", "t", 2, 3).unwrap();
        let g = b.build();
        let inst = instance_of(&g, "s", "t");
        assert_eq!(greedy_flow(&inst).value, Quantity::finite(8));
    }

    #[test]
    fn greedy_is_deterministic() {
        let g = fixtures::toy_network();
        let inst = instance_of(&g, "s", "t");
        let a = greedy_flow(&inst);
        let b = greedy_flow(&inst);
        assert_eq!(a.transfers, b.transfers);
    }

    fn chain_edges<'a>(
        g: &'a crate::graph::TemporalGraph,
        path: &[&str],
    ) -> Vec<&'a EdgeSeries> {
        path.windows(2)
            .map(|w| {
                g.edge(g.lookup(w[0]).unwrap(), g.lookup(w[1]).unwrap())
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn chain_boundary_matches_worked_example() {
        let g = fixtures::chain_syzt();
        let edges = chain_edges(&g, &["s", "y", "z", "t"]);
        let boundary = greedy_chain_boundary(&edges).unwrap();
        let plain: Vec<(i64, u64)> = boundary.iter().map(|&(t, q)| (t.0, q.raw())).collect();
        assert_eq!(plain, vec![(6, 3), (8, 4)]);
        assert_eq!(boundary_total(&boundary), Quantity::finite(7));
    }

    #[test]
    fn single_edge_chain_boundary_is_identity() {
        let mut b = GraphBuilder::new();
        b.add("s", "t", 1, 5).unwrap();
        b.add("s", "t", 4, 2).unwrap();
        let g = b.build();
        let edges = chain_edges(&g, &["s", "t"]);
        let boundary = greedy_chain_boundary(&edges).unwrap();
        let plain: Vec<(i64, u64)> = boundary.iter().map(|&(t, q)| (t.0, q.raw())).collect();
        assert_eq!(plain, vec![(1, 5), (4, 2)]);
    }

    #[test]
    fn early_interaction_moves_nothing() {
        let mut b = GraphBuilder::new();
        b.add("s", "a", 1, 10).unwrap();
        b.add("a", "b", 0, 4).unwrap();
        b.add("a", "b", 2, 3).unwrap();
        let g = b.build();
        let edges = chain_edges(&g, &["s", "a", "b"]);
        let boundary = greedy_chain_boundary(&edges).unwrap();
        let plain: Vec<(i64, u64)> = boundary.iter().map(|&(t, q)| (t.0, q.raw())).collect();
        assert_eq!(plain, vec![(2, 3)]);
        // Cross-check against greedy on the full 3-vertex instance.
        let inst = instance_of(&g, "s", "b");
        assert_eq!(greedy_flow(&inst).value, Quantity::finite(3));
    }

    #[test]
    fn non_path_input_rejected() {
        let g = fixtures::toy_network();
        let e1 = g
            .edge(g.lookup("s").unwrap(), g.lookup("y").unwrap())
            .unwrap();
        let e2 = g
            .edge(g.lookup("z").unwrap(), g.lookup("t").unwrap())
            .unwrap();
        assert_eq!(
            greedy_chain_boundary(&[e1, e2]).unwrap_err(),
            GraphError::NotAPath
        );
    }

    #[test]
    fn cyclic_chain_keeps_endpoints_apart() {
        let g = fixtures::two_cycle_anchor();
        let edges = chain_edges(&g, &["a", "b", "a"]);
        let boundary = greedy_chain_boundary(&edges).unwrap();
        assert_eq!(boundary_total(&boundary), Quantity::finite(3));
    }
}
