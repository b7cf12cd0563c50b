//! Exact maximum temporal flow.
//!
//! The production path converts the instance into a time-expanded static
//! network (one node per vertex/time-slot, holdover arcs for buffering, one
//! capacitated arc per interaction) and runs an augmenting-path solver on
//! it. An independent LP formulation lives in [`lp`] and doubles as a
//! verification oracle.

pub mod lp;

use std::collections::BTreeMap;

use crate::analysis::{greedy_soluble, preprocess, simplify, ReductionReport};
use crate::error::GraphError;
use crate::graph::{InteractionId, Timestamp, VertexId};
use crate::greedy::{greedy_flow, FlowResult, Method};
use crate::instance::FlowInstance;
use crate::quantity::Quantity;

pub use lp::{build_lp, emit_cplex_lp, solve_lp, LpModel, LpSolution};

/// What a time-expanded arc stands for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArcOrigin {
    /// Carries the transfer of one original interaction.
    Interaction(InteractionId),
    /// Buffering at a vertex between consecutive time slots.
    Holdover,
    /// Super-source / super-sink plumbing.
    Super,
}

#[derive(Clone, Copy, Debug)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: Quantity,
    pub origin: ArcOrigin,
}

/// Static flow network equivalent to the temporal instance: node per
/// (vertex, time slot), acyclic by construction since interaction arcs
/// depart from the latest slot strictly before their timestamp.
#[derive(Clone, Debug)]
pub struct TimeExpandedNetwork {
    /// `(vertex, slot index)` per node; the two super nodes come last.
    pub nodes: Vec<(VertexId, usize)>,
    pub arcs: Vec<Arc>,
    pub super_source: usize,
    pub super_sink: usize,
}

/// Build the time-expanded network of an instance. Cycles in the input are
/// fine; the expansion is acyclic regardless.
pub fn build_time_expanded(instance: &FlowInstance) -> TimeExpandedNetwork {
    let g = &instance.graph;
    // Distinct incident timestamps per vertex (source excluded: it draws
    // from the super-source directly and has no incoming edges).
    let mut slot_times: BTreeMap<VertexId, Vec<Timestamp>> = BTreeMap::new();
    for e in g.edges() {
        for i in &e.interactions {
            for v in [e.src, e.dst] {
                if v != instance.source {
                    slot_times.entry(v).or_default().push(i.t);
                }
            }
        }
    }
    for times in slot_times.values_mut() {
        times.sort_unstable();
        times.dedup();
    }

    let mut nodes = Vec::new();
    let mut node_of: BTreeMap<(VertexId, usize), usize> = BTreeMap::new();
    for (&v, times) in &slot_times {
        for slot in 0..times.len() {
            node_of.insert((v, slot), nodes.len());
            nodes.push((v, slot));
        }
    }
    let super_source = nodes.len();
    nodes.push((instance.source, 0));
    let super_sink = nodes.len();
    nodes.push((instance.sink, usize::MAX));

    let mut arcs = Vec::new();
    // Holdover arcs forward along each vertex's slot order.
    for (&v, times) in &slot_times {
        for slot in 1..times.len() {
            arcs.push(Arc {
                from: node_of[&(v, slot - 1)],
                to: node_of[&(v, slot)],
                capacity: Quantity::INFINITE,
                origin: ArcOrigin::Holdover,
            });
        }
    }
    // One arc per interaction.
    for e in g.edges() {
        for i in &e.interactions {
            let head_slot = slot_times[&e.dst]
                .binary_search(&i.t)
                .expect("incident time has a slot");
            let head = node_of[&(e.dst, head_slot)];
            let tail = if e.src == instance.source {
                Some(super_source)
            } else {
                // Latest slot strictly before t; none means the tail vertex
                // cannot have received anything yet and the arc is dropped
                // (the transfer is forced to 0).
                match slot_times[&e.src].partition_point(|&ts| ts < i.t) {
                    0 => None,
                    p => Some(node_of[&(e.src, p - 1)]),
                }
            };
            if let Some(tail) = tail {
                arcs.push(Arc {
                    from: tail,
                    to: head,
                    capacity: i.q,
                    origin: ArcOrigin::Interaction(i.id),
                });
            }
        }
    }
    // Drain every sink slot into the super-sink.
    if let Some(times) = slot_times.get(&instance.sink) {
        for slot in 0..times.len() {
            arcs.push(Arc {
                from: node_of[&(instance.sink, slot)],
                to: super_sink,
                capacity: Quantity::INFINITE,
                origin: ArcOrigin::Super,
            });
        }
    }
    TimeExpandedNetwork {
        nodes,
        arcs,
        super_source,
        super_sink,
    }
}

/// Dinic's algorithm over the expanded network. INFINITE capacities are
/// replaced internally by one more than the sum of finite capacities,
/// which exceeds any s-t cut.
pub fn max_flow_static(net: &TimeExpandedNetwork) -> FlowResult {
    let finite_sum: u64 = net
        .arcs
        .iter()
        .filter_map(|a| a.capacity.as_finite())
        .fold(0u64, |acc, c| acc.saturating_add(c));
    let cap_inf = finite_sum.saturating_add(1);
    debug_assert!(
        !has_all_infinite_path(net),
        "every super-source to super-sink path must cross a finite arc"
    );

    let mut dinic = Dinic::new(net.nodes.len());
    let mut arc_slots = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        let cap = a.capacity.as_finite().unwrap_or(cap_inf);
        arc_slots.push(dinic.add_edge(a.from, a.to, cap));
    }
    let value = dinic.max_flow(net.super_source, net.super_sink);

    let mut transfers = BTreeMap::new();
    for (a, &slot) in net.arcs.iter().zip(&arc_slots) {
        if let ArcOrigin::Interaction(id) = a.origin {
            let flow = dinic.flow_of(slot);
            transfers.insert(id, Quantity::finite(flow));
        }
    }
    FlowResult {
        value: Quantity::finite(value),
        transfers,
        method: Method::MaxflowExpanded,
    }
}

fn has_all_infinite_path(net: &TimeExpandedNetwork) -> bool {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); net.nodes.len()];
    for a in &net.arcs {
        if a.capacity.is_infinite() {
            adj[a.from].push(a.to);
        }
    }
    let mut seen = vec![false; net.nodes.len()];
    let mut stack = vec![net.super_source];
    seen[net.super_source] = true;
    while let Some(v) = stack.pop() {
        if v == net.super_sink {
            return true;
        }
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    false
}

#[derive(Clone)]
struct DinicEdge {
    to: usize,
    cap: u64,
    rev: usize,
}

struct Dinic {
    graph: Vec<Vec<DinicEdge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Returns `(node, index)` of the forward edge so its flow can be read
    /// back after the run.
    fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> (usize, usize, u64) {
        let fwd = self.graph[from].len();
        let rev = self.graph[to].len();
        self.graph[from].push(DinicEdge { to, cap, rev });
        self.graph[to].push(DinicEdge {
            to: from,
            cap: 0,
            rev: fwd,
        });
        (from, fwd, cap)
    }

    fn flow_of(&self, slot: (usize, usize, u64)) -> u64 {
        let (node, idx, orig) = slot;
        orig - self.graph[node][idx].cap
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, upto: u64) -> u64 {
        if v == t {
            return upto;
        }
        while self.iter[v] < self.graph[v].len() {
            let i = self.iter[v];
            let (to, cap, rev) = {
                let e = &self.graph[v][i];
                (e.to, e.cap, e.rev)
            };
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, upto.min(cap));
                if d > 0 {
                    self.graph[v][i].cap -= d;
                    self.graph[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut flow = 0u64;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

/// The compared solution strategies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Direct exact solve on the time-expanded network.
    Lp,
    /// Solubility test, then preprocessing, then exact solve if needed.
    Pre,
    /// `Pre` plus source-chain simplification before the exact solve.
    PreSim,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lp" => Ok(Strategy::Lp),
            "pre" => Ok(Strategy::Pre),
            "presim" => Ok(Strategy::PreSim),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

fn zero_result() -> FlowResult {
    FlowResult {
        value: Quantity::ZERO,
        transfers: BTreeMap::new(),
        method: Method::MaxflowExpanded,
    }
}

/// Exact maximum flow under the chosen strategy. All strategies return the
/// same value; only the work performed differs.
pub fn max_flow(
    instance: &FlowInstance,
    strategy: Strategy,
) -> Result<(FlowResult, ReductionReport), GraphError> {
    if instance.zero_flow {
        return Ok((zero_result(), ReductionReport::default()));
    }
    match strategy {
        Strategy::Lp => {
            let net = build_time_expanded(instance);
            Ok((max_flow_static(&net), ReductionReport::default()))
        }
        Strategy::Pre | Strategy::PreSim => {
            if greedy_soluble(instance) {
                return Ok((greedy_flow(instance), ReductionReport::default()));
            }
            // Preprocessing is defined on DAGs only; cyclic instances fall
            // through (simplify still applies for PreSim).
            let (reduced, mut report) = if instance.graph.is_dag() {
                preprocess(instance)?
            } else {
                (instance.clone(), ReductionReport::default())
            };
            if report.became_trivial {
                return Ok((zero_result(), report));
            }
            if report.edges_removed > 0 || report.vertices_removed > 0 {
                if greedy_soluble(&reduced) {
                    return Ok((greedy_flow(&reduced), report));
                }
            }
            let solve_on = if strategy == Strategy::PreSim {
                let (simplified, sim_report) = simplify(&reduced);
                report = report.merge(sim_report);
                simplified
            } else {
                reduced
            };
            let net = build_time_expanded(&solve_on);
            Ok((max_flow_static(&net), report))
        }
    }
}
