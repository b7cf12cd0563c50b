//! Temporal graph data model: vertices, time-stamped edge series, adjacency.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::GraphError;
use crate::quantity::Quantity;

/// Signed integer tick. The interpretation (unix seconds, block height, ...)
/// is caller-defined; only the total order matters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Timestamp(pub i64);

/// Dense vertex id. External string names are interned to these.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

/// Stable id of a single interaction, assigned at graph construction in
/// input order. Same-timestamp ordering ties are broken by ascending id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct InteractionId(pub u64);

/// One timestamped quantity transfer on an edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Interaction {
    pub t: Timestamp,
    pub q: Quantity,
    pub id: InteractionId,
}

/// A directed edge together with its time-sorted interaction sequence.
///
/// Interactions are sorted ascending by `(t, id)`; ids encode input order so
/// equal-timestamp records keep their relative order.
#[derive(Clone, Debug)]
pub struct EdgeSeries {
    pub src: VertexId,
    pub dst: VertexId,
    pub interactions: Vec<Interaction>,
}

impl EdgeSeries {
    pub fn total_quantity(&self) -> Quantity {
        let mut acc = Quantity::ZERO;
        for i in &self.interactions {
            acc = acc.checked_add(i.q).unwrap_or(Quantity::INFINITE);
        }
        acc
    }
}

/// An interaction along with the edge it sits on, used when iterating the
/// whole graph in time order.
#[derive(Clone, Copy, Debug)]
pub struct LocatedInteraction {
    pub src: VertexId,
    pub dst: VertexId,
    pub t: Timestamp,
    pub q: Quantity,
    pub id: InteractionId,
}

/// Directed graph whose edges carry interaction sequences.
///
/// Immutable after construction; the mutating paths live in crate-internal
/// builders that finish with [`TemporalGraph::rebuild_adjacency`].
#[derive(Clone, Debug, Default)]
pub struct TemporalGraph {
    pub(crate) names: Vec<String>,
    pub(crate) vertices: BTreeSet<VertexId>,
    pub(crate) edges: BTreeMap<(VertexId, VertexId), EdgeSeries>,
    pub(crate) out_adj: HashMap<VertexId, Vec<VertexId>>,
    pub(crate) in_adj: HashMap<VertexId, Vec<VertexId>>,
    pub(crate) next_interaction_id: u64,
}

impl TemporalGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn interaction_count(&self) -> usize {
        self.edges.values().map(|e| e.interactions.len()).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeSeries> {
        self.edges.values()
    }

    pub fn edge(&self, src: VertexId, dst: VertexId) -> Option<&EdgeSeries> {
        self.edges.get(&(src, dst))
    }

    pub fn has_edge(&self, src: VertexId, dst: VertexId) -> bool {
        self.edges.contains_key(&(src, dst))
    }

    /// Outgoing neighbors, ascending by id.
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        self.out_adj.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Incoming neighbors, ascending by id.
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        self.in_adj.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_neighbors(v).len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_neighbors(v).len()
    }

    /// External name of a vertex.
    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<VertexId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    /// All interactions of the graph sorted by `(t, id)`.
    pub fn interactions_in_time_order(&self) -> Vec<LocatedInteraction> {
        let mut all: Vec<LocatedInteraction> = self
            .edges
            .values()
            .flat_map(|e| {
                e.interactions.iter().map(move |i| LocatedInteraction {
                    src: e.src,
                    dst: e.dst,
                    t: i.t,
                    q: i.q,
                    id: i.id,
                })
            })
            .collect();
        all.sort_by_key(|i| (i.t, i.id));
        all
    }

    /// Global min/max timestamps, `None` if there are no interactions.
    pub fn time_range(&self) -> Option<(Timestamp, Timestamp)> {
        let mut range: Option<(Timestamp, Timestamp)> = None;
        for e in self.edges.values() {
            for i in &e.interactions {
                range = Some(match range {
                    None => (i.t, i.t),
                    Some((lo, hi)) => (lo.min(i.t), hi.max(i.t)),
                });
            }
        }
        range
    }

    /// Kahn topological order, ties broken by ascending vertex id.
    pub fn topological_order(&self) -> Result<Vec<VertexId>, GraphError> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        let mut indeg: BTreeMap<VertexId, usize> =
            self.vertices.iter().map(|&v| (v, self.in_degree(v))).collect();
        let mut ready: BinaryHeap<Reverse<VertexId>> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&v, _)| Reverse(v))
            .collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &u in self.out_neighbors(v) {
                let d = indeg.get_mut(&u).expect("adjacency consistent");
                *d -= 1;
                if *d == 0 {
                    ready.push(Reverse(u));
                }
            }
        }
        if order.len() != self.vertices.len() {
            return Err(GraphError::CycleDetected);
        }
        Ok(order)
    }

    pub fn is_dag(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Undirected connected component containing `start`.
    pub fn undirected_component(&self, start: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        if !self.vertices.contains(&start) {
            return seen;
        }
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for &u in self.out_neighbors(v).iter().chain(self.in_neighbors(v)) {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen
    }

    pub(crate) fn fresh_interaction_id(&mut self) -> InteractionId {
        let id = InteractionId(self.next_interaction_id);
        self.next_interaction_id += 1;
        id
    }

    /// Recompute vertex set and adjacency lists from the edge map, keeping
    /// explicitly retained isolated vertices.
    pub(crate) fn rebuild_adjacency(&mut self) {
        self.out_adj.clear();
        self.in_adj.clear();
        for &(src, dst) in self.edges.keys() {
            self.vertices.insert(src);
            self.vertices.insert(dst);
            self.out_adj.entry(src).or_default().push(dst);
            self.in_adj.entry(dst).or_default().push(src);
        }
        for list in self.out_adj.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        for list in self.in_adj.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
    }

    /// Full rebuild-and-compare adjacency check.
    pub fn adjacency_consistent(&self) -> bool {
        let mut copy = self.clone();
        copy.rebuild_adjacency();
        copy.out_adj == self.out_adj && copy.in_adj == self.in_adj && copy.vertices == self.vertices
    }

    /// Copy of this graph keeping only the given edges (with their full
    /// interaction sequences) and the vertices they touch.
    pub fn edge_subgraph(&self, keep: &BTreeSet<(VertexId, VertexId)>) -> TemporalGraph {
        let mut g = TemporalGraph {
            names: self.names.clone(),
            vertices: BTreeSet::new(),
            edges: self
                .edges
                .iter()
                .filter(|(k, _)| keep.contains(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            out_adj: HashMap::new(),
            in_adj: HashMap::new(),
            next_interaction_id: self.next_interaction_id,
        };
        g.rebuild_adjacency();
        g
    }
}

impl fmt::Display for TemporalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices, {} edges, {} interactions",
            self.vertex_count(),
            self.edge_count(),
            self.interaction_count()
        )
    }
}

/// Incremental construction of a [`TemporalGraph`]. Records for the same
/// ordered vertex pair are merged into one series; insertion order is the
/// tiebreak key for equal timestamps.
#[derive(Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    by_name: HashMap<String, VertexId>,
    edges: BTreeMap<(VertexId, VertexId), Vec<Interaction>>,
    extra_vertices: BTreeSet<VertexId>,
    next_id: u64,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> VertexId {
        if let Some(&v) = self.by_name.get(name) {
            return v;
        }
        let v = VertexId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), v);
        self.extra_vertices.insert(v);
        v
    }

    /// Add one interaction record. Self-loops are rejected.
    pub fn add(
        &mut self,
        src: &str,
        dst: &str,
        t: i64,
        q: u64,
    ) -> Result<InteractionId, GraphError> {
        if src == dst {
            return Err(GraphError::SelfLoop { line: 0 });
        }
        let q = Quantity::new(q)?;
        let s = self.intern(src);
        let d = self.intern(dst);
        let id = InteractionId(self.next_id);
        self.next_id += 1;
        self.edges.entry((s, d)).or_default().push(Interaction {
            t: Timestamp(t),
            q,
            id,
        });
        Ok(id)
    }

    pub fn build(self) -> TemporalGraph {
        let mut g = TemporalGraph {
            names: self.names,
            vertices: self.extra_vertices,
            edges: self
                .edges
                .into_iter()
                .map(|((src, dst), mut interactions)| {
                    interactions.sort_by_key(|i| (i.t, i.id));
                    ((src, dst), EdgeSeries { src, dst, interactions })
                })
                .collect(),
            out_adj: HashMap::new(),
            in_adj: HashMap::new(),
            next_interaction_id: self.next_id,
        };
        g.rebuild_adjacency();
        g
    }
}
