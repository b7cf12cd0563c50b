//! Flow patterns: labeled DAG templates, instance enumeration (direct
//! graph browsing and path-table merge-join), and per-instance flow.
//!
//! Pattern text format: one edge per line, `token -> token`. A token is a
//! label optionally followed by `.suffix`; tokens denote pattern vertices,
//! the part before the dot is the label. Two vertices sharing a label must
//! map to the same graph vertex, so `a.1 -> b`, `b -> a.2` describes the
//! 2-hop cycle through `a`. Distinct labels must map to distinct vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Read as _, Write as _};
use std::path::Path;

use crate::error::GraphError;
use crate::graph::{TemporalGraph, Timestamp, VertexId};
use crate::greedy::{boundary_total, greedy_chain_boundary, Boundary, FlowResult};
use crate::instance::normalize;
use crate::maxflow::{max_flow, Strategy};
use crate::quantity::Quantity;

/// A labeled DAG template for flow-motif matching.
#[derive(Clone, Debug)]
pub struct Pattern {
    /// Full tokens, one per pattern vertex, in first-appearance order.
    tokens: Vec<String>,
    /// Label per pattern vertex (token up to the first `.`).
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    topo: Vec<usize>,
    source: usize,
    sink: usize,
    // The merged label graph: one node per distinct label, edge set the
    // image of the pattern edges. Enumeration runs on this graph.
    label_names: Vec<String>,
    label_of_vertex: Vec<usize>,
    label_edges: BTreeSet<(usize, usize)>,
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern, GraphError> {
        let mut tokens: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut edges = Vec::new();
        let intern = |tokens: &mut Vec<String>, index: &mut BTreeMap<String, usize>, tok: &str| {
            *index.entry(tok.to_string()).or_insert_with(|| {
                tokens.push(tok.to_string());
                tokens.len() - 1
            })
        };
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((lhs, rhs)) = line.split_once("->") else {
                return Err(GraphError::BadPattern(format!(
                    "line {}: expected `token -> token`",
                    ln + 1
                )));
            };
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            if lhs.is_empty() || rhs.is_empty() {
                return Err(GraphError::BadPattern(format!("line {}: empty token", ln + 1)));
            }
            let u = intern(&mut tokens, &mut index, lhs);
            let v = intern(&mut tokens, &mut index, rhs);
            if u == v {
                return Err(GraphError::BadPattern(format!(
                    "line {}: self-loop on `{lhs}`",
                    ln + 1
                )));
            }
            if !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
        if edges.is_empty() {
            return Err(GraphError::BadPattern("pattern has no edges".into()));
        }
        let labels: Vec<String> = tokens
            .iter()
            .map(|t| t.split('.').next().unwrap().to_string())
            .collect();
        for &(u, v) in &edges {
            if labels[u] == labels[v] {
                return Err(GraphError::BadPattern(format!(
                    "edge between two vertices labeled `{}` can never match (self-loop)",
                    labels[u]
                )));
            }
        }
        let n = tokens.len();
        let topo = topo_order(n, &edges)
            .ok_or_else(|| GraphError::BadPattern("pattern contains a cycle".into()))?;
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for &(u, v) in &edges {
            outdeg[u] += 1;
            indeg[v] += 1;
        }
        let sources: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let sinks: Vec<usize> = (0..n).filter(|&v| outdeg[v] == 0).collect();
        let [source] = sources[..] else {
            return Err(GraphError::BadPattern(format!(
                "pattern must have exactly one in-degree-0 vertex, found {}",
                sources.len()
            )));
        };
        let [sink] = sinks[..] else {
            return Err(GraphError::BadPattern(format!(
                "pattern must have exactly one out-degree-0 vertex, found {}",
                sinks.len()
            )));
        };

        let mut label_names: Vec<String> = Vec::new();
        let mut label_index: BTreeMap<String, usize> = BTreeMap::new();
        let mut label_of_vertex = Vec::with_capacity(n);
        for l in &labels {
            let idx = *label_index.entry(l.clone()).or_insert_with(|| {
                label_names.push(l.clone());
                label_names.len() - 1
            });
            label_of_vertex.push(idx);
        }
        let label_edges: BTreeSet<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| (label_of_vertex[u], label_of_vertex[v]))
            .collect();
        Ok(Pattern {
            tokens,
            labels,
            edges,
            topo,
            source,
            sink,
            label_names,
            label_of_vertex,
            label_edges,
        })
    }

    pub fn load(path: &Path) -> Result<Pattern, GraphError> {
        let text = std::fs::read_to_string(path)?;
        Pattern::parse(&text)
    }

    pub fn source_label(&self) -> &str {
        &self.labels[self.source]
    }

    pub fn sink_label(&self) -> &str {
        &self.labels[self.sink]
    }

    pub fn vertex_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    /// Distinct labels in the order enumeration binds them: first
    /// appearance along the pattern's topological order.
    fn label_binding_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.label_names.len()];
        let mut order = Vec::new();
        for &v in &self.topo {
            let l = self.label_of_vertex[v];
            if !seen[l] {
                seen[l] = true;
                order.push(l);
            }
        }
        order
    }
}

fn topo_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        out[u].push(v);
        indeg[v] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = ready.iter().next() {
        ready.remove(&v);
        order.push(v);
        for &u in &out[v] {
            indeg[u] -= 1;
            if indeg[u] == 0 {
                ready.insert(u);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// One match: an injective assignment of distinct labels to graph vertices
/// such that every pattern edge exists between the images.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PatternInstance {
    /// Graph vertex per distinct label, indexed like `Pattern::label_names`.
    pub mu: Vec<VertexId>,
}

impl PatternInstance {
    pub fn bindings<'p>(&self, pattern: &'p Pattern) -> Vec<(&'p str, VertexId)> {
        pattern
            .label_names
            .iter()
            .map(|n| n.as_str())
            .zip(self.mu.iter().copied())
            .collect()
    }

    /// The graph edges the instance's subgraph consists of.
    pub fn edge_image(&self, pattern: &Pattern) -> BTreeSet<(VertexId, VertexId)> {
        pattern
            .label_edges
            .iter()
            .map(|&(a, b)| (self.mu[a], self.mu[b]))
            .collect()
    }
}

/// Direct backtracking enumeration. Labels are bound in topological
/// first-appearance order; every pattern edge whose endpoints are both
/// bound is checked immediately, so emitted instances are exactly the
/// valid ones and each appears once.
pub fn enumerate_gb(graph: &TemporalGraph, pattern: &Pattern) -> Vec<PatternInstance> {
    let order = pattern.label_binding_order();
    let nl = pattern.label_names.len();
    let mut mu: Vec<Option<VertexId>> = vec![None; nl];
    let mut out = Vec::new();
    gb_rec(graph, pattern, &order, 0, &mut mu, &mut out);
    out.sort();
    out
}

fn gb_rec(
    graph: &TemporalGraph,
    pattern: &Pattern,
    order: &[usize],
    depth: usize,
    mu: &mut Vec<Option<VertexId>>,
    out: &mut Vec<PatternInstance>,
) {
    if depth == order.len() {
        out.push(PatternInstance {
            mu: mu.iter().map(|b| b.unwrap()).collect(),
        });
        return;
    }
    let label = order[depth];
    // Narrow the candidate set through any already-bound neighbor.
    let mut candidates: Option<BTreeSet<VertexId>> = None;
    for &(a, b) in &pattern.label_edges {
        let narrowed: Option<BTreeSet<VertexId>> = if b == label {
            mu[a].map(|va| graph.out_neighbors(va).iter().copied().collect())
        } else if a == label {
            mu[b].map(|vb| graph.in_neighbors(vb).iter().copied().collect())
        } else {
            None
        };
        if let Some(set) = narrowed {
            candidates = Some(match candidates {
                None => set,
                Some(cur) => cur.intersection(&set).copied().collect(),
            });
        }
    }
    let candidates = candidates.unwrap_or_else(|| graph.vertices().collect());
    'cand: for v in candidates {
        if mu.iter().any(|b| *b == Some(v)) {
            continue; // distinct labels, distinct vertices
        }
        for &(a, b) in &pattern.label_edges {
            let (ma, mb) = match (a == label, b == label) {
                (true, _) => (Some(v), mu[b]),
                (_, true) => (mu[a], Some(v)),
                _ => continue,
            };
            if let (Some(x), Some(y)) = (ma, mb) {
                if graph.edge(x, y).is_none() {
                    continue 'cand;
                }
            }
        }
        mu[label] = Some(v);
        gb_rec(graph, pattern, order, depth + 1, mu, out);
        mu[label] = None;
    }
}

/// One precomputed path: its vertex sequence and the boundary sequence a
/// greedy replay of the path produces at its last edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathRecord {
    pub vertices: Vec<VertexId>,
    pub boundary: Boundary,
}

/// All k-hop paths of a graph, sorted lexicographically by vertex sequence.
#[derive(Clone, Debug)]
pub struct PathTable {
    pub k: usize,
    pub cyclic: bool,
    pub rows: Vec<PathRecord>,
}

const TABLE_MAGIC: &str = "tempoflow-paths v1";

impl PathTable {
    /// Rows whose path starts at `v` (contiguous thanks to the sort).
    pub fn rows_from(&self, v: VertexId) -> &[PathRecord] {
        let lo = self.rows.partition_point(|r| r.vertices[0] < v);
        let hi = self.rows.partition_point(|r| r.vertices[0] <= v);
        &self.rows[lo..hi]
    }

    pub fn save(&self, path: &Path) -> Result<(), GraphError> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(
            w,
            "{TABLE_MAGIC} k={} cyclic={} rows={}",
            self.k,
            self.cyclic,
            self.rows.len()
        )?;
        for r in &self.rows {
            for v in &r.vertices {
                w.write_all(&v.0.to_le_bytes())?;
            }
            w.write_all(&(r.boundary.len() as u32).to_le_bytes())?;
            for &(t, q) in &r.boundary {
                w.write_all(&t.0.to_le_bytes())?;
                w.write_all(&q.raw().to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<PathTable, GraphError> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut header = String::new();
        r.read_line(&mut header)?;
        let bad = |m: &str| GraphError::BadTableFile(m.to_string());
        let rest = header
            .trim_end()
            .strip_prefix(TABLE_MAGIC)
            .ok_or_else(|| bad("bad magic"))?;
        let mut k = None;
        let mut cyclic = None;
        let mut count = None;
        for field in rest.split_whitespace() {
            match field.split_once('=') {
                Some(("k", v)) => k = v.parse::<usize>().ok(),
                Some(("cyclic", v)) => cyclic = v.parse::<bool>().ok(),
                Some(("rows", v)) => count = v.parse::<usize>().ok(),
                _ => return Err(bad("unknown header field")),
            }
        }
        let (k, cyclic, count) = match (k, cyclic, count) {
            (Some(k), Some(c), Some(n)) => (k, c, n),
            _ => return Err(bad("incomplete header")),
        };
        let mut rows = Vec::with_capacity(count);
        let mut u32buf = [0u8; 4];
        let mut u64buf = [0u8; 8];
        for _ in 0..count {
            let mut vertices = Vec::with_capacity(k + 1);
            for _ in 0..k + 1 {
                r.read_exact(&mut u32buf).map_err(|_| bad("truncated row"))?;
                vertices.push(VertexId(u32::from_le_bytes(u32buf)));
            }
            r.read_exact(&mut u32buf).map_err(|_| bad("truncated row"))?;
            let blen = u32::from_le_bytes(u32buf) as usize;
            let mut boundary = Vec::with_capacity(blen);
            for _ in 0..blen {
                r.read_exact(&mut u64buf).map_err(|_| bad("truncated row"))?;
                let t = Timestamp(i64::from_le_bytes(u64buf));
                r.read_exact(&mut u64buf).map_err(|_| bad("truncated row"))?;
                boundary.push((t, Quantity::finite(u64::from_le_bytes(u64buf))));
            }
            rows.push(PathRecord { vertices, boundary });
        }
        if r.read(&mut u32buf).map_err(|_| bad("io"))? != 0 {
            return Err(bad("trailing bytes"));
        }
        Ok(PathTable { k, cyclic, rows })
    }
}

/// Enumerate all k-hop paths and their boundaries. Cyclic tables keep only
/// paths whose first and last vertex coincide (interior vertices distinct);
/// non-cyclic tables keep paths with all k+1 vertices distinct. Rows with
/// an empty boundary are retained: a zero-flow path still witnesses
/// structure.
pub fn precompute_paths(graph: &TemporalGraph, k: usize, cyclic: bool) -> PathTable {
    assert!(k >= 1, "paths need at least one hop");
    let mut rows = Vec::new();
    for start in graph.vertices() {
        let mut path = vec![start];
        walk(graph, k, cyclic, &mut path, &mut rows);
    }
    rows.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    PathTable { k, cyclic, rows }
}

fn walk(
    graph: &TemporalGraph,
    k: usize,
    cyclic: bool,
    path: &mut Vec<VertexId>,
    rows: &mut Vec<PathRecord>,
) {
    if path.len() == k + 1 {
        let closes = path[0] == path[k];
        if closes == cyclic {
            let edges: Vec<_> = path
                .windows(2)
                .map(|w| graph.edge(w[0], w[1]).expect("walked edge"))
                .collect();
            let boundary = greedy_chain_boundary(&edges).expect("contiguous path");
            rows.push(PathRecord {
                vertices: path.clone(),
                boundary,
            });
        }
        return;
    }
    let last = *path.last().unwrap();
    let at_final_hop = path.len() == k;
    for &next in graph.out_neighbors(last) {
        let closing = next == path[0];
        if closing && !(cyclic && at_final_hop) {
            continue;
        }
        if !closing && path[1..].contains(&next) {
            continue;
        }
        path.push(next);
        walk(graph, k, cyclic, path, rows);
        path.pop();
    }
}

/// Whether a PB enumeration was answered purely from tables or needed the
/// graph for some chains.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Coverage {
    Full,
    Partial,
}

/// A maximal junction-free walk through the merged label graph.
struct Chain {
    labels: Vec<usize>,
}

/// Decompose the label graph into chains between junction labels (labels
/// whose in- or out-degree differs from 1). Junction-free cycles take
/// their smallest label as the junction. Every label edge lands in exactly
/// one chain.
fn chain_decomposition(pattern: &Pattern) -> Vec<Chain> {
    let nl = pattern.label_names.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nl];
    let mut indeg = vec![0usize; nl];
    for &(a, b) in &pattern.label_edges {
        out[a].push(b);
        indeg[b] += 1;
    }
    let is_junction =
        |l: usize| -> bool { out[l].len() != 1 || indeg[l] != 1 };
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut chains = Vec::new();
    let mut starts: Vec<usize> = (0..nl).filter(|&l| is_junction(l)).collect();
    // Junction-free components are pure cycles; seed them from their
    // smallest member.
    starts.extend(0..nl);
    for s in starts {
        let firsts: Vec<usize> = out[s].clone();
        for f in firsts {
            if used.contains(&(s, f)) {
                continue;
            }
            let mut labels = vec![s, f];
            used.insert((s, f));
            let mut cur = f;
            while !is_junction(cur) && cur != s {
                let next = out[cur][0];
                if used.contains(&(cur, next)) {
                    break;
                }
                used.insert((cur, next));
                labels.push(next);
                cur = next;
            }
            chains.push(Chain { labels });
        }
    }
    chains
}

/// Merge-join enumeration over precomputed path tables. The pattern's
/// label graph is decomposed into chains; each chain is answered from a
/// table of matching hop count and cyclicity when one exists, and by
/// walking the graph otherwise. The instance set is identical to
/// [`enumerate_gb`]. Errors when no chain can be served by any table.
pub fn enumerate_pb(
    graph: &TemporalGraph,
    pattern: &Pattern,
    tables: &[PathTable],
) -> Result<(Vec<PatternInstance>, Coverage), GraphError> {
    let chains = chain_decomposition(pattern);
    let mut backed = vec![false; chains.len()];
    for (ci, chain) in chains.iter().enumerate() {
        let hops = chain.labels.len() - 1;
        let cyclic = chain.labels[0] == chain.labels[hops];
        backed[ci] = tables.iter().any(|t| t.k == hops && t.cyclic == cyclic);
    }
    if !backed.iter().any(|&b| b) {
        return Err(GraphError::NoUsableTable);
    }
    let coverage = if backed.iter().all(|&b| b) {
        Coverage::Full
    } else {
        Coverage::Partial
    };

    let nl = pattern.label_names.len();
    let mut mu: Vec<Option<VertexId>> = vec![None; nl];
    let mut out = Vec::new();
    pb_rec(graph, pattern, &chains, tables, 0, &mut mu, &mut out);
    out.sort();
    out.dedup();
    Ok((out, coverage))
}

fn pb_rec(
    graph: &TemporalGraph,
    pattern: &Pattern,
    chains: &[Chain],
    tables: &[PathTable],
    ci: usize,
    mu: &mut Vec<Option<VertexId>>,
    out: &mut Vec<PatternInstance>,
) {
    if ci == chains.len() {
        out.push(PatternInstance {
            mu: mu.iter().map(|b| b.unwrap()).collect(),
        });
        return;
    }
    let chain = &chains[ci];
    let hops = chain.labels.len() - 1;
    let cyclic = chain.labels[0] == chain.labels[hops];
    let table = tables.iter().find(|t| t.k == hops && t.cyclic == cyclic);
    let candidate_rows: Vec<Vec<VertexId>> = match table {
        Some(t) => match mu[chain.labels[0]] {
            Some(v) => t.rows_from(v).iter().map(|r| r.vertices.clone()).collect(),
            None => t.rows.iter().map(|r| r.vertices.clone()).collect(),
        },
        None => {
            // No table for this shape: walk the graph for the same rows.
            let tmp = precompute_paths(graph, hops, cyclic);
            match mu[chain.labels[0]] {
                Some(v) => tmp.rows_from(v).iter().map(|r| r.vertices.clone()).collect(),
                None => tmp.rows.into_iter().map(|r| r.vertices).collect(),
            }
        }
    };
    'row: for row in candidate_rows {
        // Bind the row onto the chain's labels, respecting existing
        // bindings and label injectivity.
        let mut newly: Vec<usize> = Vec::new();
        for (pos, &l) in chain.labels.iter().enumerate() {
            let v = row[pos];
            match mu[l] {
                Some(bound) if bound != v => {
                    for &n in &newly {
                        mu[n] = None;
                    }
                    continue 'row;
                }
                Some(_) => {}
                None => {
                    if mu.iter().any(|b| *b == Some(v)) {
                        for &n in &newly {
                            mu[n] = None;
                        }
                        continue 'row;
                    }
                    mu[l] = Some(v);
                    newly.push(l);
                }
            }
        }
        pb_rec(graph, pattern, chains, tables, ci + 1, mu, out);
        for &n in &newly {
            mu[n] = None;
        }
    }
}

/// Flow through one pattern instance.
///
/// When the pattern is a bundle of source-to-sink chains that only share
/// their endpoints, each chain reduces independently to its boundary
/// sequence and the value is the sum of boundary totals. Any other shape
/// is solved exactly on the merged subgraph.
pub fn instance_flow(
    graph: &TemporalGraph,
    pattern: &Pattern,
    instance: &PatternInstance,
) -> Result<FlowResult, GraphError> {
    let keep = instance.edge_image(pattern);
    let sub = graph.edge_subgraph(&keep);
    let src_label = pattern.label_of_vertex[pattern.source];
    let snk_label = pattern.label_of_vertex[pattern.sink];

    let chains = chain_decomposition(pattern);
    let parallel_bundle = chains
        .iter()
        .all(|c| c.labels[0] == src_label && *c.labels.last().unwrap() == snk_label);
    if parallel_bundle {
        let mut total = Quantity::ZERO;
        for c in &chains {
            let edges: Vec<_> = c
                .labels
                .windows(2)
                .map(|w| {
                    sub.edge(instance.mu[w[0]], instance.mu[w[1]])
                        .expect("instance edge present")
                })
                .collect();
            let boundary = greedy_chain_boundary(&edges)?;
            total = total
                .checked_add(boundary_total(&boundary))
                .map_err(|_| GraphError::QuantityOverflow)?;
        }
        return Ok(FlowResult {
            value: total,
            transfers: BTreeMap::new(),
            method: crate::greedy::Method::Greedy,
        });
    }
    let srcs = [instance.mu[src_label]].into_iter().collect();
    let snks = [instance.mu[snk_label]].into_iter().collect();
    let inst = normalize(&sub, &srcs, &snks)?;
    let (res, _) = max_flow(&inst, Strategy::PreSim)?;
    Ok(res)
}

/// An anchor linked to itself by parallel k-hop cycles, at least
/// `min_paths` of them.
#[derive(Clone, Copy, Debug)]
pub struct RelaxedPattern {
    pub hops: usize,
    pub min_paths: usize,
}

/// Group the cyclic k-hop table by anchor; per anchor, keep a maximal set
/// of cycles with pairwise-distinct interiors (greedily in table order)
/// and sum their boundary totals. Anchors below `min_paths` are dropped.
pub fn enumerate_nonrigid(
    graph: &TemporalGraph,
    rp: RelaxedPattern,
    tables: &[PathTable],
) -> Result<Vec<(VertexId, usize, Quantity)>, GraphError> {
    assert!(rp.min_paths >= 1);
    let table = tables
        .iter()
        .find(|t| t.cyclic && t.k == rp.hops)
        .ok_or(GraphError::NoUsableTable)?;
    let mut out = Vec::new();
    for anchor in graph.vertices() {
        let rows = table.rows_from(anchor);
        let mut used_interiors: BTreeSet<VertexId> = BTreeSet::new();
        let mut count = 0usize;
        let mut total = Quantity::ZERO;
        for r in rows {
            let interior = &r.vertices[1..rp.hops];
            if interior.iter().any(|v| used_interiors.contains(v)) {
                continue;
            }
            used_interiors.extend(interior.iter().copied());
            count += 1;
            total = total
                .checked_add(boundary_total(&r.boundary))
                .map_err(|_| GraphError::QuantityOverflow)?;
        }
        if count >= rp.min_paths {
            out.push((anchor, count, total));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::GraphBuilder;

    fn names(g: &TemporalGraph, inst: &PatternInstance, p: &Pattern) -> Vec<(String, String)> {
        inst.bindings(p)
            .into_iter()
            .map(|(l, v)| (l.to_string(), g.name(v).to_string()))
            .collect()
    }

    #[test]
    fn cycle_pattern_parses() {
        let p = Pattern::parse("a.1 -> b\nb -> c\nc -> a.2\n").unwrap();
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.label_count(), 3);
        assert_eq!(p.source_label(), "a");
        assert_eq!(p.sink_label(), "a");
    }

    #[test]
    fn bad_patterns_rejected() {
        assert!(Pattern::parse("").is_err());
        assert!(Pattern::parse("a -> a").is_err());
        assert!(Pattern::parse("a.1 -> a.2").is_err());
        // Two sources.
        assert!(Pattern::parse("a -> c\nb -> c").is_err());
        // Cycle among pattern vertices.
        assert!(Pattern::parse("a -> b\nb -> a").is_err());
        assert!(Pattern::parse("a b").is_err());
    }

    #[test]
    fn three_cycle_has_unique_instance() {
        let g = fixtures::cycle_network();
        let p = Pattern::parse("a.1 -> b\nb -> c\nc -> a.2\n").unwrap();
        let found = enumerate_gb(&g, &p);
        // Three rotations: each of u1, u2, u3 can play the anchor.
        assert_eq!(found.len(), 3);
        let anchored: Vec<_> = found
            .iter()
            .filter(|i| {
                names(&g, i, &p)
                    .iter()
                    .any(|(l, n)| l == "a" && n == "u1")
            })
            .cloned()
            .collect();
        assert_eq!(anchored.len(), 1);
        let b = names(&g, &anchored[0], &p);
        assert!(b.contains(&("b".into(), "u2".into())));
        assert!(b.contains(&("c".into(), "u3".into())));
    }

    #[test]
    fn single_edge_pattern_matches_every_edge() {
        let g = fixtures::toy_network();
        let p = Pattern::parse("a -> b").unwrap();
        assert_eq!(enumerate_gb(&g, &p).len(), g.edge_count());
    }

    /// Exhaustive injective-mapping oracle for small graphs.
    fn brute_force(g: &TemporalGraph, p: &Pattern) -> Vec<PatternInstance> {
        let verts: Vec<VertexId> = g.vertices().collect();
        let nl = p.label_names.len();
        let mut out = Vec::new();
        let mut pick = vec![0usize; nl];
        'outer: loop {
            let mu: Vec<VertexId> = pick.iter().map(|&i| verts[i]).collect();
            let distinct = mu.iter().collect::<BTreeSet<_>>().len() == nl;
            if distinct
                && p.label_edges
                    .iter()
                    .all(|&(a, b)| g.edge(mu[a], mu[b]).is_some())
            {
                out.push(PatternInstance { mu });
            }
            for slot in 0..nl {
                pick[slot] += 1;
                if pick[slot] < verts.len() {
                    continue 'outer;
                }
                pick[slot] = 0;
            }
            break;
        }
        out.sort();
        out
    }

    #[test]
    fn gb_matches_brute_force_on_fixtures() {
        let patterns = [
            "a -> b\nb -> c",
            "a.1 -> b\nb -> a.2",
            "a.1 -> b\nb -> c\nc -> a.2",
            "a -> b\nb -> c\na -> c",
        ];
        for g in [fixtures::toy_network(), fixtures::cycle_network(), fixtures::two_cycle_anchor()] {
            for ptext in patterns {
                let p = Pattern::parse(ptext).unwrap();
                assert_eq!(enumerate_gb(&g, &p), brute_force(&g, &p), "{ptext}");
            }
        }
    }

    #[test]
    fn cyclic_table_on_three_cycle_has_three_rows() {
        let mut b = GraphBuilder::new();
        b.add("u1", "u2", 1, 5).unwrap();
        b.add("u2", "u3", 3, 4).unwrap();
        b.add("u3", "u1", 6, 3).unwrap();
        let g = b.build();
        let t = precompute_paths(&g, 3, true);
        assert_eq!(t.rows.len(), 3);
        for r in &t.rows {
            assert_eq!(r.vertices[0], r.vertices[3]);
        }
        assert!(precompute_paths(&fixtures::toy_network(), 3, true).rows.is_empty());
    }

    #[test]
    fn path_row_boundary_matches_worked_example() {
        let g = fixtures::chain_syzt();
        let t = precompute_paths(&g, 3, false);
        let s = g.lookup("s").unwrap();
        let row = t
            .rows_from(s)
            .iter()
            .find(|r| r.vertices.len() == 4)
            .unwrap();
        let plain: Vec<(i64, u64)> = row.boundary.iter().map(|&(t, q)| (t.0, q.raw())).collect();
        assert_eq!(plain, vec![(6, 3), (8, 4)]);
    }

    #[test]
    fn table_round_trips_through_disk() {
        let g = fixtures::cycle_network();
        let t = precompute_paths(&g, 2, true);
        let dir = std::env::temp_dir().join("tempoflow-table-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("l2-cyclic.bin");
        t.save(&path).unwrap();
        let back = PathTable::load(&path).unwrap();
        assert_eq!(back.k, t.k);
        assert_eq!(back.cyclic, t.cyclic);
        assert_eq!(back.rows, t.rows);
    }

    #[test]
    fn pb_equals_gb_on_two_cycle_pattern() {
        let g = fixtures::two_cycle_anchor();
        let p = Pattern::parse("a.1 -> b\nb -> a.2\na.1 -> c\nc -> a.2\n").unwrap();
        let tables = [precompute_paths(&g, 2, true)];
        let (pb, coverage) = enumerate_pb(&g, &p, &tables).unwrap();
        assert_eq!(coverage, Coverage::Full);
        assert_eq!(pb, enumerate_gb(&g, &p));
        assert!(!pb.is_empty());
    }

    #[test]
    fn pb_with_chord_is_partial_coverage() {
        let g = fixtures::cycle_network();
        // 3-cycle with a chord a->c; the chord chain has no 1-hop table.
        let p = Pattern::parse("a.1 -> b\nb -> c\nc -> a.2\na.1 -> c\n").unwrap();
        let tables = [precompute_paths(&g, 2, true), precompute_paths(&g, 2, false)];
        match enumerate_pb(&g, &p, &tables) {
            Ok((pb, Coverage::Partial)) => assert_eq!(pb, enumerate_gb(&g, &p)),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn pb_without_any_usable_table_errors() {
        let g = fixtures::cycle_network();
        let p = Pattern::parse("a.1 -> b\nb -> a.2\n").unwrap();
        assert_eq!(
            enumerate_pb(&g, &p, &[]).unwrap_err(),
            GraphError::NoUsableTable
        );
    }

    #[test]
    fn cycle_instance_flow_matches_boundary_sum() {
        let g = fixtures::cycle_network();
        let p = Pattern::parse("a.1 -> b\nb -> c\nc -> a.2\n").unwrap();
        let inst = enumerate_gb(&g, &p)
            .into_iter()
            .find(|i| g.name(i.mu[0]) == "u1")
            .unwrap();
        let res = instance_flow(&g, &p, &inst).unwrap();
        assert_eq!(res.value, Quantity::finite(3));
    }

    #[test]
    fn chain_instance_flow_equals_greedy() {
        let g = fixtures::chain_syzt();
        let p = Pattern::parse("a -> b\nb -> c\nc -> d\n").unwrap();
        let insts = enumerate_gb(&g, &p);
        let full = insts
            .iter()
            .find(|i| g.name(i.mu[0]) == "s")
            .unwrap();
        let res = instance_flow(&g, &p, full).unwrap();
        assert_eq!(res.value, Quantity::finite(7));
    }

    #[test]
    fn nonrigid_totals_on_anchor_fixture() {
        let g = fixtures::two_cycle_anchor();
        let tables = [precompute_paths(&g, 2, true)];
        let rp = RelaxedPattern { hops: 2, min_paths: 2 };
        let rows = enumerate_nonrigid(&g, rp, &tables).unwrap();
        assert_eq!(rows.len(), 1);
        let (anchor, count, total) = rows[0];
        assert_eq!(g.name(anchor), "a");
        assert_eq!(count, 2);
        assert_eq!(total, Quantity::finite(7));
    }

    #[test]
    fn nonrigid_min_paths_filter() {
        let g = fixtures::two_cycle_anchor();
        let tables = [precompute_paths(&g, 2, true)];
        let rp = RelaxedPattern { hops: 2, min_paths: 3 };
        assert!(enumerate_nonrigid(&g, rp, &tables).unwrap().is_empty());
    }

    #[test]
    fn nonrigid_total_matches_merged_subgraph_flow() {
        let g = fixtures::two_cycle_anchor();
        let tables = [precompute_paths(&g, 2, true)];
        let rp = RelaxedPattern { hops: 2, min_paths: 2 };
        let (anchor, _, total) = enumerate_nonrigid(&g, rp, &tables).unwrap()[0];
        // Merge both cycles at the anchor and solve exactly.
        let keep: BTreeSet<_> = g
            .edges()
            .map(|e| (e.src, e.dst))
            .collect();
        let sub = g.edge_subgraph(&keep);
        let seed = [anchor].into_iter().collect();
        let inst = normalize(&sub, &seed, &seed).unwrap();
        let (res, _) = max_flow(&inst, Strategy::PreSim).unwrap();
        assert_eq!(total, res.value);
    }
}
