//! Small hand-built networks shared by the test suites and the demo.

use crate::graph::{GraphBuilder, TemporalGraph};

/// Four vertices, five single-interaction edges. Greedy delivers 1 to the
/// sink while the true maximum flow is 5.
pub fn toy_network() -> TemporalGraph {
    build(&[
        ("s", "y", 1, 5),
        ("s", "z", 2, 3),
        ("y", "z", 3, 5),
        ("y", "t", 4, 4),
        ("z", "t", 5, 1),
    ])
}

/// Chain s -> y -> z -> t with 7 interactions; its boundary sequence at the
/// sink is [(6,3), (8,4)] and its flow is 7.
pub fn chain_syzt() -> TemporalGraph {
    build(&[
        ("s", "y", 1, 4),
        ("s", "y", 5, 3),
        ("y", "z", 0, 2),
        ("y", "z", 2, 3),
        ("y", "z", 7, 4),
        ("z", "t", 6, 3),
        ("z", "t", 8, 4),
    ])
}

/// A non-chain DAG where every vertex except source and sink has a single
/// outgoing edge, so greedy attains the maximum flow (14).
pub fn single_out_degree_dag() -> TemporalGraph {
    build(&[
        ("s", "a", 1, 6),
        ("s", "b", 2, 8),
        ("a", "t", 3, 6),
        ("b", "t", 4, 8),
    ])
}

/// DAG whose preprocessing deletes exactly the interactions (2,7) on (x,y),
/// (1,2) on (x,z), (3,3) on (y,t) and (4,2) on (z,t), with no edge or
/// vertex deletions.
pub fn dag_g1() -> TemporalGraph {
    build(&[
        ("s", "x", 5, 10),
        ("x", "y", 2, 7),
        ("x", "y", 9, 6),
        ("x", "z", 1, 2),
        ("x", "z", 10, 5),
        ("y", "t", 3, 3),
        ("y", "t", 11, 3),
        ("z", "t", 4, 2),
        ("z", "t", 12, 4),
    ])
}

/// DAG whose preprocessing cascades: the single interaction (3,4) on (x,y)
/// dies, x and y are deleted with their edges, and (4,2) is pruned from
/// (z,t). What remains is the chain s -> z -> t. Before preprocessing the
/// graph is not greedy-soluble (y has two outgoing edges); afterwards it
/// is.
pub fn dag_g2() -> TemporalGraph {
    build(&[
        ("s", "x", 5, 3),
        ("s", "x", 8, 2),
        ("x", "y", 3, 4),
        ("y", "t", 9, 1),
        ("y", "z", 4, 1),
        ("s", "z", 6, 5),
        ("z", "t", 4, 2),
        ("z", "t", 7, 3),
    ])
}

/// Graph exercising simplification: the chain s -> y -> z reduces to a new
/// edge (s,z) with interactions [(3,2),(7,1)] which merges with the
/// existing (s,z) [(2,5),(11,2)]; the merged chain s -> z -> w then reduces
/// again. The LP shrinks from 9 variables to 3.
pub fn simplification_graph() -> TemporalGraph {
    build(&[
        ("s", "y", 1, 2),
        ("s", "y", 6, 1),
        ("y", "z", 0, 4),
        ("y", "z", 3, 2),
        ("y", "z", 7, 1),
        ("s", "z", 2, 5),
        ("s", "z", 11, 2),
        ("z", "w", 4, 3),
        ("z", "w", 8, 1),
        ("z", "w", 12, 2),
        ("w", "t", 13, 4),
        ("w", "u", 9, 2),
        ("u", "t", 14, 2),
    ])
}

/// Four-vertex network with one 3-cycle u1 -> u2 -> u3 -> u1 plus a spur
/// edge u3 -> u4. The boundary of the partial chain u1 u2 u3 is
/// [(3,4), (5,2)].
pub fn cycle_network() -> TemporalGraph {
    build(&[
        ("u1", "u2", 1, 5),
        ("u1", "u2", 4, 2),
        ("u2", "u3", 3, 4),
        ("u2", "u3", 5, 2),
        ("u3", "u1", 1, 2),
        ("u3", "u1", 6, 3),
        ("u3", "u4", 7, 1),
    ])
}

/// Anchor `a` with two 2-hop cycles a -> b -> a and a -> c -> a whose
/// boundary sums are 3 and 4.
pub fn two_cycle_anchor() -> TemporalGraph {
    build(&[
        ("a", "b", 1, 3),
        ("b", "a", 2, 3),
        ("a", "c", 1, 5),
        ("c", "a", 3, 4),
    ])
}

fn build(records: &[(&str, &str, i64, u64)]) -> TemporalGraph {
    let mut b = GraphBuilder::new();
    for &(s, d, t, q) in records {
        b.add(s, d, t, q).expect("valid fixture record");
    }
    b.build()
}
