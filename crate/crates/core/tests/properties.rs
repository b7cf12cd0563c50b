//! Randomized property suites over seeded instance generators.

mod common;

use proptest::prelude::*;
use tempoflow_core::analysis::{greedy_soluble, preprocess, simplify};
use tempoflow_core::greedy::{boundary_total, greedy_chain_boundary, greedy_flow};
use tempoflow_core::maxflow::{
    build_lp, build_time_expanded, max_flow, max_flow_static, solve_lp, Strategy,
};
use tempoflow_core::patterns::{enumerate_gb, enumerate_pb, instance_flow, precompute_paths, Pattern};
use tempoflow_core::synth::{gen_synthetic, ClassBias, SynthSpec};
use tempoflow_core::witness::{validate_transfers, witness_value};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    /// Two independent formulations of the same optimum agree exactly.
    #[test]
    fn oracle_equivalence(seed in 0u64..1_000_000, cyclic in proptest::bool::ANY) {
        let inst = common::random_instance(seed, 30, cyclic);
        let net = build_time_expanded(&inst);
        let static_val = max_flow_static(&net).value;
        let sol = solve_lp(&build_lp(&inst)).unwrap();
        prop_assert_eq!(Some(static_val), sol.objective_quantity());
    }

    /// preprocess and simplify leave the maximum flow unchanged.
    #[test]
    fn reductions_preserve_max_flow(seed in 0u64..1_000_000) {
        let inst = common::random_instance(seed, 40, false);
        let base = max_flow(&inst, Strategy::Lp).unwrap().0.value;
        let (pre, _) = preprocess(&inst).unwrap();
        prop_assert_eq!(base, max_flow(&pre, Strategy::Lp).unwrap().0.value);
        let (sim, _) = simplify(&inst);
        prop_assert_eq!(base, max_flow(&sim, Strategy::Lp).unwrap().0.value);
        let (presim, _) = simplify(&pre);
        prop_assert_eq!(base, max_flow(&presim, Strategy::Lp).unwrap().0.value);
    }

    /// All strategies return identical values.
    #[test]
    fn strategy_invariance(seed in 0u64..1_000_000, cyclic in proptest::bool::ANY) {
        let inst = common::random_instance(seed, 30, cyclic);
        let lp = max_flow(&inst, Strategy::Lp).unwrap().0.value;
        let pre = max_flow(&inst, Strategy::Pre).unwrap().0.value;
        let presim = max_flow(&inst, Strategy::PreSim).unwrap().0.value;
        prop_assert_eq!(lp, pre);
        prop_assert_eq!(lp, presim);
    }

    /// With distinct timestamps greedy is a feasible reservation policy,
    /// so it never beats the optimum; on single-out-degree DAGs it attains it.
    #[test]
    fn greedy_bounded_by_max(seed in 0u64..1_000_000, cyclic in proptest::bool::ANY) {
        let inst = common::random_instance(seed, 30, cyclic);
        let greedy = greedy_flow(&inst).value;
        let exact = max_flow(&inst, Strategy::Lp).unwrap().0.value;
        prop_assert!(greedy <= exact);
    }

    #[test]
    fn single_out_degree_instances_are_exact(seed in 0u64..1_000_000) {
        let spec = SynthSpec {
            vertices: 7,
            edges: 9,
            interactions: 25,
            class_bias: ClassBias::A,
            rng_seed: seed,
        };
        let inst = gen_synthetic(&spec).unwrap();
        prop_assert!(greedy_soluble(&inst));
        let greedy = greedy_flow(&inst).value;
        let exact = max_flow(&inst, Strategy::Lp).unwrap().0.value;
        prop_assert_eq!(greedy, exact);
    }

    /// Every solver's transfer map passes the independent feasibility
    /// validator and sums to the reported value at the sink.
    #[test]
    fn witnesses_are_feasible(seed in 0u64..1_000_000, cyclic in proptest::bool::ANY) {
        let inst = common::random_instance(seed, 30, cyclic);
        let (res, _) = max_flow(&inst, Strategy::Lp).unwrap();
        validate_transfers(&inst, &res.transfers).map_err(|e| {
            TestCaseError::fail(format!("infeasible witness: {e}"))
        })?;
        prop_assert_eq!(witness_value(&inst, &res.transfers), res.value);
        let g = greedy_flow(&inst);
        prop_assert_eq!(witness_value(&inst, &g.transfers), g.value);
    }

    /// A chain's boundary fully characterizes it: replacing the chain by a
    /// single edge carrying the boundary preserves the greedy outcome.
    #[test]
    fn boundary_composition(seed in 0u64..1_000_000, len in 2usize..5) {
        let chain = random_chain(seed, len);
        let edges: Vec<_> = chain.graph.edges().collect();
        let total = boundary_total(&greedy_chain_boundary(&edges).unwrap());
        prop_assert_eq!(total, greedy_flow(&chain).value);
        prop_assert_eq!(total, max_flow(&chain, Strategy::Lp).unwrap().0.value);
    }

    /// GB and PB agree on instances and flows for the structural pattern
    /// families, with and without full table coverage.
    #[test]
    fn gb_pb_equivalence(seed in 0u64..1_000_000) {
        let g = common::random_graph(seed, 30, true, 8);
        let tables = [
            precompute_paths(&g, 2, true),
            precompute_paths(&g, 2, false),
            precompute_paths(&g, 3, true),
            precompute_paths(&g, 3, false),
        ];
        let family = [
            "a -> b\nb -> c\nc -> d",                    // chain
            "a.1 -> b\nb -> c\nc -> a.2",                // cycle
            "a.1 -> b\nb -> a.2\na.1 -> c\nc -> a.2",    // parallel cycles
            "a.1 -> b\nb -> c\nc -> a.2\na.1 -> c",      // chorded cycle
        ];
        for text in family {
            let p = Pattern::parse(text).unwrap();
            let gb = enumerate_gb(&g, &p);
            let (pb, _) = enumerate_pb(&g, &p, &tables).unwrap();
            prop_assert_eq!(&gb, &pb, "pattern {}", text);
            for inst in gb.iter().take(10) {
                // The per-instance fast path must agree with a direct
                // exact solve of the merged subgraph.
                let fast = instance_flow(&g, &p, inst).unwrap().value;
                let exact = exact_instance_value(&g, &p, inst);
                prop_assert_eq!(fast, exact, "pattern {}", text);
            }
        }
    }
}

fn exact_instance_value(
    g: &tempoflow_core::TemporalGraph,
    p: &Pattern,
    inst: &tempoflow_core::patterns::PatternInstance,
) -> tempoflow_core::Quantity {
    let sub = g.edge_subgraph(&inst.edge_image(p));
    let bindings = inst.bindings(p);
    let find = |label: &str| {
        bindings
            .iter()
            .find(|(l, _)| *l == label)
            .map(|&(_, v)| v)
            .unwrap()
    };
    let srcs = [find(p.source_label())].into_iter().collect();
    let snks = [find(p.sink_label())].into_iter().collect();
    let fi = tempoflow_core::instance::normalize(&sub, &srcs, &snks).unwrap();
    max_flow(&fi, Strategy::Lp).unwrap().0.value
}

/// Chain instance with interleaved but globally distinct timestamps.
fn random_chain(seed: u64, len: usize) -> tempoflow_core::FlowInstance {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut b = tempoflow_core::graph::GraphBuilder::new();
    let name = |i: usize| format!("c{i}");
    let per_edge: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=3)).collect();
    let total: usize = per_edge.iter().sum();
    let mut times: Vec<i64> = (1..=2 * total as i64).collect();
    times.shuffle(&mut rng);
    let mut times = times.into_iter();
    for (i, &reps) in per_edge.iter().enumerate() {
        for _ in 0..reps {
            b.add(&name(i), &name(i + 1), times.next().unwrap(), rng.gen_range(1..=9))
                .unwrap();
        }
    }
    let g = b.build();
    let srcs = [g.lookup("c0").unwrap()].into_iter().collect();
    let snks = [g.lookup(&name(len)).unwrap()].into_iter().collect();
    tempoflow_core::instance::normalize(&g, &srcs, &snks).unwrap()
}
