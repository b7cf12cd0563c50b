//! Browser demo bindings: a thin JSON-in/JSON-out facade over
//! tempoflow-core for the static page in `www/`.
//!
//! Every function takes the interaction list as TSV text
//! (`src dst timestamp quantity` per line) plus source/sink names, and
//! returns a JSON string — either `{"error": "..."}` or the result.

use serde_json::json;
use tempoflow_core::analysis::simplify;
use tempoflow_core::greedy::greedy_flow_traced;
use tempoflow_core::instance::{normalize, FlowInstance};
use tempoflow_core::maxflow::{max_flow, Strategy};
use tempoflow_core::parse::{parse_interactions, Format};
use tempoflow_core::GraphError;
use wasm_bindgen::prelude::*;

fn build_instance(tsv: &str, source: &str, sink: &str) -> Result<FlowInstance, String> {
    let g = parse_interactions(tsv.as_bytes(), Format::Tsv).map_err(|e| e.to_string())?;
    let find = |name: &str| {
        g.lookup(name)
            .ok_or_else(|| format!("unknown vertex `{name}`"))
    };
    let srcs = [find(source)?].into_iter().collect();
    let snks = [find(sink)?].into_iter().collect();
    normalize(&g, &srcs, &snks).map_err(|e: GraphError| e.to_string())
}

fn err_json(msg: String) -> String {
    json!({ "error": msg }).to_string()
}

fn quantity_json(q: tempoflow_core::Quantity) -> serde_json::Value {
    match q.as_finite() {
        Some(v) => json!(v),
        None => json!("inf"),
    }
}

/// Run the greedy algorithm and return its value plus the full buffer
/// trace, one row per interaction in processing order.
#[wasm_bindgen]
pub fn greedy_trace(tsv: &str, source: &str, sink: &str) -> String {
    let inst = match build_instance(tsv, source, sink) {
        Ok(inst) => inst,
        Err(e) => return err_json(e),
    };
    let (res, rows) = greedy_flow_traced(&inst, true);
    let g = &inst.graph;
    let rows_json: Vec<_> = rows
        .iter()
        .map(|r| {
            let buffers: serde_json::Map<String, serde_json::Value> = r
                .buffers
                .iter()
                .map(|(&v, &q)| (g.name(v).to_string(), quantity_json(q)))
                .collect();
            json!({
                "t": r.t.0,
                "src": g.name(r.src),
                "dst": g.name(r.dst),
                "q": quantity_json(r.q),
                "moved": quantity_json(r.moved),
                "buffers": buffers,
            })
        })
        .collect();
    json!({ "value": quantity_json(res.value), "trace": rows_json }).to_string()
}

/// Exact maximum flow under a strategy ("lp", "pre", or "presim"),
/// together with what the reductions removed.
#[wasm_bindgen]
pub fn exact_flow(tsv: &str, source: &str, sink: &str, strategy: &str) -> String {
    let inst = match build_instance(tsv, source, sink) {
        Ok(inst) => inst,
        Err(e) => return err_json(e),
    };
    let strategy: Strategy = match strategy.parse() {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    match max_flow(&inst, strategy) {
        Ok((res, report)) => json!({
            "value": quantity_json(res.value),
            "method": res.method.to_string(),
            "reduction": {
                "interactions": report.interactions_removed,
                "edges": report.edges_removed,
                "vertices": report.vertices_removed,
                "chains": report.chains_reduced,
            },
        })
        .to_string(),
        Err(e) => err_json(e.to_string()),
    }
}

/// Preview of source-chain simplification: the instance before and after,
/// as canonical TSV, plus reduction counts.
#[wasm_bindgen]
pub fn simplify_preview(tsv: &str, source: &str, sink: &str) -> String {
    let inst = match build_instance(tsv, source, sink) {
        Ok(inst) => inst,
        Err(e) => return err_json(e),
    };
    let (reduced, report) = simplify(&inst);
    let dump = |i: &FlowInstance| {
        let mut buf = Vec::new();
        tempoflow_core::parse::serialize(&i.graph, &mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf8 names")
    };
    json!({
        "before": dump(&inst),
        "after": dump(&reduced),
        "chains_reduced": report.chains_reduced,
        "interactions_removed": report.interactions_removed,
    })
    .to_string()
}
