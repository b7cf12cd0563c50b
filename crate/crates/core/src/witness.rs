//! Independent validation of transfer assignments.
//!
//! Deliberately shares no code with the solvers: it re-derives per-vertex
//! prefix balances from scratch so that a bug in a solver cannot hide
//! behind the same bug here.

use std::collections::BTreeMap;

use crate::graph::InteractionId;
use crate::instance::FlowInstance;
use crate::quantity::Quantity;

/// Check that `transfers` is a feasible assignment for the instance:
///
/// * every transfer satisfies `0 <= x_i <= q_i`;
/// * for every non-source vertex `v` and every outgoing interaction `i` of
///   `v`, the balance of `v` strictly before `t_i` covers `x_i`, i.e.
///   inflow before `t_i` minus outflow before `t_i` is at least `x_i`
///   (outflow including `x_i` itself never exceeds prior inflow).
///
/// Interactions missing from the map are treated as carrying 0. Infinite
/// transfer values are rejected.
pub fn validate_transfers(
    instance: &FlowInstance,
    transfers: &BTreeMap<InteractionId, Quantity>,
) -> Result<(), String> {
    let g = &instance.graph;
    let x = |id: InteractionId| -> Result<i128, String> {
        match transfers.get(&id) {
            None => Ok(0),
            Some(q) if q.is_infinite() => Err(format!("transfer for {id:?} is infinite")),
            Some(q) => Ok(q.raw() as i128),
        }
    };
    for id in transfers.keys() {
        if !g.interactions_in_time_order().iter().any(|i| i.id == *id) {
            return Err(format!("transfer for unknown interaction {id:?}"));
        }
    }
    // Capacity bounds.
    for i in g.interactions_in_time_order() {
        let xi = x(i.id)?;
        if let Some(q) = i.q.as_finite() {
            if xi > q as i128 {
                return Err(format!(
                    "interaction {:?} at t={} carries {} > capacity {}",
                    i.id, i.t.0, xi, q
                ));
            }
        }
    }
    // Prefix balance per non-source vertex. Strict by timestamp: transfers
    // at the same timestamp as an outgoing interaction do not fund it.
    let all = g.interactions_in_time_order();
    for v in g.vertices() {
        if v == instance.source {
            continue;
        }
        let mut incident: Vec<_> = all.iter().filter(|i| i.src == v || i.dst == v).collect();
        incident.sort_by_key(|i| (i.t, i.id));
        for (k, i) in incident.iter().enumerate() {
            if i.src != v {
                continue;
            }
            let xi = x(i.id)?;
            if xi == 0 {
                continue;
            }
            let mut balance: i128 = 0;
            for j in &incident[..k] {
                if j.t >= i.t {
                    break;
                }
                let xj = x(j.id)?;
                if j.dst == v {
                    balance += xj;
                } else {
                    balance -= xj;
                }
            }
            if xi > balance {
                return Err(format!(
                    "vertex {} sends {} at t={} with only {} buffered",
                    g.name(v),
                    xi,
                    i.t.0,
                    balance
                ));
            }
        }
    }
    Ok(())
}

/// Sum of transfers arriving at the sink; the value a valid witness attests.
pub fn witness_value(
    instance: &FlowInstance,
    transfers: &BTreeMap<InteractionId, Quantity>,
) -> Quantity {
    let mut acc = Quantity::ZERO;
    for i in instance.graph.interactions_in_time_order() {
        if i.dst == instance.sink {
            if let Some(q) = transfers.get(&i.id) {
                acc = acc.checked_add(*q).expect("in range");
            }
        }
    }
    acc
}
