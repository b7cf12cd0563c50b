//! Linear-programming formulation of maximum temporal flow.
//!
//! Serves two purposes: a bit-stable CPLEX-LP text export for external
//! solvers, and a small exact rational simplex used as an independent
//! verification oracle for the production solver. The oracle is capped at
//! 200 variables; it is for cross-checking, not production solving.
//!
//! Transfers on edges leaving the source are fixed to their full quantity
//! (the source buffer is infinite, so nothing is gained by holding back);
//! they appear as constants, not variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::GraphError;
use crate::graph::InteractionId;
use crate::instance::FlowInstance;
use crate::quantity::Quantity;

/// Hard cap on oracle size.
pub const MAX_ORACLE_VARS: usize = 200;

#[derive(Clone, Debug)]
pub struct LpVar {
    pub id: InteractionId,
    /// Upper bound `q_i`; INFINITE means unbounded above (synthetic edges).
    pub upper: Quantity,
}

/// One prefix-balance row:
/// `x_i + sum(earlier out of v) - sum(earlier into v) <= fixed inflow`.
#[derive(Clone, Debug)]
pub struct LpConstraint {
    /// `(variable index, coefficient)`, coefficient is +1 or -1; the row's
    /// own variable appears with +1.
    pub terms: Vec<(usize, i64)>,
    pub rhs: u64,
}

#[derive(Clone, Debug)]
pub struct LpModel {
    pub vars: Vec<LpVar>,
    pub constraints: Vec<LpConstraint>,
    /// Variable indices of interactions arriving at the sink.
    pub objective: Vec<usize>,
    /// Fixed source-to-sink quantity added to every objective value.
    pub objective_const: u64,
}

/// Build the LP for an instance. Variables are ordered by `(t, id)`.
pub fn build_lp(instance: &FlowInstance) -> LpModel {
    let g = &instance.graph;
    let all = g.interactions_in_time_order();

    let mut vars = Vec::new();
    let mut var_of = std::collections::BTreeMap::new();
    for i in &all {
        if i.src != instance.source {
            var_of.insert(i.id, vars.len());
            vars.push(LpVar {
                id: i.id,
                upper: i.q,
            });
        }
    }

    let mut constraints = Vec::new();
    for i in &all {
        if i.src == instance.source {
            continue;
        }
        let xi = var_of[&i.id];
        let mut terms = vec![(xi, 1i64)];
        let mut rhs: u64 = 0;
        let mut rhs_infinite = false;
        for j in &all {
            // Strict by timestamp: same-timestamp transfers do not fund i.
            if j.t >= i.t {
                break;
            }
            if j.src == i.src && j.id != i.id {
                terms.push((var_of[&j.id], 1));
            } else if j.dst == i.src {
                if j.src == instance.source {
                    match j.q.as_finite() {
                        Some(q) => rhs = rhs.checked_add(q).expect("rhs in range"),
                        None => rhs_infinite = true,
                    }
                } else {
                    terms.push((var_of[&j.id], -1));
                }
            }
        }
        if rhs_infinite {
            // Balance can never bind; x_i is limited by its bound alone.
            continue;
        }
        constraints.push(LpConstraint { terms, rhs });
    }

    let mut objective = Vec::new();
    let mut objective_const: u64 = 0;
    for i in &all {
        if i.dst != instance.sink {
            continue;
        }
        if i.src == instance.source {
            objective_const += i.q.as_finite().unwrap_or(0);
        } else {
            objective.push(var_of[&i.id]);
        }
    }
    LpModel {
        vars,
        constraints,
        objective,
        objective_const,
    }
}

/// Exact optimum of an [`LpModel`].
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub objective: BigRational,
    /// One value per model variable, same order as `model.vars`.
    pub assignment: Vec<BigRational>,
}

impl LpSolution {
    /// The objective as a quantity; the optimum of an integral instance is
    /// always integral.
    pub fn objective_quantity(&self) -> Option<Quantity> {
        if !self.objective.is_integer() {
            return None;
        }
        u64::try_from(&self.objective.to_integer()).ok().map(Quantity::finite)
    }
}

/// Solve the model exactly with a dense rational simplex (Bland's rule, so
/// it terminates without a cycling heuristic). Errors if the model exceeds
/// [`MAX_ORACLE_VARS`].
pub fn solve_lp(model: &LpModel) -> Result<LpSolution, GraphError> {
    if model.vars.len() > MAX_ORACLE_VARS {
        return Err(GraphError::OracleTooLarge {
            max: MAX_ORACLE_VARS,
            got: model.vars.len(),
        });
    }
    // Rows: balance constraints plus one bound row per finitely-bounded var.
    let n = model.vars.len();
    let mut rows: Vec<(Vec<(usize, i64)>, u64)> = model
        .constraints
        .iter()
        .map(|c| (c.terms.clone(), c.rhs))
        .collect();
    for (j, v) in model.vars.iter().enumerate() {
        if let Some(u) = v.upper.as_finite() {
            rows.push((vec![(j, 1)], u));
        }
    }
    let m = rows.len();

    // Dense tableau over structural + slack columns; the slack basis is
    // feasible since every rhs is non-negative.
    let zero = BigRational::zero();
    let one = BigRational::one();
    let total = n + m;
    let mut a: Vec<Vec<BigRational>> = vec![vec![zero.clone(); total]; m];
    let mut b: Vec<BigRational> = Vec::with_capacity(m);
    for (r, (terms, rhs)) in rows.iter().enumerate() {
        for &(j, coeff) in terms {
            a[r][j] = BigRational::from(BigInt::from(coeff));
        }
        a[r][n + r] = one.clone();
        b.push(BigRational::from(BigInt::from(*rhs)));
    }
    let mut c: Vec<BigRational> = vec![zero.clone(); total];
    for &j in &model.objective {
        c[j] += one.clone();
    }
    let mut obj = zero.clone();
    let mut basis: Vec<usize> = (n..total).collect();

    let cap = 10_000 + 50 * total * m.max(1);
    for _ in 0..cap {
        let Some(enter) = c.iter().position(|cj| cj.is_positive()) else {
            // Optimal: read the assignment off the basis.
            let mut assignment = vec![zero.clone(); n];
            for (r, &bj) in basis.iter().enumerate() {
                if bj < n {
                    assignment[bj] = b[r].clone();
                }
            }
            return Ok(LpSolution {
                objective: obj + BigRational::from(BigInt::from(model.objective_const)),
                assignment,
            });
        };
        // Ratio test; ties resolved toward the smallest basis index (Bland).
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if !a[r][enter].is_positive() {
                continue;
            }
            let better = match leave {
                None => true,
                Some(l) => {
                    let cur = &b[l] * &a[r][enter];
                    let new = &b[r] * &a[l][enter];
                    new < cur || (new == cur && basis[r] < basis[l])
                }
            };
            if better {
                leave = Some(r);
            }
        }
        let Some(leave) = leave else {
            return Err(GraphError::InfeasibleSpec(
                "LP unbounded; instance has an uncapacitated source-sink path".into(),
            ));
        };
        // Pivot.
        let pivot = a[leave][enter].clone();
        for x in a[leave].iter_mut() {
            *x /= &pivot;
        }
        b[leave] /= &pivot;
        for r in 0..m {
            if r == leave || a[r][enter].is_zero() {
                continue;
            }
            let f = a[r][enter].clone();
            for j in 0..total {
                let d = &a[leave][j] * &f;
                a[r][j] -= d;
            }
            let d = &b[leave] * &f;
            b[r] -= d;
        }
        if !c[enter].is_zero() {
            let f = c[enter].clone();
            for j in 0..total {
                let d = &a[leave][j] * &f;
                c[j] -= d;
            }
            let d = &b[leave] * &f;
            obj += d;
        }
        basis[leave] = enter;
    }
    Err(GraphError::IterationCap)
}

/// Render the model in CPLEX-LP text format. Pure function of the model:
/// byte-identical output for identical models.
pub fn emit_cplex_lp(model: &LpModel) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    out.push_str("Maximize\n obj:");
    if model.objective.is_empty() && model.objective_const == 0 {
        out.push_str(" 0 x0");
    } else {
        for (k, &j) in model.objective.iter().enumerate() {
            let _ = write!(out, "{} x{}", if k == 0 { " " } else { " + " }, j);
        }
        if model.objective_const != 0 {
            let _ = write!(
                out,
                "{}{}",
                if model.objective.is_empty() { " " } else { " + " },
                model.objective_const
            );
        }
    }
    out.push_str("\nSubject To\n");
    for (r, cst) in model.constraints.iter().enumerate() {
        let _ = write!(out, " c{}:", r);
        for (k, &(j, coeff)) in cst.terms.iter().enumerate() {
            let sign = if coeff >= 0 {
                if k == 0 {
                    " "
                } else {
                    " + "
                }
            } else {
                " - "
            };
            let _ = write!(out, "{}x{}", sign, j);
        }
        let _ = writeln!(out, " <= {}", cst.rhs);
    }
    out.push_str("Bounds\n");
    for (j, v) in model.vars.iter().enumerate() {
        match v.upper.as_finite() {
            Some(u) => {
                let _ = writeln!(out, " 0 <= x{} <= {}", j, u);
            }
            None => {
                let _ = writeln!(out, " 0 <= x{}", j);
            }
        }
    }
    out.push_str("End\n");
    out
}
