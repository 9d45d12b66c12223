//! CSV and JSON renderings.

use std::fmt::Write as _;
use std::path::Path;

use convlab_core::convergence::{
    bernoulli_bound, cardinality_witness, underdetermination_witness, verify_underdetermination, SuccessCurve,
    MAX_CARDINALITY_DEPTH,
};
use convlab_core::model::InferenceMethod;
use convlab_core::rational;
use convlab_core::EmpiricalProblem;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const CURVE_HEADER: &str = "problem,method,world_id,n,criterion,estimate,stderr,exact,bound";

/// The curve as CSV, one row per (world, n), with an empty `bound` cell
/// where no analytic bound applies.
pub fn curve_csv(curve: &SuccessCurve) -> String {
    let mut out = String::with_capacity(64 * (curve.points.len() + 1));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for p in &curve.points {
        let bound = p.bound.map(|b| b.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            curve.problem, curve.method, p.world_id, p.n, curve.criterion, p.estimate, p.stderr, p.exact, bound
        );
    }
    out
}

/// Rows `(n, ε, max(0, 1 - 1/(4nε²)))` for every ε and n.
pub fn emit_bound_table(eps: &[f64], ns: std::ops::RangeInclusive<u64>) -> CliResult<String> {
    let mut out = String::from("n,epsilon,bound\n");
    for n in ns {
        for &e in eps {
            let b = bernoulli_bound(n, e)?;
            let _ = writeln!(out, "{n},{e},{b}");
        }
    }
    Ok(out)
}

/// A JSON account of the unachievability witnesses available for
/// `problem`: a shared-branch world pair, and, for real-valued methods,
/// a hypothesis the method never outputs up to `depth`.
pub fn emit_witness(
    problem: &EmpiricalProblem,
    method: Option<&dyn InferenceMethod>,
    depth: u32,
    horizon: u64,
) -> CliResult<Value> {
    let mut statements = Vec::new();
    let pair = match underdetermination_witness(problem)? {
        Some((a, b)) => {
            let equal_through = (1..=horizon).take_while(|&i| a.branch().token(i) == b.branch().token(i)).last();
            let check = match method {
                Some(m) => Some(serde_json::to_value(verify_underdetermination(problem, m, (&a, &b), horizon)?)
                    .expect("plain data")),
                None => None,
            };
            statements.push(format!(
                "worlds {} and {} share every data point but disagree on the truth",
                a.id(),
                b.id()
            ));
            json!({
                "first": { "world_id": a.id(), "truth": a.truth().to_string(), "branch": a.branch().id() },
                "second": { "world_id": b.id(), "truth": b.truth().to_string(), "branch": b.branch().id() },
                "provably_equal": a.branch().provably_equal(b.branch()),
                "prefix_equal_through": equal_through.unwrap_or(0),
                "horizon": horizon,
                "method_check": check,
            })
        }
        None => Value::Null,
    };
    let cardinality = match method {
        Some(m) if problem.hypothesis_space().is_real() => {
            if depth > MAX_CARDINALITY_DEPTH {
                return Err(CliError::Runtime(format!("depth {depth} exceeds {MAX_CARDINALITY_DEPTH}")));
            }
            let w = cardinality_witness(m, depth)?;
            statements.push(format!(
                "{} never outputs {} on inputs of length at most {depth}",
                m.name(),
                rational::to_f64(&w.value)
            ));
            json!({
                "value": rational::to_f64(&w.value),
                "exact_value": w.value.to_string(),
                "gap": [rational::to_f64(&w.gap_lo), rational::to_f64(&w.gap_hi)],
                "depth": depth,
                "inputs": w.inputs,
                "distinct_outputs": w.distinct_outputs,
            })
        }
        _ => Value::Null,
    };
    if statements.is_empty() {
        statements.push(format!("no witness exists for {}", problem.name()));
    }
    Ok(json!({
        "problem": problem.name(),
        "method": method.map(|m| m.name().to_string()),
        "underdetermination": pair,
        "cardinality": cardinality,
        "statement": statements.join("; "),
    }))
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
