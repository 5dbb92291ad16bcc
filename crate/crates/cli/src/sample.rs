//! Floating-point evaluation of solved expansions for plotting.

use lovelock_core::Q;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::Report;

fn coeff(v: &Value) -> Result<f64, CliError> {
    let s = v.as_str().ok_or_else(|| CliError::invalid("coefficients must be rational strings"))?;
    let q: Q = s.parse().map_err(|_| CliError::invalid(format!("bad rational {s:?}")))?;
    Ok(q.to_f64())
}

/// A serialized jet evaluated at `pt`.
pub fn eval_jet(j: &Value, pt: &[f64]) -> Result<f64, CliError> {
    let terms = j["terms"].as_array().ok_or_else(|| CliError::invalid("jet without terms"))?;
    let mut acc = 0.0;
    for t in terms {
        let exps = t["exps"].as_array().ok_or_else(|| CliError::invalid("term without exps"))?;
        if exps.len() != pt.len() {
            return Err(CliError::invalid(format!("jet has {} variables, point has {}", exps.len(), pt.len())));
        }
        let mut m = coeff(&t["coeff"])?;
        for (e, x) in exps.iter().zip(pt) {
            let e = e.as_u64().ok_or_else(|| CliError::invalid("exponents must be integers"))?;
            m *= x.powi(e as i32);
        }
        acc += m;
    }
    Ok(acc)
}

fn x_log(x: f64, k: i32) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powi(k) * x.ln()
    }
}

/// Evaluates `h_x = Σ h_k x^k (+ h_{n,1} x^n log x)` from an `fg-expand` or
/// `obstruction` report, or `u = Σ u_k x^k (+ ℒ x^{n+2} log x)` from a
/// `yamabe` report, at each `x` and the boundary point `y`.
pub fn sample(doc: &Value, xs: &[f64], y: &[f64]) -> Result<Report, CliError> {
    if doc["status"] != "ok" {
        return Err(CliError::invalid("sample needs a successful expansion report"));
    }
    let tables = &doc["tables"];
    let n = tables["boundary"]["n"].as_u64().ok_or_else(|| CliError::invalid("report has no boundary.n"))? as i32;
    let active = tables["boundary"]["active"].as_u64().unwrap_or(0) as usize;
    if y.len() != active {
        return Err(CliError::invalid(format!("the boundary point needs {active} coordinates")));
    }
    let mut pt = vec![0.0];
    pt.extend_from_slice(y);
    let mut rep = Report::new("sample");
    rep.table("x", json!(xs));
    rep.table("y", json!(y));
    if let Some(h) = tables["h"].as_array() {
        let mats: Vec<Vec<Vec<f64>>> = h.iter().map(|m| eval_matrix(m, &pt)).collect::<Result<_, _>>()?;
        let log = match &tables["log"] {
            Value::Null => None,
            m => Some(eval_matrix(m, &pt)?),
        };
        let dim = mats.first().map_or(0, Vec::len);
        let rows: Vec<Value> = xs
            .iter()
            .map(|&x| {
                let mut out = vec![vec![0.0; dim]; dim];
                for (k, m) in mats.iter().enumerate() {
                    let xk = x.powi(k as i32);
                    for i in 0..dim {
                        for j in 0..dim {
                            out[i][j] += m[i][j] * xk;
                        }
                    }
                }
                if let Some(l) = &log {
                    let w = x_log(x, n);
                    for i in 0..dim {
                        for j in 0..dim {
                            out[i][j] += l[i][j] * w;
                        }
                    }
                }
                json!(out)
            })
            .collect();
        rep.table("h", Value::Array(rows));
    } else if let Some(u) = tables["u"].as_array() {
        let cs: Vec<f64> = u.iter().map(|j| eval_jet(j, &pt)).collect::<Result<_, _>>()?;
        let log = match &tables["log"] {
            Value::Null => None,
            j => Some(eval_jet(j, &pt)?),
        };
        let vals: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let plain: f64 = cs.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum();
                plain + log.map_or(0.0, |l| l * x_log(x, n + 2))
            })
            .collect();
        rep.table("u", json!(vals));
    } else {
        return Err(CliError::invalid("report holds no expansion"));
    }
    Ok(rep)
}

fn eval_matrix(m: &Value, pt: &[f64]) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = m.as_array().ok_or_else(|| CliError::invalid("matrix expected"))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| CliError::invalid("matrix row expected"))?
                .iter()
                .map(|j| eval_jet(j, pt))
                .collect()
        })
        .collect()
}
