//! File formats: JSON/CSV matrices, probability vectors, CQ states, and
//! measurement bases, plus a JSON writer that renders every float with 17
//! significant digits so reports are byte-reproducible.
//!
//! Matrix wire format: `{"rows": n, "cols": l, "data": [row-major floats]}`.
//! CSV alternative: one matrix row per line, comma-separated.
//! CQ state: `{"probs": [...], "states": [[[re, im], ...], ...]}` with each
//! state a row-major `d x d` list of re/im pairs.
//! Basis: a JSON list of complex vectors `[[re, im], ...]`.

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::bounds::MeasurementBasis;
use crate::probcore::{JointDistribution, Matrix, ProbVector};
use crate::quantum::{CMatrix, CQState, CVector, DensityMatrix};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Prob(#[from] crate::probcore::ProbError),
    #[error(transparent)]
    Quantum(#[from] crate::quantum::QuantumError),
    #[error(transparent)]
    Bounds(#[from] crate::bounds::BoundsError),
}

pub fn parse_matrix_json(text: &str) -> Result<Matrix, IoError> {
    let m: Matrix = serde_json::from_str(text)?;
    Matrix::new(m.rows, m.cols, m.data).map_err(IoError::from)
}

pub fn parse_matrix_csv(text: &str) -> Result<Matrix, IoError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect();
        let row = row.map_err(|e| IoError::Csv {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(IoError::Csv {
                    line: i + 1,
                    msg: format!("expected {} columns, got {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IoError::Format("empty CSV matrix".into()));
    }
    let n = rows.len();
    let l = rows[0].len();
    let data = rows.into_iter().flatten().collect();
    Matrix::new(n, l, data).map_err(IoError::from)
}

/// Parse a matrix from text, choosing CSV when the filename hint ends in
/// `.csv` and JSON otherwise.
pub fn parse_matrix(text: &str, csv: bool) -> Result<Matrix, IoError> {
    if csv {
        parse_matrix_csv(text)
    } else {
        parse_matrix_json(text)
    }
}

pub fn parse_joint(text: &str, csv: bool) -> Result<JointDistribution, IoError> {
    Ok(JointDistribution::new(parse_matrix(text, csv)?)?)
}

/// A probability vector: either a bare JSON array or a one-column/one-row
/// matrix object.
pub fn parse_prob_vector(text: &str) -> Result<ProbVector, IoError> {
    if let Ok(entries) = serde_json::from_str::<Vec<f64>>(text) {
        return Ok(ProbVector::new(entries)?);
    }
    let m = parse_matrix_json(text)?;
    if m.rows != 1 && m.cols != 1 {
        return Err(IoError::Format(
            "probability vector must be an array or a single-row/column matrix".into(),
        ));
    }
    Ok(ProbVector::new(m.data)?)
}

#[derive(Deserialize)]
struct CqWire {
    probs: Vec<f64>,
    states: Vec<Vec<[f64; 2]>>,
}

pub fn parse_cq_state(text: &str) -> Result<CQState, IoError> {
    let wire: CqWire = serde_json::from_str(text)?;
    let probs = ProbVector::new(wire.probs)?;
    let mut states = Vec::with_capacity(wire.states.len());
    for (i, flat) in wire.states.iter().enumerate() {
        let d2 = flat.len();
        let d = (d2 as f64).sqrt().round() as usize;
        if d * d != d2 {
            return Err(IoError::Format(format!(
                "state {i} has {d2} entries, not a square count"
            )));
        }
        let mat = CMatrix::from_fn(d, d, |r, c| {
            let [re, im] = flat[r * d + c];
            Complex64::new(re, im)
        });
        states.push(DensityMatrix::new(mat)?);
    }
    Ok(CQState::new(probs, states)?)
}

pub fn cq_state_to_value(state: &CQState) -> serde_json::Value {
    let states: Vec<Vec<[f64; 2]>> = state
        .states()
        .iter()
        .map(|s| {
            let m = s.matrix();
            let d = m.nrows();
            (0..d * d)
                .map(|i| {
                    let c = m[(i / d, i % d)];
                    [c.re, c.im]
                })
                .collect()
        })
        .collect();
    serde_json::json!({
        "probs": state.probs().as_slice(),
        "states": states,
    })
}

/// Basis file: a JSON list of complex vectors, each a list of `[re, im]`.
pub fn parse_basis(text: &str) -> Result<MeasurementBasis, IoError> {
    let wire: Vec<Vec<[f64; 2]>> = serde_json::from_str(text)?;
    let vectors: Vec<CVector> = wire
        .iter()
        .map(|v| CVector::from_fn(v.len(), |i, _| Complex64::new(v[i][0], v[i][1])))
        .collect();
    Ok(MeasurementBasis::new(vectors)?)
}

pub fn complex_vector_to_value(v: &CVector) -> serde_json::Value {
    let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
    serde_json::json!(pairs)
}

pub fn matrix_to_value(m: &Matrix) -> serde_json::Value {
    serde_json::json!({
        "rows": m.rows,
        "cols": m.cols,
        "data": m.data,
    })
}

/// Render a JSON value with every float at 17 significant digits
/// (round-trip exact for f64) and stable key order as given.
pub fn to_json_17(value: &serde_json::Value, pretty: bool) -> String {
    let mut out = String::new();
    write_value(value, pretty, 0, &mut out);
    out
}

fn write_value(value: &serde_json::Value, pretty: bool, indent: usize, out: &mut String) {
    match value {
        serde_json::Value::Null => out.push_str("null"),
        serde_json::Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_f64_17(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        serde_json::Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"))
        }
        serde_json::Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if pretty {
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                }
                write_value(item, pretty, indent + 1, out);
            }
            if pretty && !items.is_empty() {
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
            }
            out.push(']');
        }
        serde_json::Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if pretty {
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                }
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push(':');
                if pretty {
                    out.push(' ');
                }
                write_value(v, pretty, indent + 1, out);
            }
            if pretty && !map.is_empty() {
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
            }
            out.push('}');
        }
    }
}

/// 17 significant digits: one leading digit plus 16 after the point, in
/// scientific notation. Non-finite values render as null (JSON has no
/// representation for them).
pub fn format_f64_17(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    format!("{x:.16e}")
}
