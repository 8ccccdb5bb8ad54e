//! JSON encodings of matrices and points.
//!
//! A matrix is `{"rows": r, "cols": c, "entries": [[re, im], ...]}` with the
//! entries in row-major order. Exact entries are fraction strings (`"-3/4"`);
//! the float backend writes numbers and accepts either.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::liegroup::LieGroup;
use crate::scalar::Scalar;

pub fn mat_to_json<S: Scalar>(m: &Mat<S>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Json(format!("missing or invalid \"{key}\"")))
}

pub fn mat_from_json<S: Scalar>(v: &Value) -> Result<Mat<S>> {
    let rows = usize_field(v, "rows")?;
    let cols = usize_field(v, "cols")?;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("missing \"entries\" array".into()))?;
    if entries.len() != rows * cols {
        return Err(Error::Json(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
    }
    let data = entries.iter().map(S::from_json).collect::<Result<Vec<S>>>()?;
    Ok(Mat::from_vec(rows, cols, data))
}

/// A group element: a matrix tagged with its group name.
pub fn element_to_json<S: Scalar>(ctx: &LieGroup, m: &Mat<S>) -> Value {
    let mut v = mat_to_json(m);
    v["group"] = Value::String(ctx.name());
    v
}

/// Reads a group element, checking the group tag when present and membership.
pub fn element_from_json<S: Scalar>(ctx: &LieGroup, v: &Value) -> Result<Mat<S>> {
    if let Some(tag) = v.get("group").and_then(Value::as_str) {
        if !tag.eq_ignore_ascii_case(&ctx.name()) {
            return Err(Error::Json(format!("group tag {tag} does not match {}", ctx.name())));
        }
    }
    let m = mat_from_json(v)?;
    ctx.check_element(&m)?;
    Ok(m)
}

/// A point of a product space, `{"<name>": Mat, ...}` in the given key order.
pub fn point_to_json<S: Scalar>(keys: &[&str], p: &[Mat<S>]) -> Value {
    let mut obj = serde_json::Map::new();
    for (k, m) in keys.iter().zip(p) {
        obj.insert((*k).to_string(), mat_to_json(m));
    }
    Value::Object(obj)
}

pub fn point_from_json<S: Scalar>(keys: &[&str], v: &Value) -> Result<Vec<Mat<S>>> {
    keys.iter()
        .map(|k| {
            let m = v.get(*k).ok_or_else(|| Error::Json(format!("missing \"{k}\"")))?;
            mat_from_json(m)
        })
        .collect()
}

pub fn vec_to_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}
