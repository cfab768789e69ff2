//! JSON encoding of exact integers.
//!
//! Integers whose magnitude fits in 53 bits are written as JSON numbers;
//! anything larger is written as a decimal string so that consumers using
//! IEEE doubles never silently round. Objects are `serde_json::Map`, which
//! keeps keys sorted, so output is byte-deterministic.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::linalg::{IntMatrix, IntVector};

/// 2^53 − 1.
pub const MAX_SAFE_INTEGER: i64 = 9_007_199_254_740_991;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("missing field `{0}`")]
    Missing(String),
    #[error("field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl JsonError {
    pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Self {
        JsonError::Invalid {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

pub fn int_to_json(x: &BigInt) -> Value {
    if x.abs() <= BigInt::from(MAX_SAFE_INTEGER) {
        Value::from(x.to_i64().expect("fits in 53 bits"))
    } else {
        Value::String(x.to_string())
    }
}

/// Accepts a JSON integer or a decimal string.
pub fn int_from_json(v: &Value, field: &str) -> Result<BigInt, JsonError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| JsonError::invalid(field, format!("{n} is not an integer"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| JsonError::invalid(field, format!("{s:?} is not a decimal integer"))),
        other => Err(JsonError::invalid(field, format!("expected integer, got {other}"))),
    }
}

pub fn u64_from_json(v: &Value, field: &str) -> Result<u64, JsonError> {
    int_from_json(v, field)?
        .to_u64()
        .ok_or_else(|| JsonError::invalid(field, "expected a non-negative 64-bit integer"))
}

pub fn vector_to_json(v: &IntVector) -> Value {
    Value::Array(v.entries().iter().map(int_to_json).collect())
}

pub fn vector_from_json(v: &Value, field: &str) -> Result<IntVector, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| JsonError::invalid(field, "expected an array"))?;
    let entries = arr
        .iter()
        .map(|x| int_from_json(x, field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntVector::new(entries))
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(&m.row_vector(i))).collect())
}

pub fn matrix_from_json(v: &Value, field: &str) -> Result<IntMatrix, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| JsonError::invalid(field, "expected an array of rows"))?;
    let rows = arr
        .iter()
        .map(|r| vector_from_json(r, field))
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::from_vectors(&rows).map_err(|e| JsonError::invalid(field, e.to_string()))
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value, JsonError> {
    obj.get(name).ok_or_else(|| JsonError::Missing(name.to_string()))
}

pub(crate) fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, JsonError> {
    v.as_object()
        .ok_or_else(|| JsonError::invalid(what, "expected a JSON object"))
}
