//! Reading point configurations from JSON or plain text.
//!
//! JSON: `{"points": [[0, 0], [0, 1]], "characteristic": 2}`. Coordinates may
//! be numbers or decimal strings; `characteristic` is optional.
//!
//! Text: one point per line, coordinates separated by whitespace or commas.
//! Blank lines and lines starting with `#` are skipped.

use std::io::Read;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInput {
    pub points: Vec<Vec<BigInt>>,
    pub characteristic: Option<u64>,
}

/// Read a file, or stdin for `-`.
pub fn read_source(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::input(format!("{}: {}", path, e)))
    }
}

pub fn parse_input(text: &str) -> CliResult<RawInput> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        parse_json(trimmed)
    } else {
        parse_text(text)
    }
}

fn parse_json(text: &str) -> CliResult<RawInput> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid JSON: {}", e)))?;
    let (points, characteristic) = match &value {
        Value::Object(map) => {
            let points = map.get("points").ok_or_else(|| CliError::input("missing \"points\""))?;
            let characteristic = match map.get("characteristic") {
                None | Some(Value::Null) => None,
                Some(v) => Some(parse_u64(v).ok_or_else(|| CliError::input("\"characteristic\" must be a nonnegative integer"))?),
            };
            (points, characteristic)
        }
        Value::Array(_) => (&value, None),
        _ => return Err(CliError::input("expected an object or an array of points")),
    };
    Ok(RawInput { points: parse_matrix(points)?, characteristic })
}

/// A JSON array of integer arrays.
pub fn parse_matrix(value: &Value) -> CliResult<Vec<Vec<BigInt>>> {
    let rows = value.as_array().ok_or_else(|| CliError::input("expected an array of points"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array().ok_or_else(|| CliError::input(format!("point {} is not an array", i)))?;
            row.iter()
                .map(|x| parse_integer(x).ok_or_else(|| CliError::input(format!("point {} has a non-integer coordinate", i))))
                .collect()
        })
        .collect()
}

pub fn parse_matrix_str(text: &str) -> CliResult<Vec<Vec<BigInt>>> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid matrix: {}", e)))?;
    parse_matrix(&value)
}

fn parse_integer(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn parse_u64(v: &Value) -> Option<u64> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn parse_text(text: &str) -> CliResult<RawInput> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let point = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigInt>().map_err(|_| CliError::input(format!("line {}: cannot parse {:?}", lineno + 1, t))))
            .collect::<CliResult<Vec<_>>>()?;
        points.push(point);
    }
    Ok(RawInput { points, characteristic: None })
}
