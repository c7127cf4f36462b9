//! The `taulab-1` instance file: pretty-printed JSON with alphabetically
//! ordered keys, big integers as decimal strings and matrix rows as hex.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::HashParams;
use crate::tau::{BitMatrix, TauInstance, DIRECTIONS};

pub const FORMAT_VERSION: &str = "taulab-1";

// Field order is the serialized key order and must stay alphabetical.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    direction_table: Vec<[i8; 2]>,
    h_col: Vec<HashDoc>,
    h_m: Vec<Vec<HashDoc>>,
    h_row: Vec<HashDoc>,
    matrices: Vec<Vec<String>>,
    n: u32,
    prime_width: u32,
    seed: Option<String>,
    version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HashDoc {
    a: String,
    b: String,
    p: String,
    t: u64,
}

impl From<&HashParams> for HashDoc {
    fn from(h: &HashParams) -> Self {
        Self {
            a: h.a().to_string(),
            b: h.b().to_string(),
            p: h.p().to_string(),
            t: h.t(),
        }
    }
}

fn decimal(field: &str, s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("{field}: {s:?} is not a decimal integer")));
    }
    Ok(s.parse().expect("validated digits"))
}

impl HashDoc {
    fn to_params(&self) -> Result<HashParams> {
        HashParams::new(
            decimal("a", &self.a)?,
            decimal("b", &self.b)?,
            decimal("p", &self.p)?,
            self.t,
        )
    }
}

fn row_hex(row: &BigUint, n: u32) -> String {
    let digits = n.div_ceil(4) as usize;
    format!("{:0>digits$}", row.to_str_radix(16))
}

pub fn serialize(tau: &TauInstance) -> String {
    let n = tau.n();
    let doc = Document {
        direction_table: DIRECTIONS.iter().map(|&(r, c)| [r, c]).collect(),
        h_col: tau.h_col().iter().map(HashDoc::from).collect(),
        h_m: tau
            .h_m()
            .iter()
            .map(|row| row.iter().map(HashDoc::from).collect())
            .collect(),
        h_row: tau.h_row().iter().map(HashDoc::from).collect(),
        matrices: tau
            .matrices()
            .iter()
            .map(|m| (0..n).map(|r| row_hex(&m.row(r), n)).collect())
            .collect(),
        n,
        prime_width: tau.prime_width(),
        seed: tau.seed().map(|s| s.to_string()),
        version: FORMAT_VERSION.to_string(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

pub fn deserialize(text: &str) -> Result<TauInstance> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match value.get("version").and_then(|v| v.as_str()) {
        Some(FORMAT_VERSION) => {}
        Some(other) => return Err(Error::Version(other.to_string())),
        None => return Err(Error::Parse("missing string field `version`".into())),
    }
    let doc: Document = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;

    let table: Vec<(i8, i8)> = doc.direction_table.iter().map(|&[r, c]| (r, c)).collect();
    if table != DIRECTIONS {
        return Err(Error::Invariant("direction_table differs from the fixed table".into()));
    }
    let n = doc.n;
    crate::tau::check_size(n)?;
    let seed = doc
        .seed
        .as_deref()
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| Error::Parse(format!("seed: {s:?} is not a u64")))
        })
        .transpose()?;

    let digits = n.div_ceil(4) as usize;
    let matrices = doc
        .matrices
        .iter()
        .enumerate()
        .map(|(i, rows)| {
            let parsed = rows
                .iter()
                .map(|hex| {
                    if hex.len() != digits || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
                        return Err(Error::Parse(format!(
                            "matrix {}: row {hex:?} is not {digits} hex digits",
                            i + 1
                        )));
                    }
                    Ok(BigUint::parse_bytes(hex.as_bytes(), 16).expect("validated hex"))
                })
                .collect::<Result<Vec<_>>>()?;
            BitMatrix::from_rows(n, &parsed)
        })
        .collect::<Result<Vec<_>>>()?;

    let params = |docs: &[HashDoc]| docs.iter().map(HashDoc::to_params).collect::<Result<Vec<_>>>();
    let h_row = params(&doc.h_row)?;
    let h_col = params(&doc.h_col)?;
    let h_m = doc
        .h_m
        .iter()
        .map(|row| params(row))
        .collect::<Result<Vec<_>>>()?;

    TauInstance::from_parts(n, doc.prime_width, seed, matrices, h_row, h_col, h_m)
}
