//! Runs an [`ExperimentConfig`] and renders its table and metadata.

use std::path::Path;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::cli::config::{ExperimentConfig, ExperimentKind, ReportFormat};
use crate::cnf::clause_growth_report;
use crate::error::{Error, Result};
use crate::format::{deserialize, FORMAT_VERSION};
use crate::lab::preimage::{
    claimed_bit_probability, conditional_bit_probability, h_inv_sizes, preimage_census, uniform_preimage_size,
    with_workers, NULL_MODEL_BIT_PROBABILITY,
};
use crate::lab::irreducible_census;
use crate::tau::{format_hex, TauInstance};

pub const BITS_NOTE: &str = "freq0 and freq1 are measured over the whole domain; paper_claim is the \
claimed per-bit probability (1/8)^n and null_model the fair-coin value 0.5, both listed for \
comparison and never asserted";

/// A report table: fixed header, one JSON value per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn cell(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
        w.write_record(self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Self::cell)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("json rows");
        s.push('\n');
        s
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => Ok(self.to_json()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub table: Table,
    pub metadata: Value,
}

fn instance(cfg: &ExperimentConfig) -> Result<TauInstance> {
    match (&cfg.instance, cfg.n) {
        (Some(path), _) => load_instance(path),
        (None, Some(n)) => TauInstance::construct(n, cfg.seed_or_default(), cfg.prime_width),
        (None, None) => Err(Error::InvalidArgument("config field `n`: required".into())),
    }
}

pub fn load_instance(path: &Path) -> Result<TauInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    deserialize(&text)
}

fn float(x: f64) -> Value {
    json!(x)
}

fn opt_float(x: Option<f64>) -> Value {
    x.map_or(Value::Null, float)
}

/// Validates `cfg`, runs it and returns the table with its metadata.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let limits = cfg.limits()?;
    let mut extra = Map::new();
    let mut tau_meta = Value::Null;

    let rows: Vec<Vec<Value>> = with_workers(cfg.workers, || -> Result<Vec<Vec<Value>>> {
        match cfg.command {
            ExperimentKind::Census | ExperimentKind::Bits | ExperimentKind::Conditional => {
                let tau = instance(cfg)?;
                tau_meta = instance_meta(&tau);
                let census = preimage_census(&tau, &limits)?;
                let n = tau.n();
                extra.insert("distinct_outputs".into(), json!(census.distinct_outputs()));
                match cfg.command {
                    ExperimentKind::Census => Ok(census
                        .counts()
                        .iter()
                        .map(|(&y, &c)| vec![json!(format_hex(&BigUint::from(y), n)), json!(c)])
                        .collect()),
                    ExperimentKind::Bits => {
                        extra.insert("note".into(), json!(BITS_NOTE));
                        (1..=n)
                            .map(|i| {
                                Ok(vec![
                                    json!(i),
                                    float(census.freq(i, false)?),
                                    float(census.freq(i, true)?),
                                    float(claimed_bit_probability(n)),
                                    float(NULL_MODEL_BIT_PROBABILITY),
                                ])
                            })
                            .collect()
                    }
                    _ => {
                        let mut rows = Vec::new();
                        for i in 1..=n {
                            for j in (1..=n).filter(|&j| j != i) {
                                for vi in [false, true] {
                                    for vj in [false, true] {
                                        let cond = conditional_bit_probability(&census, i, j, vi, vj)?;
                                        rows.push(vec![
                                            json!(i),
                                            json!(j),
                                            json!(vi as u8),
                                            json!(vj as u8),
                                            opt_float(cond),
                                            float(census.freq(i, vi)?),
                                        ]);
                                    }
                                }
                            }
                        }
                        Ok(rows)
                    }
                }
            }
            ExperimentKind::Irreducible => {
                let tau = instance(cfg)?;
                tau_meta = instance_meta(&tau);
                let r = irreducible_census(&tau, cfg.k_or_default(), &limits, false)?;
                Ok(vec![vec![
                    json!(r.n),
                    json!(r.k),
                    json!(r.size),
                    float(r.bound),
                    json!(r.bound_holds),
                ]])
            }
            ExperimentKind::Hinv => {
                let spec = cfg.hash.expect("validated");
                let h = spec.params()?;
                let n = cfg.n.expect("validated");
                extra.insert("hash".into(), json!(spec));
                extra.insert("uniform_size".into(), float(uniform_preimage_size(n, h.t())));
                let sizes = h_inv_sizes(&h, n, &limits)?;
                Ok(sizes
                    .iter()
                    .enumerate()
                    .map(|(m, &s)| vec![json!(m), json!(s)])
                    .collect())
            }
            ExperimentKind::CnfGrowth => {
                let report = clause_growth_report(cfg.seed_or_default(), &cfg.n_values_or_default(), &limits)?;
                extra.insert("clause_exponent".into(), opt_float(report.clause_exponent));
                extra.insert("gate_exponent".into(), opt_float(report.gate_exponent));
                extra.insert(
                    "gates".into(),
                    report.rows.iter().map(|r| json!([r.n, r.gates])).collect(),
                );
                extra.insert("note".into(), json!(report.note));
                Ok(report
                    .rows
                    .iter()
                    .map(|r| vec![json!(r.n), json!(r.variables), json!(r.clauses)])
                    .collect())
            }
        }
    })?;

    let table = Table {
        header: cfg.command.header(),
        rows,
    };
    let mut meta = Map::new();
    meta.insert("command".into(), json!(cfg.command.name()));
    meta.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    meta.insert("format_version".into(), json!(FORMAT_VERSION));
    meta.insert("guards".into(), serde_json::to_value(limits).expect("limits serialize"));
    meta.insert("header".into(), json!(table.header));
    meta.insert("instance".into(), tau_meta);
    meta.insert("rows".into(), json!(table.rows.len()));
    meta.insert("taulab_version".into(), json!(env!("CARGO_PKG_VERSION")));
    meta.extend(extra);
    Ok(ExperimentOutput {
        table,
        metadata: Value::Object(meta),
    })
}

fn instance_meta(tau: &TauInstance) -> Value {
    json!({
        "n": tau.n(),
        "prime_width": tau.prime_width(),
        "seed": tau.seed(),
    })
}

/// Runs `cfg` and writes the report and its sidecar.
pub fn write_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let out = run_experiment(cfg)?;
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    };
    write(&cfg.out, out.table.render(cfg.format)?)?;
    let mut meta = serde_json::to_string_pretty(&out.metadata).expect("metadata serializes");
    meta.push('\n');
    write(&cfg.metadata_path(), meta)?;
    Ok(out)
}
