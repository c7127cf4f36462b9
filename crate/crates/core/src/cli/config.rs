//! Batch experiment configuration, read from TOML or assembled from flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::HashParams;
use crate::limits::{guard, Limits};
use crate::tau::check_size;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Census,
    Bits,
    Conditional,
    Irreducible,
    Hinv,
    CnfGrowth,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Census => "census",
            ExperimentKind::Bits => "bits",
            ExperimentKind::Conditional => "conditional",
            ExperimentKind::Irreducible => "irreducible",
            ExperimentKind::Hinv => "hinv",
            ExperimentKind::CnfGrowth => "cnf-growth",
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Census => &["y_hex", "count"],
            ExperimentKind::Bits => &["i", "freq0", "freq1", "paper_claim", "null_model"],
            ExperimentKind::Conditional => &["i", "j", "vi", "vj", "cond_freq", "uncond_freq"],
            ExperimentKind::Irreducible => &["n", "k", "size", "bound", "holds"],
            ExperimentKind::Hinv => &["m", "size"],
            ExperimentKind::CnfGrowth => &["n", "vars", "clauses"],
        }
    }

    /// Runs over a whole tau instance, given or constructed.
    fn needs_instance(self) -> bool {
        !matches!(self, ExperimentKind::Hinv | ExperimentKind::CnfGrowth)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

/// `((a*x + b) mod p) mod t` for the `hinv` experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HashSpec {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub t: u64,
}

impl HashSpec {
    /// Parses `a,b,p,t`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums = parts
            .iter()
            .map(|p| p.parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>();
        match nums.as_deref() {
            Ok([a, b, p, t]) => Ok(Self {
                a: *a,
                b: *b,
                p: *p,
                t: *t,
            }),
            _ => Err(Error::Parse(format!("hash {s:?}: expected a,b,p,t"))),
        }
    }

    pub fn params(&self) -> Result<HashParams> {
        HashParams::from_u64(self.a, self.b, self.p, self.t)
    }
}

pub const DEFAULT_K: u32 = 3;
pub const DEFAULT_GROWTH_NS: [u32; 4] = [2, 4, 8, 16];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_width: Option<u32>,
    /// Instance file to load instead of constructing one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hash: Option<HashSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Raises the `n` guards, like the environment variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<u32>,
    #[serde(default)]
    pub force: bool,
    pub out: PathBuf,
    /// Sidecar path; defaults to `<out>.meta.json`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<PathBuf>,
    #[serde(default)]
    pub format: ReportFormat,
}

fn field(name: &str, detail: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("config field `{name}`: {detail}"))
}

impl ExperimentConfig {
    pub fn new(command: ExperimentKind, out: impl Into<PathBuf>) -> Self {
        Self {
            command,
            n: None,
            seed: None,
            prime_width: None,
            instance: None,
            k: None,
            hash: None,
            n_values: None,
            workers: None,
            max_n: None,
            force: false,
            out: out.into(),
            metadata: None,
            format: ReportFormat::Csv,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("experiment config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn k_or_default(&self) -> u32 {
        self.k.unwrap_or(DEFAULT_K)
    }

    pub fn n_values_or_default(&self) -> Vec<u32> {
        self.n_values.clone().unwrap_or_else(|| DEFAULT_GROWTH_NS.to_vec())
    }

    pub fn metadata_path(&self) -> PathBuf {
        self.metadata.clone().unwrap_or_else(|| {
            let mut s = self.out.clone().into_os_string();
            s.push(".meta.json");
            PathBuf::from(s)
        })
    }

    /// Guards in force: unbounded with `force`, otherwise the defaults raised
    /// by the environment and by `max_n`.
    pub fn limits(&self) -> Result<Limits> {
        if self.force {
            return Ok(Limits::unbounded());
        }
        let base = Limits::from_env()?;
        Ok(match self.max_n {
            Some(m) => base.raised_to(m),
            None => base,
        })
    }

    /// Checks every field against the command it feeds. Field errors name
    /// the field; guard violations come back as [`Error::Guard`].
    pub fn validate(&self) -> Result<()> {
        let cmd = self.command;
        let only = |name: &str, present: bool, users: &str| {
            if present {
                Err(field(name, format!("not used by `{}` (only by {users})", cmd.name())))
            } else {
                Ok(())
            }
        };
        if self.workers == Some(0) {
            return Err(field("workers", "must be at least 1"));
        }
        let limits = self.limits()?;

        if cmd.needs_instance() {
            match (self.n, &self.instance) {
                (Some(_), Some(_)) => return Err(field("n", "give either `n` or `instance`, not both")),
                (None, None) => return Err(field("n", "required unless `instance` is given")),
                (Some(n), None) => {
                    check_size(n).map_err(|e| field("n", e))?;
                    if let Some(w) = self.prime_width {
                        if w < 2 {
                            return Err(field("prime_width", "must be at least 2"));
                        }
                    }
                }
                (None, Some(_)) => {
                    if self.prime_width.is_some() || self.seed.is_some() {
                        return Err(field(
                            if self.seed.is_some() { "seed" } else { "prime_width" },
                            "fixed by the loaded instance",
                        ));
                    }
                }
            }
            if let Some(n) = self.n {
                let (what, limit) = match cmd {
                    ExperimentKind::Irreducible => ("irreducible census", limits.irreducible_n),
                    _ => ("preimage census", limits.census_n),
                };
                guard(what, n, limit)?;
            }
        } else {
            only("instance", self.instance.is_some(), "census, bits, conditional and irreducible")?;
            only("prime_width", self.prime_width.is_some(), "census, bits, conditional and irreducible")?;
        }

        if cmd == ExperimentKind::Irreducible {
            let k = self.k_or_default();
            if k.is_multiple_of(2) || k <= 2 {
                return Err(field("k", format!("{k} must be odd and greater than 2")));
            }
            if let Some(n) = self.n {
                if k >= n {
                    return Err(field("k", format!("{k} must be below n = {n}")));
                }
            }
        } else {
            only("k", self.k.is_some(), "irreducible")?;
        }

        if cmd == ExperimentKind::Hinv {
            let h = self.hash.ok_or_else(|| field("hash", "required by `hinv`"))?;
            h.params().map_err(|e| field("hash", e))?;
            let n = self.n.ok_or_else(|| field("n", "required by `hinv`"))?;
            if n == 0 || n >= 64 {
                return Err(field("n", format!("{n} must lie in 1..=63")));
            }
            guard("hash preimage enumeration", n, limits.h_inv_n)?;
            only("seed", self.seed.is_some(), "the instance-based commands and cnf-growth")?;
        } else {
            only("hash", self.hash.is_some(), "hinv")?;
        }

        if cmd == ExperimentKind::CnfGrowth {
            only("n", self.n.is_some(), "the other commands; use `n_values`")?;
            let ns = self.n_values_or_default();
            if ns.is_empty() {
                return Err(field("n_values", "must not be empty"));
            }
            for &n in &ns {
                check_size(n).map_err(|e| field("n_values", e))?;
            }
            let mut sorted = ns.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != ns.len() {
                return Err(field("n_values", "values must be distinct"));
            }
        } else {
            only("n_values", self.n_values.is_some(), "cnf-growth")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml(text)
    }

    #[test]
    fn full_config_parses() {
        let cfg = parse(
            r#"
command = "irreducible"
n = 8
seed = 42
k = 5
workers = 2
out = "ir.csv"
format = "json"
"#,
        )
        .unwrap();
        assert_eq!(cfg.command, ExperimentKind::Irreducible);
        assert_eq!(cfg.k_or_default(), 5);
        assert_eq!(cfg.format, ReportFormat::Json);
        assert_eq!(cfg.metadata_path(), PathBuf::from("ir.csv.meta.json"));
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_field_is_rejected() {
        let err = parse("command = \"bits\"\nn = 4\nout = \"b.csv\"\nbudget = 3\n").unwrap_err();
        assert!(err.to_string().contains("budget"), "{err}");
    }

    #[test]
    fn field_errors_name_the_field() {
        let cases = [
            ("command = \"bits\"\nn = 6\nout = \"o\"\n", "`n`"),
            ("command = \"bits\"\nout = \"o\"\n", "`n`"),
            ("command = \"irreducible\"\nn = 8\nk = 4\nout = \"o\"\n", "`k`"),
            ("command = \"irreducible\"\nn = 4\nk = 5\nout = \"o\"\n", "`k`"),
            ("command = \"census\"\nn = 4\nk = 3\nout = \"o\"\n", "`k`"),
            ("command = \"hinv\"\nn = 3\nout = \"o\"\n", "`hash`"),
            ("command = \"hinv\"\nn = 3\nhash = { a = 0, b = 1, p = 5, t = 2 }\nout = \"o\"\n", "`hash`"),
            ("command = \"cnf-growth\"\nn_values = [2, 3]\nout = \"o\"\n", "`n_values`"),
            ("command = \"cnf-growth\"\nn_values = [2, 2]\nout = \"o\"\n", "`n_values`"),
            ("command = \"bits\"\nn = 4\nworkers = 0\nout = \"o\"\n", "`workers`"),
        ];
        for (text, name) in cases {
            let err = parse(text).and_then(|c| c.validate()).unwrap_err();
            assert!(err.to_string().contains(name), "{text}: {err}");
        }
    }

    #[test]
    fn guards_and_force() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Census, "c.csv");
        cfg.n = Some(32);
        assert!(matches!(cfg.validate(), Err(Error::Guard { .. })));
        cfg.max_n = Some(32);
        cfg.validate().unwrap();
        cfg.max_n = None;
        cfg.force = true;
        cfg.validate().unwrap();
    }

    #[test]
    fn hash_spec_parsing() {
        assert_eq!(
            HashSpec::parse("1, 1,5,2").unwrap(),
            HashSpec { a: 1, b: 1, p: 5, t: 2 }
        );
        assert!(HashSpec::parse("1,1,5").is_err());
        assert!(HashSpec::parse("1,x,5,2").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Hinv, "h.csv");
        cfg.n = Some(3);
        cfg.hash = Some(HashSpec { a: 1, b: 1, p: 5, t: 2 });
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(parse(&text).unwrap(), cfg);
    }
}
