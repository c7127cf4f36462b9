//! The `taulab` command line.
//!
//! Exit status: 0 on success, 1 for usage and input errors, 2 when a size
//! guard refuses the run, 3 when an internal invariant fails.

pub mod config;
pub mod experiment;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::cnf::{build_circuit, emit_dimacs, run_solver, tseitin, witness_from_model, SolverOutcome, SOLVER_ENV};
use crate::error::{Error, Result};
use crate::format::serialize;
use crate::lab::attack::{randomized_invert, AttackConfig, DEFAULT_ENVELOPE_EXPONENTS};
use crate::lab::preimage::{brute_force_preimage, preimage_census, with_workers};
use crate::limits::Limits;
use crate::tau::{format_hex, parse_value, TauInstance};

pub use config::{ExperimentConfig, ExperimentKind, HashSpec, ReportFormat};
pub use experiment::{load_instance, run_experiment, write_experiment, ExperimentOutput, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "taulab", version, about = "Construct, evaluate and attack tau instances")]
pub struct Cli {
    /// Worker threads for the exhaustive commands.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an instance and write it as a taulab-1 file.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        prime_width: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate an instance at one input.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        /// Decimal or 0x-prefixed hexadecimal.
        #[arg(long)]
        x: String,
        /// Print the walk behind every output bit.
        #[arg(long)]
        trace: bool,
    },
    /// Search for preimages of an output.
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        y: String,
        /// Enumerate the whole domain.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        brute: bool,
        /// Guess uniformly at random.
        #[arg(long, requires = "budget")]
        random: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exponents c of the n^-c envelopes to report.
        #[arg(long, value_delimiter = ',')]
        envelopes: Option<Vec<u32>>,
        /// Ignore the size guards.
        #[arg(long)]
        force: bool,
    },
    /// Run a batch experiment and write a CSV report with a metadata sidecar.
    Experiment(ExperimentArgs),
    /// Write the Tseitin CNF of an instance in DIMACS form.
    Cnf {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Pin the outputs to this value.
        #[arg(long)]
        fix_y: Option<String>,
        /// Hand the file to the solver named by TAULAB_SAT_SOLVER and check its answer.
        #[arg(long, requires = "fix_y")]
        solve: bool,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Debug, Default, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: Option<ExperimentKind>,
    /// TOML experiment description; excludes the other experiment flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub prime_width: Option<u32>,
    /// Use this instance file instead of constructing one.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Hash for `hinv` as a,b,p,t.
    #[arg(long)]
    pub hash: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub n_values: Option<Vec<u32>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub metadata: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    #[arg(long)]
    pub max_n: Option<u32>,
    #[arg(long)]
    pub force: bool,
}

impl ExperimentArgs {
    fn has_flags(&self) -> bool {
        self.kind.is_some()
            || self.n.is_some()
            || self.seed.is_some()
            || self.prime_width.is_some()
            || self.input.is_some()
            || self.k.is_some()
            || self.hash.is_some()
            || self.n_values.is_some()
            || self.out.is_some()
            || self.metadata.is_some()
            || self.format.is_some()
            || self.max_n.is_some()
            || self.force
    }

    pub fn to_config(&self, workers: Option<usize>) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                if self.has_flags() {
                    return Err(Error::InvalidArgument(
                        "--config excludes the experiment name and flags".into(),
                    ));
                }
                ExperimentConfig::load(path)?
            }
            None => {
                let kind = self.kind.ok_or_else(|| {
                    Error::InvalidArgument("name an experiment or pass --config".into())
                })?;
                let out = self
                    .out
                    .clone()
                    .ok_or_else(|| Error::InvalidArgument("--out is required".into()))?;
                let mut cfg = ExperimentConfig::new(kind, out);
                cfg.n = self.n;
                cfg.seed = self.seed;
                cfg.prime_width = self.prime_width;
                cfg.instance = self.input.clone();
                cfg.k = self.k;
                cfg.hash = self.hash.as_deref().map(HashSpec::parse).transpose()?;
                cfg.n_values = self.n_values.clone();
                cfg.metadata = self.metadata.clone();
                cfg.format = self.format.unwrap_or_default();
                cfg.max_n = self.max_n;
                cfg.force = self.force;
                cfg
            }
        };
        if workers.is_some() {
            cfg.workers = workers;
        }
        Ok(cfg)
    }
}

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Guard { .. } => EXIT_GUARD,
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_USAGE,
    }
}

fn limits(force: bool) -> Result<Limits> {
    if force {
        Ok(Limits::unbounded())
    } else {
        Limits::from_env()
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn in_range(v: BigUint, what: &'static str, n: u32) -> Result<BigUint> {
    if v.bits() > n as u64 {
        return Err(Error::OutOfRange {
            what,
            detail: format!("{v:#x} needs more than {n} bits"),
        });
    }
    Ok(v)
}

fn small(v: &BigUint, what: &str) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::InvalidArgument(format!("{what} does not fit 64 bits")))
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("output: {e}"))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Construct {
            n,
            seed,
            prime_width,
            out: path,
        } => {
            let tau = TauInstance::construct(n, seed, prime_width)?;
            tau.validate()?;
            write_file(&path, &serialize(&tau))?;
            writeln!(
                out,
                "n={} prime_width={} seed={} constraints=ok -> {}",
                tau.n(),
                tau.prime_width(),
                seed,
                path.display()
            )
            .map_err(io)?;
        }
        Command::Eval { input, x, trace } => {
            let tau = load_instance(&input)?;
            let n = tau.n();
            let x = in_range(parse_value(&x)?, "x", n)?;
            let (y, traces) = tau.evaluate_traced(&x)?;
            writeln!(out, "{}", format_hex(&y, n)).map_err(io)?;
            if trace {
                for (i, t) in traces.iter().enumerate() {
                    let dirs: Vec<String> = t.directions.iter().map(u8::to_string).collect();
                    let path: Vec<String> = t.visited.iter().map(|(r, c)| format!("({r},{c})")).collect();
                    writeln!(
                        out,
                        "y_{} = {} start=({},{}) directions={} path={}",
                        i + 1,
                        t.bit as u8,
                        t.start.0,
                        t.start.1,
                        dirs.join(","),
                        path.join(",")
                    )
                    .map_err(io)?;
                }
            }
        }
        Command::Invert {
            input,
            y,
            brute,
            random: _,
            budget,
            seed,
            envelopes,
            force,
        } => {
            let tau = load_instance(&input)?;
            let n = tau.n();
            let y = in_range(parse_value(&y)?, "y", n)?;
            let limits = limits(force)?;
            if brute {
                let y = small(&y, "y")?;
                let set = with_workers(cli.workers, || brute_force_preimage(&tau, y, &limits))?;
                writeln!(out, "preimages: {}", set.len()).map_err(io)?;
                for x in set {
                    writeln!(out, "{}", format_hex(&BigUint::from(x), n)).map_err(io)?;
                }
            } else {
                let mut config = AttackConfig::new(budget.unwrap_or(0), seed);
                config.envelope_exponents = envelopes.unwrap_or_else(|| DEFAULT_ENVELOPE_EXPONENTS.to_vec());
                let outcome = randomized_invert(&tau, &y, &config)?;
                let mut report = outcome.report;
                // exact success probability when a census is affordable
                if n <= limits.census_n && n < 64 {
                    let census = with_workers(cli.workers, || preimage_census(&tau, &limits))?;
                    report = report.with_census(&census, small(&y, "y")?)?;
                }
                match outcome.witness {
                    Some(w) => writeln!(out, "witness: {}", format_hex(&w, n)),
                    None => writeln!(out, "no witness"),
                }
                .map_err(io)?;
                let fmt_opt = |v: Option<f64>| v.map_or("none".to_string(), |v| v.to_string());
                writeln!(out, "trials={}", report.trials).map_err(io)?;
                writeln!(out, "successes={}", report.successes).map_err(io)?;
                writeln!(out, "estimate={}", fmt_opt(report.estimate)).map_err(io)?;
                writeln!(out, "census_ratio={}", fmt_opt(report.census_ratio)).map_err(io)?;
                for (c, v) in &report.envelopes {
                    writeln!(out, "envelope_n^-{c}={v}").map_err(io)?;
                }
                writeln!(out, "paper_claim_per_bit={}", report.paper_claim_per_bit).map_err(io)?;
            }
        }
        Command::Experiment(args) => {
            let cfg = args.to_config(cli.workers)?;
            let result = write_experiment(&cfg)?;
            writeln!(
                out,
                "{}: {} rows -> {} (metadata {})",
                cfg.command.name(),
                result.table.rows.len(),
                cfg.out.display(),
                cfg.metadata_path().display()
            )
            .map_err(io)?;
        }
        Command::Cnf {
            input,
            out: path,
            fix_y,
            solve,
            force,
        } => {
            let tau = load_instance(&input)?;
            let n = tau.n();
            let y = fix_y
                .as_deref()
                .map(|s| parse_value(s).and_then(|v| in_range(v, "y", n)))
                .transpose()?;
            let cnf = tseitin(&build_circuit(&tau, &limits(force)?)?);
            let text = emit_dimacs(&cnf, y.as_ref())?;
            write_file(&path, &text)?;
            let units = if y.is_some() { n as usize } else { 0 };
            writeln!(
                out,
                "variables={} clauses={} -> {}",
                cnf.num_vars(),
                cnf.clauses().len() + units,
                path.display()
            )
            .map_err(io)?;
            if solve {
                let y = y.expect("clap requires --fix-y");
                let solver = std::env::var_os(SOLVER_ENV)
                    .ok_or_else(|| Error::InvalidArgument(format!("--solve needs {SOLVER_ENV}")))?;
                match run_solver(Path::new(&solver), &path)? {
                    SolverOutcome::Satisfiable(model) => {
                        let w = witness_from_model(&cnf, &model);
                        let back = tau.evaluate(&w)?;
                        if back != y {
                            return Err(Error::Invariant(format!(
                                "solver witness {} maps to {}, not {}",
                                format_hex(&w, n),
                                format_hex(&back, n),
                                format_hex(&y, n)
                            )));
                        }
                        writeln!(out, "witness: {} (checked)", format_hex(&w, n)).map_err(io)?;
                    }
                    SolverOutcome::Unsatisfiable => writeln!(out, "unsatisfiable: y has no preimage").map_err(io)?,
                    SolverOutcome::Unknown => writeln!(out, "solver gave no answer").map_err(io)?,
                }
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Results go to `out`, diagnostics to standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if cli.workers == Some(0) {
        eprintln!("taulab: error: --workers must be at least 1");
        return EXIT_USAGE;
    }
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("taulab: error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("taulab").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::Guard { what: "x", n: 30, limit: 20 }), EXIT_GUARD);
        assert_eq!(exit_code(&Error::Invariant("x".into())), EXIT_INVARIANT);
        assert_eq!(exit_code(&Error::NotPowerOfTwo(5)), EXIT_USAGE);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["construct", "--n", "8"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn experiment_config_excludes_flags() {
        let args = ExperimentArgs {
            config: Some("x.toml".into()),
            n: Some(4),
            ..Default::default()
        };
        assert!(args.to_config(None).is_err());
        let none = ExperimentArgs::default();
        assert!(none.to_config(None).is_err());
    }
}
