use std::path::Path;
use std::process::{Command, Output};

use taulab::format::deserialize;

fn taulab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taulab"))
        .args(args)
        .current_dir(dir)
        .env_remove("TAULAB_MAX_N")
        .env_remove("TAULAB_SAT_SOLVER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn construct(dir: &Path, n: &str, seed: &str, file: &str) {
    let o = taulab(dir, &["construct", "--n", n, "--seed", seed, "--out", file]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn construct_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "8", "42", "a.tl1");
    construct(dir.path(), "8", "42", "b.tl1");
    let a = std::fs::read(dir.path().join("a.tl1")).unwrap();
    let b = std::fs::read(dir.path().join("b.tl1")).unwrap();
    assert_eq!(a, b);
    let tau = deserialize(std::str::from_utf8(&a).unwrap()).unwrap();
    tau.validate().unwrap();
    assert_eq!(tau.n(), 8);
}

#[test]
fn construct_rejects_non_power_of_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = taulab(dir.path(), &["construct", "--n", "5", "--seed", "1", "--out", "x.tl1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a power of two"));
    assert!(!dir.path().join("x.tl1").exists());
}

#[test]
fn eval_radix_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "8", "42", "t.tl1");
    let hex = taulab(dir.path(), &["eval", "--in", "t.tl1", "--x", "0x2A"]);
    let dec = taulab(dir.path(), &["eval", "--in", "t.tl1", "--x", "42"]);
    assert_eq!(stdout(&hex), stdout(&dec));
    let y = stdout(&hex);
    assert!(y.starts_with("0x") && y.trim().len() == 4);
    let traced = stdout(&taulab(dir.path(), &["eval", "--in", "t.tl1", "--x", "42", "--trace"]));
    let trace_lines = traced.lines().filter(|l| l.starts_with("y_")).count();
    assert_eq!(trace_lines, 8);
    let o = taulab(dir.path(), &["eval", "--in", "t.tl1", "--x", "256"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invert_modes() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "8", "42", "t.tl1");
    let y = stdout(&taulab(dir.path(), &["eval", "--in", "t.tl1", "--x", "0x2a"]));
    let y = y.trim();
    let brute = stdout(&taulab(dir.path(), &["invert", "--in", "t.tl1", "--y", y, "--brute"]));
    assert!(brute.lines().any(|l| l == "0x2a"), "{brute}");

    let none = stdout(&taulab(
        dir.path(),
        &["invert", "--in", "t.tl1", "--y", y, "--random", "--budget", "0"],
    ));
    assert!(none.contains("no witness"));
    assert!(none.contains("trials=0"));

    let rnd = stdout(&taulab(
        dir.path(),
        &["invert", "--in", "t.tl1", "--y", y, "--random", "--budget", "4000", "--seed", "3", "--envelopes", "1,4"],
    ));
    assert!(rnd.contains("envelope_n^-4="));
    assert!(rnd.contains("census_ratio=0.0078125"), "{rnd}");

    let o = taulab(dir.path(), &["invert", "--in", "t.tl1", "--y", y]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn guard_violations_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = taulab(dir.path(), &["experiment", "census", "--n", "32", "--out", "c.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = taulab(dir.path(), &["experiment", "irreducible", "--n", "32", "--out", "c.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_max_n_environment_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_taulab"))
        .args(["experiment", "census", "--n", "32", "--out", "c.csv"])
        .current_dir(dir.path())
        .env("TAULAB_MAX_N", "nonsense")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn experiment_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = taulab(d, &["experiment", "census", "--n", "8", "--seed", "2", "--out", "census.csv"]);
    assert!(o.status.success());
    let census = std::fs::read_to_string(d.join("census.csv")).unwrap();
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("census.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(census.lines().next(), Some("y_hex,count"));
    assert_eq!(
        census.lines().count() as u64 - 1,
        meta["distinct_outputs"].as_u64().unwrap()
    );
    assert_eq!(meta["guards"]["census_n"], 20);

    let o = taulab(d, &["experiment", "bits", "--n", "4", "--out", "bits.csv", "--workers", "2"]);
    assert!(o.status.success());
    let bits = std::fs::read_to_string(d.join("bits.csv")).unwrap();
    assert_eq!(bits.lines().next(), Some("i,freq0,freq1,paper_claim,null_model"));
    assert_eq!(bits.lines().count(), 5);

    for (kind, header) in [
        ("conditional", "i,j,vi,vj,cond_freq,uncond_freq"),
        ("irreducible", "n,k,size,bound,holds"),
    ] {
        let out = format!("{kind}.csv");
        let o = taulab(d, &["experiment", kind, "--n", "8", "--out", &out]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(d.join(&out)).unwrap();
        assert_eq!(text.lines().next(), Some(header));
    }

    let o = taulab(d, &["experiment", "hinv", "--n", "3", "--hash", "1,1,5,2", "--out", "h.csv"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(d.join("h.csv")).unwrap(), "m,size\n0,4\n1,4\n");

    let o = taulab(d, &["experiment", "cnf-growth", "--n-values", "2,4", "--out", "g.csv"]);
    assert!(o.status.success());
    let g = std::fs::read_to_string(d.join("g.csv")).unwrap();
    assert_eq!(g.lines().next(), Some("n,vars,clauses"));
    assert_eq!(g.lines().count(), 3);
}

#[test]
fn experiment_from_config_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("exp.toml"),
        "command = \"bits\"\nn = 8\nseed = 9\nout = \"from_config.csv\"\n",
    )
    .unwrap();
    assert!(taulab(d, &["experiment", "--config", "exp.toml"]).status.success());
    assert!(taulab(d, &["experiment", "bits", "--n", "8", "--seed", "9", "--out", "from_flags.csv"])
        .status
        .success());
    assert_eq!(
        std::fs::read(d.join("from_config.csv")).unwrap(),
        std::fs::read(d.join("from_flags.csv")).unwrap()
    );

    std::fs::write(d.join("bad.toml"), "command = \"bits\"\nn = 8\nout = \"x.csv\"\ncolour = 1\n").unwrap();
    let o = taulab(d, &["experiment", "--config", "bad.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    let o = taulab(d, &["experiment", "--config", "exp.toml", "--n", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn census_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for w in ["1", "3"] {
        let out = format!("c{w}.csv");
        let o = taulab(d, &["--workers", w, "experiment", "census", "--n", "8", "--out", &out]);
        assert!(o.status.success());
    }
    assert_eq!(
        std::fs::read(d.join("c1.csv")).unwrap(),
        std::fs::read(d.join("c3.csv")).unwrap()
    );
}

#[test]
fn cnf_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    construct(d, "4", "7", "t.tl1");
    let free = taulab(d, &["cnf", "--in", "t.tl1", "--out", "free.cnf"]);
    assert!(free.status.success());
    assert!(stdout(&free).starts_with("variables="));
    let fixed = taulab(d, &["cnf", "--in", "t.tl1", "--out", "fixed.cnf", "--fix-y", "0x3"]);
    assert!(fixed.status.success());

    let body = |name: &str| {
        let text = std::fs::read_to_string(d.join(name)).unwrap();
        let first = text.lines().next().unwrap().to_string();
        assert!(first.starts_with('c'));
        let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap().to_string();
        let clauses = text.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).count();
        (header, clauses)
    };
    let (h_free, c_free) = body("free.cnf");
    let (h_fixed, c_fixed) = body("fixed.cnf");
    assert_eq!(c_fixed, c_free + 4);
    assert!(h_free.ends_with(&format!(" {c_free}")));
    assert!(h_fixed.ends_with(&format!(" {c_fixed}")));

    let o = taulab(d, &["cnf", "--in", "t.tl1", "--out", "bad.cnf", "--fix-y", "16"]);
    assert_eq!(o.status.code(), Some(1));
    let o = taulab(d, &["cnf", "--in", "t.tl1", "--out", "s.cnf", "--fix-y", "3", "--solve"]);
    assert_eq!(o.status.code(), Some(1), "no solver configured");
}

#[test]
fn wide_primes_hit_the_circuit_guard() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = taulab(d, &["construct", "--n", "2", "--seed", "1", "--prime-width", "40", "--out", "w.tl1"]);
    assert!(o.status.success());
    let o = taulab(d, &["cnf", "--in", "w.tl1", "--out", "w.cnf"]);
    assert_eq!(o.status.code(), Some(2));
    let o = taulab(d, &["cnf", "--in", "w.tl1", "--out", "w.cnf", "--force"]);
    assert!(o.status.success());
}
