use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypoexp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn hypoexp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypoexp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn exp_sample(name: &str, count: &str, seed: &str) -> PathBuf {
    let path = scratch(name);
    let o = run(&[
        "sample",
        "--dist",
        "exp",
        "--lambda",
        "1",
        "--count",
        count,
        "--seed",
        seed,
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn eval_exponential_at_zero() {
    let o = run(&["eval", "--dist", "exp", "--lambda", "1", "--x", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "pdf=1 cdf=0\n");
}

#[test]
fn eval_table_and_structured_output() {
    let o = run(&[
        "eval", "--dist", "eme", "--n", "2", "--lambda", "1", "--w", "3", "--x", "0.5,1,2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("x=0.5 pdf="));

    let o = run(&[
        "eval",
        "--dist",
        "erlang",
        "--n",
        "2",
        "--lambda",
        "1",
        "--x",
        "1",
        "--format",
        "structured",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["pdf"].as_f64().unwrap() - (-1.0f64).exp()).abs() < 1e-15);
    assert!((v["cdf"].as_f64().unwrap() - (1.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["eval", "--dist", "exp", "--lambda", "1", "--x", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["eval", "--dist", "exp", "--lambda", "-1", "--x", "1"])
            .status
            .code(),
        Some(1)
    );
    let missing = run(&[
        "eval", "--dist", "eme", "--n", "2", "--lambda", "1", "--x", "1",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--w"));
    assert_eq!(
        run(&["eval", "--dist", "gamma", "--lambda", "1", "--x", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["gof", "--in", "/nonexistent/file"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn params_file_supplies_distribution() {
    let path = scratch("params.json");
    std::fs::write(&path, r#"{"family":"eme","n":2,"lambda":1.0,"w":3.0}"#).unwrap();
    let a = run(&["eval", "--params", path.to_str().unwrap(), "--x", "1"]);
    let b = run(&[
        "eval", "--dist", "eme", "--n", "2", "--lambda", "1", "--w", "3", "--x", "1",
    ]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn sample_is_seeded() {
    let a = run(&[
        "sample", "--dist", "eme", "--n", "2", "--lambda", "1", "--w", "0.5", "--count", "50",
        "--seed", "9",
    ]);
    let b = run(&[
        "sample", "--dist", "eme", "--n", "2", "--lambda", "1", "--w", "0.5", "--count", "50",
        "--seed", "9",
    ]);
    let c = run(&[
        "sample", "--dist", "eme", "--n", "2", "--lambda", "1", "--w", "0.5", "--count", "50",
        "--seed", "10",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
    assert_eq!(stdout(&a).lines().count(), 50);
}

#[test]
fn gof_is_reproducible_and_exits_zero() {
    let path = exp_sample("gof.txt", "200", "17");
    let args = [
        "gof",
        "--in",
        path.to_str().unwrap(),
        "--B",
        "999",
        "--format",
        "structured",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(stdout(&a).trim()).unwrap();
    let p = v["p_value"].as_f64().unwrap();
    assert!(p > 0.0 && p <= 1.0);

    let skewed = scratch("gof-skewed.txt");
    let values: Vec<String> = (1..=200)
        .map(|i| format!("{}", (i as f64 / 201.0).powi(6)))
        .collect();
    std::fs::write(&skewed, values.join("\n")).unwrap();
    let o = run(&["gof", "--in", skewed.to_str().unwrap(), "--B", "199"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reject=true"));
}

#[test]
fn gof_rejects_too_few_replicates_and_writes_residuals() {
    let path = exp_sample("gof2.txt", "40", "3");
    let o = run(&["gof", "--in", path.to_str().unwrap(), "--B", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let table = scratch("residuals.txt");
    let o = run(&[
        "gof",
        "--in",
        path.to_str().unwrap(),
        "--B",
        "99",
        "--grid-points",
        "16",
        "--residuals",
        table.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let content = std::fs::read_to_string(&table).unwrap();
    assert_eq!(content.lines().count(), 17);
    assert_eq!(content.lines().next(), Some("t residual"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = exp_sample("cfg.txt", "60", "5");
    let cfg = scratch("cfg.toml");
    std::fs::write(
        &cfg,
        "seed = 77\nformat = \"structured\"\n[gof]\nB = 149\nw = 0.5\n",
    )
    .unwrap();
    let o = run(&[
        "gof",
        "--in",
        path.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["config"]["bootstrap_reps"], 149);
    assert_eq!(v["config"]["seed"], 77);
    assert_eq!(v["config"]["w"], 0.5);
    let o = run(&[
        "gof",
        "--in",
        path.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "--B",
        "199",
        "--seed",
        "1",
        "--format",
        "text",
    ]);
    assert!(stdout(&o).contains("B=199"));

    let bad = scratch("bad.toml");
    std::fs::write(&bad, "colour = 1\n").unwrap();
    let o = run(&[
        "gof",
        "--in",
        path.to_str().unwrap(),
        "--config",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_recovers_eme_parameters() {
    let path = scratch("fit.txt");
    let o = run(&[
        "sample",
        "--dist",
        "eme",
        "--n",
        "2",
        "--lambda",
        "1",
        "--w",
        "4",
        "--count",
        "20000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = run(&[
        "fit",
        "--in",
        path.to_str().unwrap(),
        "--n",
        "2",
        "--format",
        "structured",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let lambda = v["params"]["lambda"].as_f64().unwrap();
    let w = v["params"]["w"].as_f64().unwrap();
    assert!((lambda - 1.0).abs() < 0.1, "{lambda}");
    assert!((w - 4.0).abs() < 0.6, "{w}");
    assert_eq!(
        run(&["fit", "--in", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn simulate_validates_against_closed_form() {
    let o = run(&[
        "simulate",
        "--stages",
        "1,1,1,1,0.2",
        "--count",
        "20000",
        "--format",
        "structured",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["validation"]["reference"]["family"], "eme");
    assert_eq!(v["validation"]["passed"], true);
    assert_eq!(run(&["simulate", "--count", "10"]).status.code(), Some(2));
    let a = run(&["simulate", "--stages", "2,1", "--count", "100"]);
    let b = run(&["simulate", "--stages", "2,1", "--count", "100"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn quick_verify_reports_zero_failures() {
    let o = run(&["verify", "--sweep", "quick"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("total failures: 0"));
}
