//! End-to-end checks of the binary: exit codes, determinism, JSON
//! round-trips, file output.

use std::process::{Command, Output};

fn hypflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypflow"))
        .args(args)
        .env_remove("HYPFLOW_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = hypflow(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gaps_table_contains_the_headline_value() {
    let text = stdout_of(&["gaps", "--p", "3"]);
    assert!(text.contains("26/9"), "{text}");
}

#[test]
fn gaps_compare_laplacians_lists_all_three() {
    let text = stdout_of(&["gaps", "--p", "2", "--compare-laplacians"]);
    for needle in ["Hodge", "Bochner", "Deformation", "Donnelly + Weitzenböck"] {
        assert!(text.contains(needle), "missing {needle} in {text}");
    }
}

#[test]
fn invalid_exponent_exits_one_with_usage_hint() {
    let out = hypflow(&["gaps", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parameter error"), "{err}");
    assert!(err.contains("--help"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_flag_is_rejected_with_exit_one() {
    let out = hypflow(&["gaps", "--p", "3", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = hypflow(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("HYPFLOW_THREADS"));
}

#[test]
fn divergent_verdict_is_a_successful_run() {
    let out = hypflow(&["exponents", "--p", "2", "--q", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("strictly-divergent"));

    let out = hypflow(&["integral", "--p", "2", "--q", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("inf"), "{text}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["gaps", "--p", "3", "--format", "json"],
        vec!["integral", "--p", "3", "--q", "6", "--sweep-t", "0.1:10:5"],
        vec![
            "simulate", "--modes", "8", "--gap", "4", "--mu", "0.1", "--t-end", "5", "--seed",
            "7",
        ],
        vec!["contraction", "--c1", "1", "--c2", "1", "--u0", "0.2", "--format", "json"],
    ] {
        let a = stdout_of(&args);
        let b = stdout_of(&args);
        assert_eq!(a, b, "non-deterministic output for {args:?}");
    }
}

#[test]
fn compare_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hypflow"))
            .args(["compare", "--gaps", "0,2,4", "--modes", "8"])
            .env("HYPFLOW_THREADS", threads)
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn json_reports_reparse_into_their_types() {
    let gaps_json = stdout_of(&["gaps", "--p", "3", "--format", "json"]);
    let _: hypflow_core::gaps::GapReport = serde_json::from_str(&gaps_json).unwrap();

    let exps_json = stdout_of(&["exponents", "--p", "3", "--q", "6", "--format", "json"]);
    let _: hypflow_core::kato::KatoExponents = serde_json::from_str(&exps_json).unwrap();

    let contraction_json = stdout_of(&[
        "contraction", "--c1", "1", "--c2", "1", "--u0", "0.3", "--format", "json",
    ]);
    let trace: hypflow_core::contraction::MajorantTrace<f64> =
        serde_json::from_str(&contraction_json).unwrap();
    assert!(matches!(
        trace.verdict,
        hypflow_core::contraction::MajorantVerdict::Diverged { .. }
    ));

    let compare_json = stdout_of(&["compare", "--gaps", "2,4", "--modes", "8", "--format", "json"]);
    let report: hypflow_core::galerkin::CompareReport =
        serde_json::from_str(&compare_json).unwrap();
    assert!(report.rates_ordered);

    let semigroup_json = stdout_of(&[
        "semigroup", "--kind", "deformation", "--p", "2", "--q", "2",
    ]);
    let report: hypflow_core::semigroup::LpLqReport =
        serde_json::from_str(&semigroup_json).unwrap();
    assert!(report.pass);
    assert!((report.fitted_rate - 3.0).abs() < 0.05);
}

#[test]
fn output_flag_writes_the_file() {
    let dir = std::env::temp_dir().join("hypflow-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kernel.csv");
    let _ = std::fs::remove_file(&path);
    let out = hypflow(&["kernel", "--t", "1", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("r,value\n"));
    assert!(text.lines().count() > 100);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn kernel_checks_report_tiny_defects() {
    let text = stdout_of(&[
        "kernel", "--t", "1", "--check-mass", "--check-semigroup", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["mass_deviation"].as_f64().unwrap() < 1e-6);
    assert!(v["composition_defect"].as_f64().unwrap() < 1e-5);
}

#[test]
fn unstable_dt_is_a_parameter_error() {
    let out = hypflow(&[
        "simulate", "--modes", "8", "--gap", "4", "--mu", "0.1", "--t-end", "5", "--dt", "100",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn integrator_instability_exits_two() {
    // an enormous state makes the quadratic term stiffer than the step size
    // tolerates; the failure must be loud, not a silent garbage trajectory
    let out = hypflow(&[
        "simulate", "--modes", "8", "--gap", "0", "--mu", "1e-6", "--t-end", "50", "--density",
        "1", "--seed", "11", "--u0-norm", "1e6",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical failure"));
}

#[test]
fn csv_rejected_where_it_has_no_meaning() {
    let out = hypflow(&["gaps", "--p", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}
