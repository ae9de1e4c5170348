use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(format!("{name}.json"))
}

fn opdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opdef")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = opdef(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn run_example(cmd: &str, name: &str, extra: &[&str]) -> Value {
    let path = example(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    report(&args)
}

fn f64s(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

/// Every bundled spec with the command it is meant for and the expected verdict.
const BUNDLED: &[(&str, &str, &[&str], &str)] = &[
    ("check-pd", "counterexample", &[], "positive"),
    ("power-pd", "counterexample", &["--n", "2"], "indefinite"),
    ("check-pd", "final_example", &[], "positive"),
    ("power-compat", "final_example", &["--n", "2"], "incompatible"),
    ("dilate", "s3_fix1", &[], "dilated"),
    ("verify-dilation", "s3_fix1_with_dilation", &[], "valid"),
    ("compression", "s3_compression", &[], "positive"),
    ("rep-verify", "s3_permutation_rep", &[], "valid"),
    ("rep-power", "s3_permutation_rep", &["--n", "2"], "not-a-representation"),
    ("rep-structure", "cyclic_rep", &[], "decomposed"),
    ("rep-structure", "symmetric_commutative_rep", &[], "decomposed"),
    ("rep-structure", "dihedral_commutative_rep", &[], "decomposed"),
    ("rep-power", "dihedral_commutative_rep", &["--n", "2"], "representation"),
    ("gamma", "gamma", &[], "positive"),
    ("three-by-three", "three_by_three", &[], "positive"),
    ("z2", "z2", &[], "positive"),
    ("z3", "z3", &[], "positive"),
    ("z4", "z4", &[], "positive"),
    ("klein", "klein", &[], "positive"),
    ("half-power", "half_power", &[], "computed"),
    ("z-trunc", "z_trunc", &["--level", "4"], "positive up to level 4"),
    ("z-trunc", "z_trunc_expansive", &["--level", "1"], "indefinite at level 1"),
    ("doubly-commuting", "doubly_commuting", &[], "doubly-commuting"),
    ("doubly-commuting", "commuting_not_doubly", &[], "commuting"),
    ("brehmer", "doubly_commuting", &[], "passes"),
    ("zz-trunc", "doubly_commuting", &["--level", "2"], "positive up to level 2"),
];

#[test]
fn every_bundled_spec_is_exercised() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    for entry in std::fs::read_dir(dir).unwrap() {
        let name = entry.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned();
        assert!(BUNDLED.iter().any(|b| b.1 == name), "{name} has no test");
    }
    for (cmd, name, extra, verdict) in BUNDLED {
        let r = run_example(cmd, name, extra);
        assert_eq!(r["verdict"], *verdict, "{cmd} {name}");
        assert_eq!(r["command"], *cmd);
    }
}

#[test]
fn counterexample_spectrum_and_power() {
    let r = run_example("check-pd", "counterexample", &[]);
    let ev = f64s(&r["certificates"]["psd"]["eigenvalues"]);
    let s = 2f64.sqrt();
    for (got, want) in ev.iter().zip([0.0, 2.0 - s, 2.0, 2.0 + s]) {
        assert!((got - want).abs() < 1e-9, "{ev:?}");
    }
    let r = run_example("power-pd", "counterexample", &["--n", "2"]);
    assert!((r["certificates"]["determinant"].as_f64().unwrap() + 11.0).abs() < 1e-6);
}

#[test]
fn fix1_dilation_is_three_dimensional() {
    let r = run_example("dilate", "s3_fix1", &[]);
    assert_eq!(r["certificates"]["dim_k"], 3);
    assert_eq!(r["certificates"]["residuals"]["minimality_defect"], 0);
}

#[test]
fn final_example_witness_is_the_generator() {
    let r = run_example("power-compat", "final_example", &["--n", "2"]);
    let c = &r["certificates"];
    assert_eq!(c["precondition_met"], true);
    assert_eq!(c["witness"], 1);
    assert!(c["function_residual"].as_f64().unwrap() > 0.5);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (cmd, name, extra) in [("rep-structure", "cyclic_rep", &[][..]), ("brehmer", "doubly_commuting", &["--seed", "9"][..])] {
        let path = example(name);
        let mut args = vec![cmd, path.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(opdef(&args).stdout, opdef(&args).stdout);
    }
}

#[test]
fn counterexample_det_without_spec() {
    let r = report(&["counterexample-det", "--n", "4"]);
    let c = &r["certificates"];
    assert_eq!(r["verdict"], "negative");
    assert!((c["closed_form"].as_f64().unwrap() - c["numeric"].as_f64().unwrap()).abs() < 1e-6);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("opdef-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("r.json");
    let path = example("z2");
    let o = opdef(&["z2", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "positive");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("opdef-cli-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let garbage = write("garbage.json", "{ not json");
    assert_eq!(opdef(&["check-pd", &garbage]).status.code(), Some(2));
    assert_eq!(opdef(&["check-pd", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(opdef(&["no-such-command"]).status.code(), Some(2));
    let version = write("version.json", r#"{"schema_version":"0"}"#);
    assert_eq!(opdef(&["check-pd", &version]).status.code(), Some(3));
    let shape = write(
        "shape.json",
        r#"{"schema_version":"1","group":{"kind":"cyclic","n":3},"function":{"values":[[[1]],[[0]]]}}"#,
    );
    assert_eq!(opdef(&["check-pd", &shape]).status.code(), Some(3));
    let big = write("big.json", r#"{"schema_version":"1","operators":{"T":[[2]]}}"#);
    assert_eq!(opdef(&["half-power", &big]).status.code(), Some(3));
    assert_eq!(opdef(&["counterexample-det", "--n", "2"]).status.code(), Some(3));
    let tol = write("tol.json", r#"{"schema_version":"1","operators":{"T":[[0.5]]}}"#);
    assert_eq!(opdef(&["half-power", &tol, "--tol=-1"]).status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn negative_verdicts_exit_zero() {
    let dir = std::env::temp_dir().join(format!("opdef-cli-neg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("asym.json");
    std::fs::write(
        &p,
        r#"{"schema_version":"1","group":{"kind":"cyclic","n":3},"function":{"values":[[[1]],[[0.5]],[[0]]]}}"#,
    )
    .unwrap();
    let r = report(&["check-pd", p.to_str().unwrap()]);
    assert_eq!(r["verdict"], "not-symmetric");
    let r = report(&["dilate", p.to_str().unwrap()]);
    assert_eq!(r["verdict"], "not-symmetric");
    std::fs::remove_dir_all(dir).unwrap();
}
