//! Black-box tests of the `kz` binary: exit-code contract, JSON report
//! schema stability, determinism under a fixed seed, and agreement of
//! independent evaluation routes.

use std::process::{Command, Output};

fn kz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn exit_zero_on_passing_check() {
    let out = kz(&["check", "five-term", "--z1", "0.5", "--z2", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn exit_one_on_failing_check() {
    // An unreachable tolerance turns a healthy identity into a failed check.
    let out = kz(&["check", "gif", "--z", "0.3", "--weight", "2", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn exit_two_on_usage_and_domain_errors() {
    let bad_flag = kz(&["check", "gif", "--z", "notanumber"]);
    assert_eq!(bad_flag.status.code(), Some(2), "{bad_flag:?}");

    let divergent = kz(&["eval", "mpl", "2", "--z", "1.5"]);
    assert_eq!(divergent.status.code(), Some(2), "{divergent:?}");
    assert!(!String::from_utf8_lossy(&divergent.stderr).is_empty());
}

#[test]
fn report_json_schema_is_stable() {
    let out = kz(&["check", "gif", "--z", "0.3", "--weight", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let obj = v.as_object().expect("object");
    let mut keys: Vec<&str> = obj.keys().map(|s| s.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["identity", "max_residual", "ms", "params", "pass", "residuals"]
    );
    assert_eq!(obj["identity"], "gif");
    assert_eq!(obj["pass"], true);
    assert!(obj["residuals"].is_array());
    assert!(obj["max_residual"].is_number());
    assert!(obj["ms"].is_number());
    assert!(obj["params"].is_object());
}

#[test]
fn pentagon_degree_zero_trivially_passes() {
    let out = kz(&["check", "pentagon", "--degree", "0"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn independent_zeta_routes_agree() {
    let a = stdout(&kz(&["eval", "mpl", "2", "--z", "1.0"]));
    let b = stdout(&kz(&["mzv", "eval", "2"]));
    let (a, b): (f64, f64) = (a.trim().parse().unwrap(), b.trim().parse().unwrap());
    assert!((a - b).abs() < 1e-11, "routes differ: {a} vs {b}");
    assert!((a - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-11);
}

#[test]
fn bar_basis_is_deterministic_under_seed() {
    let args = ["m05", "bar-basis", "--weight", "2", "--restricted", "--seed", "7"];
    let first = kz(&args);
    let second = kz(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(stdout(&first).lines().count(), 10);
}

#[test]
fn associator_export_round_trips() {
    let dir = std::env::temp_dir().join(format!("kz-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("phi.json");
    let out = kz(&[
        "mzv",
        "associator",
        "--degree",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["cap"], 3);
    // ζ(2) sits at the X₀X₁ monomial.
    let z2 = v["terms"]["X0.X1"].as_f64().unwrap();
    assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).ok();
}
