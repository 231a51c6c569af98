//! End-to-end tests of the installed binary: flags, exit codes, report
//! determinism and file handling.

use std::process::{Command, Output};

fn mol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mol_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mol"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn depth_builtin_reports() {
    let out = mol(&[
        "depth", "--config", "generic4", "--class", "4", "--json", "-",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["depth"]["k"]["value"], 2);
    assert_eq!(v["outputs"]["depth"]["n"]["value"], 1);
    assert_eq!(v["outputs"]["depth"]["d"]["value"], 1);

    let out = mol(&[
        "depth",
        "--config",
        "trapezoid",
        "--class",
        "5",
        "--json",
        "-",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["depth"]["k"]["kind"], "certified");
    assert_eq!(v["outputs"]["depth"]["k"]["value"], 2);
    assert_eq!(v["outputs"]["depth"]["n"]["kind"], "at-least");
    assert_eq!(v["outputs"]["depth"]["n"]["value"], 5);
    assert_eq!(v["outputs"]["inequalities"]["melnikov_length_bound"], 2);

    let out = mol(&[
        "depth",
        "--config",
        "parallelogram",
        "--class",
        "6",
        "--json",
        "-",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["depth"]["k"]["kind"], "at-least");
    assert_eq!(v["outputs"]["depth"]["k"]["value"], 5);
}

#[test]
fn exit_codes_follow_the_table() {
    // 2: config error
    let out = mol(&["depth", "--config", "no-such-config", "--class", "4"]);
    assert_eq!(out.status.code(), Some(2));

    // 2: parse error in phi
    let out = mol(&["gv", "--phi", "1/F"]);
    assert_eq!(out.status.code(), Some(2));

    // 3: resource cap exceeded
    let out = mol_env(
        &["depth", "--config", "trapezoid", "--class", "5"],
        "MOL_MAX_BASIS",
        "10",
    );
    assert_eq!(out.status.code(), Some(3));

    // 4: truncation exhausted (tiny z-order, deep budget)
    let dir = std::env::temp_dir().join(format!("mol-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let germs = dir.join("germs.json");
    std::fs::write(
        &germs,
        r#"{"z_order": 5, "eps_order": 2, "germs": {"f": {"2": "1"}, "g": {"3": "1"}}}"#,
    )
    .unwrap();
    let out = mol(&["germ", "--gens", germs.to_str().unwrap(), "--budget", "5"]);
    assert_eq!(out.status.code(), Some(4));

    // 0: success
    let out = mol(&["gv", "--phi", "0"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_payloads_are_deterministic() {
    for args in [
        vec![
            "depth", "--config", "generic4", "--class", "4", "--json", "-",
        ],
        vec!["gv", "--phi", "F^2/(x-1) + F/(x+1)", "--json", "-"],
        vec!["germ", "--word", "[d1, d2]", "--json", "-"],
        vec!["casale", "--json", "-"],
        vec!["config", "export", "parallelogram"],
    ] {
        let mut a = stdout_json(&mol(&args));
        let mut b = stdout_json(&mol(&args));
        if let Some(obj) = a.as_object_mut() {
            obj.remove("wall_time_ms");
        }
        if let Some(obj) = b.as_object_mut() {
            obj.remove("wall_time_ms");
        }
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "payload for {args:?} not deterministic"
        );
    }
}

#[test]
fn gv_examples() {
    let out = mol(&["gv", "--phi", "F/(x-1)+F^2/(x+1)", "--json", "-"]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["sequence"]["length"], 3);
    assert_eq!(v["outputs"]["sequence"]["classification"], "Riccati");
    assert_eq!(v["outputs"]["sequence"]["residuals_all_zero"], true);
    assert!(!v["outputs"]["riccati_system"].is_null());

    let out = mol(&["gv", "--phi", "F^4/(x-1)", "--json", "-"]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["sequence"]["length"], 5);

    let out = mol(&["gv", "--phi", "0", "--json", "-"]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["sequence"]["length"], 1);
    assert_eq!(v["outputs"]["sequence"]["classification"], "closed");
}

#[test]
fn germ_command_examples() {
    // two germs of levels 1 and 2, budget 3 → witness chain
    let dir = std::env::temp_dir().join(format!("mol-germ-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let germs = dir.join("pair.json");
    std::fs::write(
        &germs,
        r#"{"z_order": 12, "eps_order": 2, "germs": {"f": {"2": "1"}, "g": {"3": "1"}}}"#,
    )
    .unwrap();
    let out = mol(&[
        "germ",
        "--gens",
        germs.to_str().unwrap(),
        "--budget",
        "3",
        "--json",
        "-",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["dichotomy"]["verdict"], "non-abelian");
    let chain = v["outputs"]["dichotomy"]["non_solvability_witness"]
        .as_array()
        .unwrap();
    assert_eq!(chain.len(), 3);
    let levels: Vec<u64> = chain.iter().map(|s| s["level"].as_u64().unwrap()).collect();
    assert!(levels.windows(2).all(|w| w[1] > w[0]));

    // single germ → abelian
    let single = dir.join("single.json");
    std::fs::write(
        &single,
        r#"{"z_order": 8, "eps_order": 2, "germs": {"f": {"2": "1"}}}"#,
    )
    .unwrap();
    let out = mol(&["germ", "--gens", single.to_str().unwrap(), "--json", "-"]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["dichotomy"]["verdict"], "abelian");

    // shipped assignment word evaluation: leading eps^2 z^4 term
    let out = mol(&["germ", "--word", "[d1, d2]", "--json", "-"]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["word"]["leading"]["z_power"], 4);
    assert_eq!(v["outputs"]["word"]["leading"]["coefficient"], "-eps^2*u^2");

    // word evaluation over a user germ file: [f, g] has leading -z^4
    let out = mol(&[
        "germ",
        "--gens",
        germs.to_str().unwrap(),
        "--word",
        "[f, g]",
        "--json",
        "-",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["word"]["leading"]["z_power"], 4);
    assert_eq!(v["outputs"]["word"]["leading"]["coefficient"], "-1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_export_round_trips_through_depth() {
    let dir = std::env::temp_dir().join(format!("mol-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trapezoid.json");
    let out = mol(&[
        "config",
        "export",
        "trapezoid",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // the exported file loads as a user config and reproduces the verdict
    let out = mol(&[
        "depth",
        "--config",
        path.to_str().unwrap(),
        "--class",
        "4",
        "--json",
        "-",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["outputs"]["depth"]["k"]["value"], 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_filter_runs_named_subset() {
    let out = mol(&["selftest", "--filter", "gv", "--json", "-"]);
    let v = stdout_json(&out);
    let criteria = v["outputs"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 1);
    assert_eq!(criteria[0]["name"], "gv-lengths");
    assert_eq!(v["outputs"]["all_passed"], true);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn stderr_carries_diagnostics_stdout_stays_clean() {
    let out = mol(&["depth", "--config", "missing.json", "--class", "4"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
