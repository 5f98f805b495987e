use std::process::{Command, Output};

use serde_json::Value;

fn angulata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_angulata"))
        .args(args)
        .env_remove("ANGULATA_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn oracle_histograms() {
    let v = stdout_json(&angulata(&["oracle", "--profile", "3,3"]));
    assert_eq!(v["histogram"], serde_json::json!({"0": "12", "1": "3"}));
    let v = stdout_json(&angulata(&["oracle", "--profile", "6"]));
    assert_eq!(v["histogram"], serde_json::json!({"0": "5", "1": "10"}));
    let v = stdout_json(&angulata(&["oracle", "--profile", "3,5"]));
    let total: u64 = v["histogram"]
        .as_object()
        .unwrap()
        .values()
        .map(|n| n.as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 105);
}

#[test]
fn counts_with_cross_checks() {
    let v = stdout_json(&angulata(&[
        "counts", "--b", "4", "--g", "0", "--k", "3", "--verify",
    ]));
    assert_eq!(v["records"][0]["count"], "1728");
    let v = stdout_json(&angulata(&[
        "counts", "--b", "3", "--g", "2", "--d", "1", "--verify",
    ]));
    assert_eq!(v["records"][0]["count"], "3061800");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn csv_is_deterministic() {
    let args = [
        "counts", "--nu", "3", "--g", "1", "--k-max", "3", "--format", "csv",
    ];
    let a = angulata(&args);
    let b = angulata(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("b,g,k,count,provenance\n"));
    assert!(text.contains("6,1,2,"));
}

#[test]
fn free_energy_forms() {
    let v = stdout_json(&angulata(&[
        "free-energy",
        "--b",
        "3",
        "--g",
        "2",
        "--var",
        "w",
    ]));
    let coeffs = v["coefficients"].as_array().unwrap();
    let want = [(3, "-351/8"), (4, "27/8"), (5, "189/10")];
    assert_eq!(coeffs.len(), want.len());
    for (c, (e, q)) in coeffs.iter().zip(want) {
        assert_eq!(c[0], e);
        assert_eq!(c[1], q);
    }
    let v = stdout_json(&angulata(&["free-energy", "--b", "4", "--g", "1"]));
    assert_eq!(v["genus"], 1);
}

#[test]
fn painleve_and_verify() {
    let v = stdout_json(&angulata(&["painleve", "--gmax", "2"]));
    assert_eq!(v, serde_json::json!({"0": "-1", "1": "2", "2": "98"}));
    let v = stdout_json(&angulata(&["verify", "--suite", "painleve"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        angulata(&["counts", "--b", "5", "--g", "0", "--k", "1"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        angulata(&["oracle", "--profile", "3,x"]).status.code(),
        Some(4)
    );
    assert_eq!(
        angulata(&["verify", "--suite", "nope"]).status.code(),
        Some(4)
    );
    assert_eq!(angulata(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(
        angulata(&["--oracle-cap", "4", "oracle", "--profile", "3,3"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("angulata-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let out = dir.join("out.txt");
    std::fs::write(&cfg, format!("format = csv\noutput = {}\n", out.display())).unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = angulata(&["--config", cfg, "painleve", "--gmax", "1"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "g,C\n0,-1\n1,2\n");
    let o = angulata(&[
        "painleve", "--gmax", "1", "--config", cfg, "--format", "text",
    ]);
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "C_0 = -1\nC_1 = 2\n"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
