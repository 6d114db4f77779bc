//! End-to-end tests of the `ybmap` binary: exit codes, file outputs, and
//! determinism over the shipped fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn ybmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn collide_vector_worked_example() {
    let out = scratch("collide_vector.json");
    let output = ybmap(&[
        "collide",
        "--input",
        fixture("collide_vector.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(result["family"], "vector");
    assert_eq!(result["first"]["xi"], serde_json::json!([[1.0, 0.0], [1.0, 0.0]]));
    assert_eq!(result["first"]["eta"], serde_json::json!([[1.0, 0.0], [0.0, 0.0]]));
    assert_eq!(result["second"]["xi"], serde_json::json!([[0.0, 0.0], [1.0, 0.0]]));
    assert_eq!(result["second"]["eta"], serde_json::json!([[-2.0, 0.0], [1.0, 0.0]]));
    let residual = result["refactorization_residual"].as_f64().unwrap();
    assert!(residual < 1e-12);
}

#[test]
fn collide_projector_worked_example() {
    let out = scratch("collide_projector.json");
    let output = ybmap(&[
        "collide",
        "--input",
        fixture("collide_projector.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let first: Vec<Vec<Vec<f64>>> =
        serde_json::from_value(result["first"]["projector"].clone()).unwrap();
    let second: Vec<Vec<Vec<f64>>> =
        serde_json::from_value(result["second"]["projector"].clone()).unwrap();
    let expected_first = [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]];
    let expected_second = [[[0.0, 0.0], [0.0, 0.0]], [[-2.0, 0.0], [1.0, 0.0]]];
    for i in 0..2 {
        for j in 0..2 {
            for part in 0..2 {
                assert!((first[i][j][part] - expected_first[i][j][part]).abs() < 1e-12);
                assert!((second[i][j][part] - expected_second[i][j][part]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn collide_grassmannian_worked_example() {
    let output = ybmap(&[
        "collide",
        "--input",
        fixture("collide_grassmannian.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let result: serde_json::Value =
        serde_json::from_slice(&output.stdout).unwrap();
    // updated lines: span{(3,1)} and span{(-2,1)}; bases are unit columns,
    // so compare entry ratios.
    let basis1: Vec<Vec<Vec<f64>>> =
        serde_json::from_value(result["first"]["subspace"]["basis"].clone()).unwrap();
    let col = &basis1[0];
    let ratio = col[0][0] / col[1][0];
    assert!((ratio - 3.0).abs() < 1e-10, "ratio = {ratio}");
    let basis2: Vec<Vec<Vec<f64>>> =
        serde_json::from_value(result["second"]["subspace"]["basis"].clone()).unwrap();
    let col = &basis2[0];
    let ratio = col[0][0] / col[1][0];
    assert!((ratio + 2.0).abs() < 1e-10, "ratio = {ratio}");
}

#[test]
fn collide_parameter_collision_exits_2() {
    let output = ybmap(&[
        "collide",
        "--input",
        fixture("collide_collision.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(String::from_utf8_lossy(&output.stderr).contains("parameter collision"));
}

#[test]
fn truncated_input_exits_1() {
    let output = ybmap(&[
        "collide",
        "--input",
        fixture("truncated.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn verify_unknown_family_exits_1() {
    let output = ybmap(&["verify", "--family", "octonion", "--trials", "1"]);
    assert_eq!(exit_code(&output), 1);
}

#[test]
fn verify_single_trial_report_is_byte_identical_across_runs() {
    let out_a = scratch("verify_a.json");
    let out_b = scratch("verify_b.json");
    for out in [&out_a, &out_b] {
        let output = ybmap(&[
            "verify",
            "--family",
            "vector",
            "--trials",
            "1",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&output), 0);
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn verify_small_projector_campaign_passes() {
    let out = scratch("verify_projector.json");
    let output = ybmap(&[
        "verify",
        "--family",
        "projector",
        "--trials",
        "50",
        "--seed",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for check in ["yang_baxter", "reversibility"] {
        assert_eq!(report[check]["trials"], 50);
        assert_eq!(report[check]["failures"], serde_json::json!([]));
        assert!(report[check].get("runtime_ms").is_none());
    }
}

#[test]
fn transfer_fixed_point_chain_has_zero_drift() {
    let out = scratch("transfer_fixed.jsonl");
    let output = ybmap(&[
        "transfer",
        "--input",
        fixture("chain_fixed_point.json").to_str().unwrap(),
        "--steps",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let lines: Vec<String> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines.len(), 11);
    for line in &lines {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(record["invariant_drift"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn transfer_collision_with_site_one_exits_2() {
    let output = ybmap(&[
        "transfer",
        "--input",
        fixture("chain_collision.json").to_str().unwrap(),
        "--steps",
        "1",
    ]);
    assert_eq!(exit_code(&output), 2);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("site 1"), "stderr: {stderr}");
}

#[test]
fn transfer_hermitian_chain_conserves_invariants() {
    let out = scratch("transfer_hermitian.jsonl");
    let output = ybmap(&[
        "transfer",
        "--input",
        fixture("chain_hermitian.json").to_str().unwrap(),
        "--steps",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
}

#[test]
fn kdv_projector_amplitude_passes() {
    let output = ybmap(&[
        "kdv",
        "--input",
        fixture("kdv_rank1.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn kdv_doubled_amplitude_fails_with_exit_3() {
    let output = ybmap(&[
        "kdv",
        "--input",
        fixture("kdv_double.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 3);
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(report["max_relative_residual"].as_f64().unwrap() > 1e-2);
}

#[test]
fn kdv_zero_lambda_passes_with_zero_residual() {
    let output = ybmap(&[
        "kdv",
        "--input",
        fixture("kdv_zero_lambda.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["max_relative_residual"].as_f64().unwrap(), 0.0);
}

#[test]
fn kdv_field_snapshot_csv() {
    let field = scratch("field.csv");
    let output = ybmap(&[
        "kdv",
        "--input",
        fixture("kdv_rank1.json").to_str().unwrap(),
        "--field-out",
        field.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let contents = std::fs::read_to_string(&field).unwrap();
    let mut lines = contents.lines();
    assert_eq!(lines.next().unwrap(), "x,t,re_u00,im_u00,re_u01,im_u01,re_u10,im_u10,re_u11,im_u11");
    assert_eq!(contents.lines().count(), 1 + 21 * 21);
}

#[test]
fn collide_output_reparses_as_valid_input() {
    // round-trip: states written by collide re-parse and re-validate
    let out = scratch("collide_roundtrip.json");
    let output = ybmap(&[
        "collide",
        "--input",
        fixture("collide_projector.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let second = scratch("collide_roundtrip2.json");
    let output = ybmap(&[
        "collide",
        "--input",
        out.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(
        exit_code(&output),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}
