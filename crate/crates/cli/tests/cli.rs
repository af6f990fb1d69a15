use std::path::Path;
use std::process::{Command, Output};

use qtrans_cli::{read_report, run_bench, parse_strategy, write_report};
use qtrans_core::fixtures::REFERENCE_QASM;

const LINE_CHIP: &str = r#"{
  "name": "line",
  "qubits_num": 4,
  "coupling_list": [[0, 1, 0.99], [1, 2, 0.97], [2, 3, 0.95]],
  "basis_gates": ["cx", "rx", "ry", "rz"]
}"#;

fn qtrans(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtrans")).args(args).current_dir(dir).output().unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("line.json"), LINE_CHIP).unwrap();
    std::fs::write(dir.path().join("bell.qasm"), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\nh q[0];\ncx q[0],q[2];\n").unwrap();
    std::fs::write(dir.path().join("wide.qasm"), "OPENQASM 2.0;\nqreg q[6];\nh q[0];\nx q[5];\n").unwrap();
    let out = qtrans(&["update-chip", "--name", "line", "--file", "line.json", "--db", "db"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

#[test]
fn update_chip_is_idempotent_and_rejects_bad_files() {
    let dir = setup();
    let before = std::fs::read(dir.path().join("db/chips/line/vqpus.json")).unwrap();
    assert!(qtrans(&["update-chip", "--name", "line", "--file", "line.json", "--db", "db"], dir.path()).status.success());
    assert_eq!(std::fs::read(dir.path().join("db/chips/line/vqpus.json")).unwrap(), before);

    std::fs::write(dir.path().join("bad.json"), "{\"qubits_num\": \"four\"}").unwrap();
    let out = qtrans(&["update-chip", "--name", "bad", "--file", "bad.json", "--db", "db"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compile_outputs_and_exit_codes() {
    let dir = setup();
    let out = qtrans(&["compile", "--qasm", "bell.qasm", "--db", "db", "--report", "json", "--level", "3"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["compiled_info"]["verification"]["ok"], true);
    assert_eq!(v["qubits_to_cbits"].as_object().unwrap().len(), 2);

    let text = qtrans(&["compile", "--qasm", "bell.qasm", "--db", "db"], dir.path());
    assert!(String::from_utf8_lossy(&text.stdout).contains("sabre_route"));

    // the idle q[1] is pruned, so two pins are needed
    let pinned = qtrans(&["compile", "--qasm", "bell.qasm", "--db", "db", "--qpu", "line", "--qubits", "2,3"], dir.path());
    assert!(pinned.status.success());
    let bad_pin = qtrans(&["compile", "--qasm", "bell.qasm", "--db", "db", "--qpu", "line", "--qubits", "1,2,3"], dir.path());
    assert_eq!(bad_pin.status.code(), Some(1));

    let verify_only = qtrans(&["compile", "--qasm", "wide.qasm", "--db", "db", "--no-transpile"], dir.path());
    assert_eq!(verify_only.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&verify_only.stderr).contains("qubit_count"));

    let unknown = qtrans(&["compile", "--qasm", "bell.qasm", "--db", "db", "--qpu", "nope"], dir.path());
    assert_eq!(unknown.status.code(), Some(1));
    let pruned = qtrans(&["compile", "--qasm", "wide.qasm", "--db", "db"], dir.path());
    assert!(pruned.status.success(), "{}", String::from_utf8_lossy(&pruned.stderr));
    let ghz = "OPENQASM 2.0;\nqreg q[6];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\ncx q[2],q[3];\ncx q[3],q[4];\ncx q[4],q[5];\n";
    std::fs::write(dir.path().join("ghz.qasm"), ghz).unwrap();
    let too_big = qtrans(&["compile", "--qasm", "ghz.qasm", "--db", "db"], dir.path());
    assert_eq!(too_big.status.code(), Some(1));
}

#[test]
fn custom_passflow_file() {
    let dir = setup();
    std::fs::write(dir.path().join("flow.json"), r#"[{"name": "unroll_to_2q"}, {"name": "unroll_to_basis"}]"#).unwrap();
    let out = qtrans(&["compile", "--qasm", "bell.qasm", "--db", "db", "--passflow", "flow.json", "--report", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["compiled_info"]["report"]["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["unroll_to_2q", "unroll_to_basis", "naive_embed", "unroll_to_basis"]);

    std::fs::write(dir.path().join("bad_flow.json"), r#"[{"name": "no_such_pass"}]"#).unwrap();
    let bad = qtrans(&["compile", "--qasm", "bell.qasm", "--db", "db", "--passflow", "bad_flow.json"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn bench_reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let suite = vec![
        ("a".to_string(), REFERENCE_QASM.to_string()),
        ("b".to_string(), "OPENQASM 2.0;\nqreg q[3];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\ncx q[0],q[2];\n".to_string()),
        ("c".to_string(), "OPENQASM 2.0;\nqreg q[4];\ncz q[0],q[3];\ncz q[1],q[2];\nrxx(0.3) q[0],q[2];\n".to_string()),
    ];
    let chip = qtrans_core::fixtures::lattice_chip_json(1);
    let strategies = [parse_strategy("fid_HM_degree").unwrap(), parse_strategy("struc_HD_rand").unwrap()];
    let rows = run_bench(&suite, "lattice", &chip, &strategies, 5).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.runs == 5 && r.median_cost.is_finite()));
    for name in ["report.csv", "report.json"] {
        let p = dir.path().join(name);
        write_report(&rows, &p).unwrap();
        let back = read_report(&p).unwrap();
        assert_eq!(back.len(), rows.len());
        for (x, y) in back.iter().zip(&rows) {
            assert_eq!((&x.circuit, &x.strategy, x.runs), (&y.circuit, &y.strategy, y.runs));
            assert!((x.median_cost - y.median_cost).abs() < 1e-12);
        }
    }
}

#[test]
fn bench_cli_with_empty_suite() {
    let dir = setup();
    std::fs::create_dir(dir.path().join("suite")).unwrap();
    let out = qtrans(
        &["bench", "--suite", "suite", "--chip", "line.json", "--strategies", "fid_HM_degree", "--seeds", "2", "--out", "r.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(read_report(&dir.path().join("r.csv")).unwrap().is_empty());
    let missing = qtrans(&["bench", "--suite", "nope", "--chip", "line.json", "--strategies", "fid_HM_degree", "--out", "r.csv"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
}
