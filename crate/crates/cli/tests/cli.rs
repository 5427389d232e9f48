//! End-to-end tests of the `gdirac` binary: exit codes, report contents and determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gdirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdirac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_car_succeeds_with_zero_failures() {
    let out = gdirac(&["verify", "car", "--max-index", "3"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["schema"], "gdirac/1");
    assert_eq!(report["suite"], "car");
    assert_eq!(report["failures"], 0);
    assert!(report["details"].as_array().unwrap().len() > 100);
}

#[test]
fn suite_flag_and_positional_names_combine() {
    let out = gdirac(&[
        "verify",
        "fermion-number",
        "--suite",
        "spinor-casimir",
        "--max-index",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["failures"], 0);
    let names: Vec<&str> = report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["fermion-number", "spinor-casimir"]);
}

#[test]
fn verify_kernel_reports_one_dimensional_kernel() {
    let out = gdirac(&["verify", "kernel", "--trunc", "2", "--degree", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["kernel_dim"], "1");
}

#[test]
fn verify_square_final_has_zero_residual() {
    let out = gdirac(&["verify", "square-final", "--trunc", "3"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["summary"]["residual"], "0");
    assert!(report["details"][0]["label"].as_str().unwrap().contains("(0, 0)"));
}

#[test]
fn failing_checks_exit_with_one() {
    let out = gdirac(&["verify", "ores"]);
    assert_eq!(code(&out), 1);
    assert!(json(&out)["failures"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_with_two() {
    let unknown = gdirac(&["verify", "bogus"]);
    assert_eq!(code(&unknown), 2);
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown suite 'bogus'"));
    assert_eq!(code(&gdirac(&["verify", "car", "--max-index", "0"])), 2);
    assert_eq!(code(&gdirac(&["verify", "car", "--seed", "-1"])), 2);
    assert_eq!(code(&gdirac(&["spectrum", "--format", "xml"])), 2);
    assert_eq!(code(&gdirac(&["spectrum", "--trunc", "1", "--degree", "2"])), 2);
    assert_eq!(code(&gdirac(&["dump-op", "foo:1,2"])), 2);
    assert_eq!(code(&gdirac(&["dump-op", "rhat:1"])), 2);
    assert_eq!(code(&gdirac(&["frobnicate"])), 2);
    assert_eq!(code(&gdirac(&["spectrum", "--config", "/nonexistent/gdirac.toml"])), 2);
}

#[test]
fn spectrum_csv_has_kernel_row() {
    let out = gdirac(&["spectrum", "--trunc", "2", "--degree", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "M,k,dim,eig");
    assert!(rows.contains(&"0,0,1,0"));
    let one_one = rows.iter().find(|r| r.starts_with("1,1,")).unwrap();
    assert!(one_one.ends_with(",1"), "{one_one}");
}

#[test]
fn spectrum_json_lists_exact_eigenvalues() {
    let out = gdirac(&["spectrum", "--trunc", "2", "--degree", "2"]);
    let report = json(&out);
    assert_eq!(report["kernel_dim"], 1);
    let blocks = report["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 9);
    assert_eq!(blocks[0], serde_json::json!({"M": 0, "k": 0, "dim": 1, "eig": "0"}));
    assert_eq!(blocks[1]["eig"], "1/2");
}

#[test]
fn invariants_report_the_vacuum_line() {
    let out = gdirac(&["invariants", "--trunc", "2", "--degree", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "M,k,vector,state,coeff");
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0,0,0,"));
    assert!(rows[1].ends_with(",1"));
}

#[test]
fn dump_rhat_is_a_diagonal_occupation_matrix() {
    let out = gdirac(&["dump-op", "rhat:1,1", "--max-index", "1"]);
    assert_eq!(code(&out), 0);
    let m = json(&out);
    assert_eq!(m["dim"], 4);
    assert_eq!(m["basis"].as_array().unwrap().len(), 4);
    for e in m["entries"].as_array().unwrap() {
        assert_eq!(e["row"], e["col"]);
        assert_eq!(e["value"], "1");
    }
    let csv = stdout(&gdirac(&["dump-op", "rhat:1,1", "--max-index", "1", "--format", "csv"]));
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 5);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().skip(1).enumerate() {
            assert!(cell == "0" || (cell == "1" && i == j), "{row:?}");
        }
    }
}

#[test]
fn dump_gamma_entries_carry_root_two() {
    let m = json(&gdirac(&["dump-op", "gamma:1,-1", "--max-index", "1"]));
    let entries = m["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        let v = e["value"].as_str().unwrap();
        assert!(v == "1√2" || v == "-1√2", "{v}");
    }
}

#[test]
fn dump_cutoff_dirac_stays_in_the_basis() {
    let m = json(&gdirac(&["dump-op", "dirac:N=2", "--max-index", "2"]));
    assert_eq!(m["space"], "tensor");
    assert_eq!(m["outside_basis"], 0);
    assert!(!m["entries"].as_array().unwrap().is_empty());
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--out", p]);
    let out = gdirac(&all);
    assert!(out.stdout.is_empty());
    std::fs::read(&path).unwrap()
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &[
            "verify",
            "dirac-symmetry",
            "square-raw",
            "--seed",
            "42",
            "--max-index",
            "2",
        ],
        &["spectrum", "--trunc", "2", "--degree", "2", "--format", "csv"],
        &["invariants", "--trunc", "2", "--degree", "1"],
        &["dump-op", "ktilde:2,2", "--max-index", "2", "--format", "csv"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{i}"), args);
        let b = run_to(dir.path(), &format!("b{i}"), args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn seed_changes_sampled_reports() {
    let a = stdout(&gdirac(&[
        "verify",
        "dirac-symmetry",
        "--seed",
        "1",
        "--max-index",
        "2",
    ]));
    let b = stdout(&gdirac(&[
        "verify",
        "dirac-symmetry",
        "--seed",
        "2",
        "--max-index",
        "2",
    ]));
    assert_ne!(a, b);
}

fn support_columns(seed: &str) -> Vec<Vec<u64>> {
    let out = gdirac(&["bench", "--trunc", "8", "--seed", seed]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    report["ladder"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            assert!(r["dirac_ns"].as_u64().unwrap() > 0);
            assert!(r["casimir_ns"].as_u64().unwrap() > 0);
            [
                "N",
                "tensor_support",
                "dirac_support",
                "fock_support",
                "casimir_support",
            ]
            .iter()
            .map(|k| r[k].as_u64().unwrap())
            .collect()
        })
        .collect()
}

#[test]
fn bench_ladder_is_monotone_and_seeded() {
    let a = support_columns("1");
    assert_eq!(a.len(), 8);
    for w in a.windows(2) {
        assert!(w[1][1] >= w[0][1] && w[1][3] >= w[0][3], "{w:?}");
    }
    assert_eq!(a, support_columns("1"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "suite = [\"car\"]\nmax-index = 1\nformat = \"csv\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let out = gdirac(&["verify", "--config", c]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("suite,label,cases,residual,passed"));
    let out = gdirac(&["verify", "--config", c, "--format", "json", "--max-index", "2"]);
    let report = json(&out);
    assert_eq!(report["suite"], "car");
    assert_eq!(report["params"]["max_index"], 2);

    std::fs::write(&cfg, "max-index = 1\nverbose = true\n").unwrap();
    let out = gdirac(&["verify", "car", "--config", c]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("verbose"));
}
