//! End-to-end runs of the `cohrx` binary.

use std::process::{Command, Output};

use coherent_receiver::sweep::SweepRow;

fn cohrx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohrx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sweep_output_is_deterministic_and_sorted() {
    let args = [
        "sweep", "--alphabet", "3ask", "--channel", "ideal-swap", "--n", "30,2,10",
        "--alpha-min", "0", "--alpha-max", "1.5", "--alpha-steps", "4",
    ];
    let first = cohrx(&args);
    let second = cohrx(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let text = stdout(&first);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<SweepRow> = rdr.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    let keys: Vec<(f64, usize)> = rows.iter().map(|r| (r.alpha, r.n)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    assert_eq!(keys, sorted);
    for r in &rows {
        if let Some(e) = r.receiver_error {
            assert!(e >= r.helstrom_bound - 1e-9);
        }
    }
    // α = 1.5 with n = 2 violates the slice guard and is flagged.
    let guarded = rows.iter().find(|r| r.alpha == 1.5 && r.n == 2).unwrap();
    assert!(guarded.skipped && guarded.receiver_error.is_none());
}

#[test]
fn jsonl_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.jsonl");
    let out = cohrx(&[
        "sweep", "--n", "10", "--alpha-max", "1", "--alpha-steps", "3", "--format", "jsonl",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<SweepRow> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2].alpha, 1.0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.toml");
    std::fs::write(
        &path,
        "alphabet = \"3ask\"\nchannel = \"stirap\"\nslice_counts = [2, 10]\n[alpha_grid]\nmin = 0.5\nmax = 1.0\nsteps = 2\n",
    )
    .unwrap();
    let out = cohrx(&["sweep", "--config", path.to_str().unwrap(), "--channel", "ideal-swap"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("3ask,0.5,2,ideal-swap,"));
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        vec!["sweep", "--n", "0"],
        vec!["sweep", "--alpha-steps", "1"],
        vec!["sweep", "--alpha-min", "-1"],
        vec!["sweep", "--alphabet", "qpsk"],
        vec!["sweep", "--priors", "0.2,0.2"],
        vec!["sweep", "--config", "/nonexistent/cohrx.toml"],
        vec!["gram", "--n", "10"],
        vec!["run", "--alpha", "3", "--n", "2"],
    ] {
        let out = cohrx(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn gram_run_and_multimode_reports() {
    let out = cohrx(&["gram", "--alphabet", "bpsk", "--alpha", "1", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let off = text.lines().find(|l| l.starts_with("bpsk,1.0,10,0,1,")).unwrap();
    let compressed: f64 = off.split(',').nth(7).unwrap().parse().unwrap();
    assert!((compressed - (0.9f64 / 1.1).powi(10)).abs() < 1e-14);

    let out = cohrx(&["run", "--alphabet", "3ask", "--alpha", "0.8", "--n", "10", "--channel", "stirap", "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(v["max_step_residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["receiver_error"].as_f64().unwrap() >= v["helstrom_bound"].as_f64().unwrap());

    let out = cohrx(&["multimode", "--alpha", "0", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let joint: f64 = row[3].parse().unwrap();
    let per_mode: f64 = row[4].parse().unwrap();
    assert!((joint - 2.0 / 3.0).abs() < 1e-10 && (per_mode - 2.0 / 3.0).abs() < 1e-12);
}
