//! Black-box tests of the `vilenkin` binary: every subcommand's happy path,
//! the exit-code contract (0 pass / 1 failed assertion / 2 bad config), and
//! byte-level determinism of repeated runs.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vilenkin"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Parses `index,re,im` CSV into the complex rows, asserting the header.
fn parse_complex_csv(text: &str) -> Vec<(u64, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,re,im"));
    lines
        .map(|line| {
            let mut parts = line.split(',');
            (
                parts.next().unwrap().parse().unwrap(),
                parts.next().unwrap().parse().unwrap(),
                parts.next().unwrap().parse().unwrap(),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// table

#[test]
fn table_prints_the_scale_table() {
    let out = run(&["table", "--m", "2,3", "--depth", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "k,m_k,M_k\n0,2,1\n1,3,2\n2,2,6\n3,3,12\n4,,36\n"
    );
    assert!(stderr_of(&out).contains("lambda = 3"));
}

#[test]
fn table_json_summary_has_group_data() {
    let out = run(&["table", "--m", "2", "--depth", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(summary["lambda"], 2);
    assert_eq!(summary["points"], 8);
    assert_eq!(summary["scales"], serde_json::json!([1, 2, 4, 8]));
}

#[test]
fn table_rejects_overflowing_depth() {
    let out = run(&["table", "--m", "9", "--depth", "40"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).starts_with("error:"));
}

#[test]
fn bad_radix_is_a_config_error() {
    let out = run(&["table", "--m", "2,x", "--depth", "3"]);
    assert_eq!(code(&out), 2);
    let out = run(&["table", "--m", "2,1", "--depth", "3"]);
    assert_eq!(code(&out), 2);
}

// ---------------------------------------------------------------------------
// transform

fn write_grid(path: &Path, rows: &[(f64, f64)]) {
    let mut text = String::from("index,re,im\n");
    for (i, (re, im)) in rows.iter().enumerate() {
        text.push_str(&format!("{i},{re},{im}\n"));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn transform_of_constant_is_a_spike_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("grid.csv");
    write_grid(&input, &[(1.0, 0.0); 6]);
    let out = run(&[
        "transform", "--m", "2,3", "--depth", "2", "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let rows = parse_complex_csv(&stdout_of(&out));
    assert_eq!(rows.len(), 6);
    assert!((rows[0].1 - 1.0).abs() < 1e-12 && rows[0].2.abs() < 1e-12);
    for row in &rows[1..] {
        assert!(row.1.hypot(row.2) < 1e-12);
    }
}

#[test]
fn transform_roundtrip_reproduces_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("grid.csv");
    let spectrum = dir.path().join("spectrum.csv");
    // Exact dyadic samples so the only noise is transform roundoff.
    let samples: Vec<(f64, f64)> = (0..12)
        .map(|i| (0.25 * i as f64 - 1.5, 0.125 * (11 - i) as f64))
        .collect();
    write_grid(&input, &samples);

    let out = run(&[
        "transform", "--m", "2,3,2", "--depth", "3", "--check", "--input",
        input.to_str().unwrap(), "--out", spectrum.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stderr_of(&out).contains("deviation"));

    let back = run(&[
        "transform", "--m", "2,3,2", "--depth", "3", "--inverse", "--input",
        spectrum.to_str().unwrap(),
    ]);
    assert_eq!(code(&back), 0);
    let rows = parse_complex_csv(&stdout_of(&back));
    for (row, want) in rows.iter().zip(&samples) {
        assert!((row.1 - want.0).abs() < 1e-9 && (row.2 - want.1).abs() < 1e-9);
    }
}

#[test]
fn transform_rejects_malformed_and_short_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad_header = dir.path().join("bad.csv");
    std::fs::write(&bad_header, "re,im\n0,1\n").unwrap();
    let out = run(&[
        "transform", "--m", "2,3", "--depth", "2", "--input",
        bad_header.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);

    let short = dir.path().join("short.csv");
    write_grid(&short, &[(1.0, 0.0); 5]);
    let out = run(&[
        "transform", "--m", "2,3", "--depth", "2", "--input",
        short.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn transform_check_conflicts_with_inverse() {
    let out = run(&[
        "transform", "--m", "2,3", "--depth", "2", "--inverse", "--check",
        "--input", "/dev/null",
    ]);
    assert_eq!(code(&out), 2);
}

// ---------------------------------------------------------------------------
// atom-suite

#[test]
fn atom_suite_passes_and_reports_rows() {
    let out = run(&[
        "atom-suite", "--m", "2,3", "--depth", "5", "--trials", "9",
        "--p", "0.5,0.25",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,p,N_a,tail_integral,spec_bound"));
    assert_eq!(lines.count(), 9);
}

#[test]
fn atom_suite_json_summary_reports_the_budget() {
    let out = run(&[
        "atom-suite", "--m", "2,3", "--depth", "5", "--trials", "6",
        "--p", "0.5", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(summary["all_ok"], true);
    assert_eq!(summary["trials"], 6);
    assert!(summary["max_tail"].as_f64().unwrap() <= summary["spec_bound"].as_f64().unwrap());
}

#[test]
fn atom_suite_negative_control_fails_loudly() {
    let out = run(&[
        "atom-suite", "--m", "2,3", "--depth", "5", "--trials", "6",
        "--p", "0.5", "--break-atom",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("assertion failed"));
}

#[test]
fn atom_suite_rejects_degenerate_configs() {
    let out = run(&["atom-suite", "--m", "2,3", "--depth", "5", "--trials", "0"]);
    assert_eq!(code(&out), 2);
    let out = run(&[
        "atom-suite", "--m", "2,3", "--depth", "5", "--trials", "4", "--ranks", "7",
    ]);
    assert_eq!(code(&out), 2);
    let out = run(&[
        "atom-suite", "--m", "2,3", "--depth", "5", "--trials", "4", "--p", "1.5",
    ]);
    assert_eq!(code(&out), 2);
}

// ---------------------------------------------------------------------------
// bound

#[test]
fn bound_reports_finite_ratios() {
    let out = run(&[
        "bound", "--m", "2,3", "--depth", "4", "--trials", "4", "--p", "0.5",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,p,N,n_star,ratio"));
    let mut rows = 0;
    for line in lines {
        let ratio: f64 = line.split(',').last().unwrap().parse().unwrap();
        assert!(ratio.is_finite() && ratio > 0.0);
        rows += 1;
    }
    assert_eq!(rows, 4);
}

#[test]
fn bound_sweep_covers_depths_four_through_eight() {
    let out = run(&[
        "bound", "--m", "2,3", "--depth", "4", "--trials", "2", "--p", "0.5",
        "--sweep", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let by_depth = summary["max_ratio_by_depth"].as_object().unwrap();
    assert_eq!(
        by_depth.keys().collect::<Vec<_>>(),
        vec!["4", "5", "6", "7", "8"]
    );
    assert!(summary["max_ratio"].as_f64().unwrap() > 0.0);
    assert!(summary["empirical_c_p"].as_f64().unwrap() > 0.0);
}

#[test]
fn bound_rejects_an_out_of_range_rank() {
    let out = run(&[
        "bound", "--m", "2,3", "--depth", "4", "--trials", "2", "--p", "0.5",
        "--rank", "4",
    ]);
    assert_eq!(code(&out), 2);
}

// ---------------------------------------------------------------------------
// counterexample

#[test]
fn counterexample_emits_blocks_and_monotone_rho() {
    let out = run(&[
        "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5",
        "--phi", "pow:0.5", "--budget", "0.9",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("k,alpha_k,M_alpha,coeff_numeric,coeff_closed,phi_value,rho_k")
    );
    let rhos: Vec<f64> = lines
        .map(|line| line.split(',').last().unwrap().parse().unwrap())
        .collect();
    assert!(rhos.len() >= 3);
    assert!(rhos.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn counterexample_json_summary_is_consistent() {
    let out = run(&[
        "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5",
        "--phi", "const:1", "--budget", "0.9", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(summary["blocks"].as_u64().unwrap() >= 3);
    assert_eq!(summary["monotone"], true);
    assert!(summary["max_block_rel_err"].as_f64().unwrap() < 1e-9);
    assert!(summary["max_offblock_abs"].as_f64().unwrap() < 1e-12);
}

#[test]
fn counterexample_rejects_fast_growth_targets() {
    let out = run(&[
        "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5",
        "--phi", "pow:2",
    ]);
    assert_eq!(code(&out), 2);
    // Boundary case γ = 1/p − 1 is excluded as well.
    let out = run(&[
        "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5",
        "--phi", "pow:1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn counterexample_accepts_a_tabulated_target_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("phi.csv");
    std::fs::write(&table, "n,phi\n1,1\n").unwrap();
    let phi = format!("file:{}", table.display());
    let out = run(&[
        "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5",
        "--phi", &phi, "--budget", "0.9", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stderr_of(&out).contains("warning"));
    let summary: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(summary["monotone"], true);
}

#[test]
fn counterexample_rejects_a_non_monotone_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("phi.csv");
    std::fs::write(&table, "n,phi\n1,2\n10,1\n").unwrap();
    let phi = format!("file:{}", table.display());
    let out = run(&[
        "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5", "--phi", &phi,
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn counterexample_dumps_the_atomic_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let atoms = dir.path().join("atoms.csv");
    let out = run(&[
        "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5",
        "--phi", "pow:0.5", "--budget", "0.9",
        "--dump-atoms", atoms.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let blocks = stdout_of(&out).lines().count() - 1;
    let dump = std::fs::read_to_string(&atoms).unwrap();
    let mut lines = dump.lines();
    assert_eq!(lines.next(), Some("k,mu_k,interval_rank,base_rank"));
    assert_eq!(lines.count(), blocks);
}

// ---------------------------------------------------------------------------
// bench

#[test]
fn bench_emits_the_timing_schema() {
    let out = run(&["bench", "--m", "2", "--depth", "5", "--naive-cutoff", "8"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m_n,fast_seconds,naive_seconds,speedup"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        let m_n: u64 = fields[0].parse().unwrap();
        assert!(fields[1].parse::<f64>().unwrap() > 0.0);
        if m_n <= 8 {
            assert!(fields[2].parse::<f64>().unwrap() > 0.0);
            assert!(fields[3].parse::<f64>().unwrap() > 0.0);
        } else {
            assert!(fields[2].is_empty() && fields[3].is_empty());
        }
    }
}

// ---------------------------------------------------------------------------
// determinism

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("grid.csv");
    write_grid(
        &input,
        &(0..12)
            .map(|i| (0.5 * i as f64 - 3.0, -0.25 * i as f64))
            .collect::<Vec<_>>(),
    );
    let input = input.to_str().unwrap().to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["table", "--m", "2,3", "--depth", "5"],
        vec!["transform", "--m", "2,3,2", "--depth", "3", "--input", &input],
        vec![
            "atom-suite", "--m", "2,3", "--depth", "5", "--trials", "12",
            "--p", "0.5,0.75", "--seed", "11",
        ],
        vec![
            "bound", "--m", "2,3", "--depth", "4", "--trials", "8",
            "--p", "0.5", "--seed", "11",
        ],
        vec![
            "counterexample", "--m", "2,3", "--depth", "7", "--p", "0.5",
            "--phi", "pow:0.5", "--budget", "0.9", "--format", "json",
        ],
    ];
    for args in &commands {
        let first = run(args);
        let second = run(args);
        assert_eq!(code(&first), 0, "command {args:?} failed");
        assert_eq!(code(&second), 0);
        assert_eq!(
            first.stdout, second.stdout,
            "command {args:?} is not deterministic"
        );
    }
}
