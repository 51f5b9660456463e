use std::process::{Command, Output};

use spectra_core::cli::{run_with_hook, Command as Cmd, RunConfig};

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra")).args(args).env_remove("SPECTRA_CACHE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["compute"][..],
        &["compute", "--k", "2"],
        &["compute", "--k", "0", "--q", "10"],
        &["compute", "--k", "2", "--q", "0"],
        &["frobnicate", "--k", "2", "--q", "10"],
        &["stats", "--k", "1", "--q", "10"],
        &["verify", "--k", "2", "--q", "10", "--maxlen", "25"],
    ] {
        let o = spectra(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    // Q so small that the whole interval is one cylinder
    let o = spectra(&["compute", "--k", "2", "--q", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn verify_passes() {
    let o = spectra(&["verify", "--k", "2", "--q", "50", "--maxlen", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("result,pass"));
}

#[test]
fn tampered_set_fails_verification() {
    let root8 = 8f64.sqrt();
    let cfg = RunConfig { maxlen: 6, ..RunConfig::new(Cmd::Verify, 2, Some(100)) };
    let drop_near = |sa: &mut spectra_core::spectra::SpectrumApproximation| {
        let keep: Vec<bool> = sa.weights.iter().map(|w| (w.to_f64() - root8).abs() > 0.03).collect();
        let mut it = keep.iter();
        sa.weights.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        sa.provenance.retain(|_| *it.next().unwrap());
    };
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with_hook(&cfg, &mut out, &mut err, Some(&drop_near));
    assert_eq!(code, 1);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("result,fail"));
    assert!(text.contains("2.8284271247"), "{text}");
}

#[test]
fn output_is_deterministic() {
    let args = ["compute", "--k", "3", "--q", "40", "--kind", "markov"];
    let (a, b) = (spectra(&args), spectra(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_spectra"))
            .args(["compute", "--k", "2", "--q", "200"])
            .env("SPECTRA_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let cold = run();
    let file = dir.path().join("cylinders-k2-q200.txt");
    let cached = std::fs::read(&file).unwrap();
    let warm = run();
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(std::fs::read(&file).unwrap(), cached);
    assert_eq!(cold.stdout, spectra(&["compute", "--k", "2", "--q", "200"]).stdout);
}

#[test]
fn plotdata_intervals_are_sorted_and_bounded() {
    let o = spectra(&["plotdata", "--k", "2", "--q", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lo,hi"));
    let intervals: Vec<(f64, f64)> = lines
        .map(|l| {
            let (lo, hi) = l.split_once(',').unwrap();
            (lo.parse().unwrap(), hi.parse().unwrap())
        })
        .collect();
    let count = stdout(&spectra(&["compute", "--k", "2", "--q", "100"])).lines().count() - 1;
    assert!(!intervals.is_empty() && intervals.len() <= count);
    assert!(intervals.iter().all(|(lo, hi)| lo < hi));
    assert!(intervals.windows(2).all(|p| p[0].1 < p[1].0));
    assert!(intervals[0].0 >= 5f64.sqrt() - 0.02);
    assert!(intervals.last().unwrap().1 <= 12f64.sqrt() + 0.02);
}

#[test]
fn stats_report_the_graph() {
    let o = spectra(&["stats", "--k", "2", "--q", "100", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["cylinders", "vplus_vertices", "shift_edges", "edge_bound", "lagrange_weights", "markov_weights"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let n: u64 = v["cylinders"].as_str().unwrap().parse().unwrap();
    let shifts: u64 = v["shift_edges"].as_str().unwrap().parse().unwrap();
    assert_eq!(shifts, 2 * n * n);
}

#[test]
fn constants_and_json() {
    let o = spectra(&["constants", "--k", "2", "--digits", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("lagrange_periodic_1,") && l.ends_with(",2.236067977500")));
    let o = spectra(&["compute", "--k", "2", "--q", "30", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["d"].as_str().is_some() && r["decimal"].as_str().is_some()));
}

#[test]
fn k1_is_the_golden_value() {
    let o = spectra(&["compute", "--k", "1", "--q", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",5,2.2360679775"));
}
