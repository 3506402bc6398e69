use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ionkerr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionkerr"))
        .args(args)
        .env_remove("IONKERR_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn value_after(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no {key} in {text}"));
    line[key.len()..].split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn chi_both_formulas() {
    let o = ionkerr(&["chi", "--nu-z", "1e6", "--nu-perp", "5e6", "--formula", "both"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let paper = value_after(&text, "chi/2pi paper");
    let roos = value_after(&text, "chi/2pi roos");
    assert!((paper + 2.9).abs() < 0.1, "{paper}");
    assert!((roos + 5.8).abs() < 0.1, "{roos}");
    for key in ["omega_r/2pi", "omega_s/2pi", "z0", "xi"] {
        assert!(text.lines().any(|l| l.starts_with(key)), "missing {key}");
    }
}

#[test]
fn chi_single_formula_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chi.csv");
    let o = ionkerr(&["chi", "--nu-z", "1e6", "--nu-perp", "5e6", "--formula", "paper", "--csv", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("roos"));
    let csv = fs::read_to_string(path).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("paper,"));
}

#[test]
fn chi_near_resonance_fails() {
    let o = ionkerr(&["chi", "--nu-perp", "1.3229e6", "--nu-z", "1e6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("resonance"), "{}", stderr(&o));
}

#[test]
fn chi_zigzag_trap_fails() {
    let o = ionkerr(&["chi", "--nu-perp", "0.5e6", "--nu-z", "1e6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_three_steps_monotone() {
    let o = ionkerr(&["sweep", "--nu-z-start", "0.8e6", "--nu-z-stop", "1.2e6", "--nu-z-steps", "3", "--nu-perp", "5e6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("nu_z_hz,chi_paper_hz,chi_roos_hz"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for col in 1..3 {
        assert!(rows.iter().all(|r| r[col] < 0.0));
        assert!(rows.windows(2).all(|w| w[1][col].abs() > w[0][col].abs()));
    }
}

#[test]
fn sweep_single_step_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = ionkerr(&[
        "sweep", "--nu-z-start", "0.9e6", "--nu-z-stop", "1.5e6", "--nu-z-steps", "1", "--nu-perp", "5e6",
        "--formula", "roos", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(path).unwrap();
    let single = ionkerr(&["chi", "--nu-z", "0.9e6", "--nu-perp", "5e6", "--formula", "roos"]);
    let roos = stdout(&single)
        .lines()
        .find(|l| l.starts_with("chi/2pi roos"))
        .and_then(|l| l.split_whitespace().nth(2))
        .unwrap()
        .to_owned();
    assert_eq!(csv, format!("nu_z_hz,chi_roos_hz\n9.00000000e5,{roos}\n"));
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = ionkerr(&[
            "sweep", "--nu-z-start", "0.2e6", "--nu-z-stop", "6e6", "--nu-z-steps", "40", "--nu-perp", "5e6",
            "--out", p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        fs::read(p).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    // Grid points at or above ν_⊥ are error rows, not aborts.
    assert!(String::from_utf8(a).unwrap().lines().next().unwrap().ends_with(",error"));
}

#[test]
fn verify_default_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = ionkerr(&["verify", "--report", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        fs::read_to_string(p).unwrap()
    };
    let (a, b) = (run("a.txt"), run("b.txt"));
    assert_eq!(a, b);
    for needle in ["closed_form_paper", "perturbation_engine", "oracle_slope", "paper_vs_pt", "cutoff_convergence", "overall,PASS"] {
        assert!(a.contains(needle), "missing {needle}");
    }
}

#[test]
fn verify_near_degenerate_rocking_uses_shifted_ladder() {
    let o = ionkerr(&["verify", "--r", "1.05"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("ladder shift 1"));
}

#[test]
fn verify_single_xi_reports_direct_ratio() {
    let o = ionkerr(&["verify", "--xi", "1e-4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("oracle_direct_ratio"));
    assert!(!text.contains("oracle_slope"));
}

#[test]
fn verify_gate_failure_exits_3() {
    let o = ionkerr(&["verify", "--xi", "5e-2,2e-2,1e-2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_rejects_tiny_cutoffs() {
    let o = ionkerr(&["verify", "--cutoffs", "4,4,4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn table1_flags_two_rows_at_213() {
    let o = ionkerr(&["table1", "--nx", "2", "--ny", "1", "--ns", "3", "--r", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.trim_start().chars().next().is_some_and(|c| c.is_ascii_digit())).collect();
    assert_eq!(rows.len(), 10);
    let flagged: Vec<&str> = rows.iter().filter(|l| l.contains("PRINTED TYPO")).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(flagged, ["5", "10"]);
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn table1_vacuum() {
    let o = ionkerr(&["table1", "--nx", "0", "--ny", "0", "--ns", "0"]);
    assert!(o.status.success());
    // Every row with a lowering step is closed; rows 1, 3 and 7 stay open.
    assert_eq!(stdout(&o).matches("(closed)").count(), 7);
}

#[test]
fn compare_fixture_and_errors() {
    let o = ionkerr(&["compare", "--data", &fixture("synthetic_paper.csv"), "--nu-perp", "5e6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("formula,rms_residual_hz,chi_squared,points_with_sigma"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "nu_z_hz,chi_over_2pi_hz\n1e6,-2.9\n1.1e6,oops\n").unwrap();
    let o = ionkerr(&["compare", "--data", bad.to_str().unwrap(), "--nu-perp", "5e6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let large = dir.path().join("large.csv");
    fs::write(&large, "nu_z_hz,chi_over_2pi_hz\n1e6,-18000\n").unwrap();
    let o = ionkerr(&["compare", "--data", large.to_str().unwrap(), "--nu-perp", "5e6"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ionkerr(&["compare", "--data", large.to_str().unwrap(), "--nu-perp", "5e6", "--allow-large"]);
    assert!(o.status.success());

    let o = ionkerr(&["compare", "--data", "/definitely/not/here.csv", "--nu-perp", "5e6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("sweep.csv");
    fs::write(
        &cfg,
        format!(
            "trap.nu_z_hz = 1e6\ntrap.nu_perp_hz = 5e6\nsweep.start_hz = 1e6\nsweep.stop_hz = 2e6\nsweep.steps = 2\noutput.path = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = ionkerr(&["--config", cfg.to_str().unwrap(), "chi"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((value_after(&stdout(&o), "chi/2pi paper") + 2.94).abs() < 0.01);

    let o = ionkerr(&["--config", cfg.to_str().unwrap(), "sweep"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);

    fs::write(&cfg, "trap.nu_z_hz = 1e6\ntrap.nu_perp_hz = 0.5e6\n").unwrap();
    let o = ionkerr(&["--config", cfg.to_str().unwrap(), "chi"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ionkerr"))
            .args(["sweep", "--nu-z-start", "0.5e6", "--nu-z-stop", "1e6", "--nu-z-steps", "4", "--nu-perp", "5e6"])
            .env("IONKERR_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("3").stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(ionkerr(&["nonsense"]).status.code(), Some(1));
    assert_eq!(ionkerr(&["chi", "--formula", "neither", "--nu-z", "1e6", "--nu-perp", "5e6"]).status.code(), Some(1));
}
