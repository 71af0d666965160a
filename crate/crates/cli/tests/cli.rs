use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const REFERENCE_SYSTEM: &str = r#"{"kappa1": 0.15, "kappa2": 0.25, "nbar1": 0.01, "nbar2": 0.1, "g": 1.0}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_coherence"));
    c.env_remove("COHERENCE_THREADS");
    c
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn config(system: &str, extra: &str) -> String {
    format!(r#"{{"schema": "coherence-run/1", "system": {system}{extra}}}"#)
}

fn run(cfg: &Path, args: &[&str]) -> Output {
    bin().arg("--config").arg(cfg).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn parse_g3(csv: &str) -> Vec<(f64, f64, f64)> {
    let mut lines = csv.split('\n');
    assert_eq!(lines.next(), Some("tau1,tau2,g3"));
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

fn assert_single_line_diagnostic(o: &Output, code: &str, exit: i32) {
    assert_eq!(o.status.code(), Some(exit), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{code}]: ")), "{err}");
}

#[test]
fn g3_surface_shows_bunching() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "reference.json", &config(REFERENCE_SYSTEM, ""));
    let o = run(&cfg, &["g3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let rows = parse_g3(&text);
    assert_eq!(rows.len(), 21 * 21);
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert_eq!(rows, sorted);
    let at = |t1: f64, t2: f64| rows.iter().find(|r| r.0 == t1 && r.1 == t2).unwrap().2;
    for t1 in [1.0, 2.0, 5.0] {
        assert!(at(t1, 0.0) > at(t1, 10.0));
    }
    let second = text.lines().nth(1).unwrap();
    assert_eq!(second, "0.000000000000e+00,0.000000000000e+00,2.015971256121e+00");
}

#[test]
fn csv_is_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "reference.json", &config(REFERENCE_SYSTEM, ""));
    let one = run(&cfg, &["g3", "--threads", "1"]);
    let many = run(&cfg, &["g3", "--threads", "7"]);
    let env = bin()
        .arg("--config")
        .arg(&cfg)
        .arg("g3")
        .env("COHERENCE_THREADS", "3")
        .output()
        .unwrap();
    assert!(one.status.success() && many.status.success() && env.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn kind_y_matches_kind_x_on_diagonal() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "reference.json", &config(REFERENCE_SYSTEM, ""));
    let x = parse_g3(&stdout(&run(&cfg, &["g3", "--kind", "x"])));
    let y_cfg = write_config(&dir, "reference_y.json", &config(REFERENCE_SYSTEM, r#", "kind": "y""#));
    let y = parse_g3(&stdout(&run(&y_cfg, &["g3"])));
    let mut diagonal = 0;
    for (a, b) in x.iter().zip(&y) {
        assert_eq!((a.0, a.1), (b.0, b.1));
        if a.0 == a.1 {
            assert!((a.2 - b.2).abs() <= 1e-9 * a.2.abs());
            diagonal += 1;
        }
    }
    assert_eq!(diagonal, 21);
}

#[test]
fn vacuum_reservoirs_report_zero_denominator() {
    let dir = TempDir::new().unwrap();
    let system = r#"{"kappa1": 0.15, "kappa2": 0.25, "nbar1": 0.0, "nbar2": 0.0, "g": 1.0}"#;
    let cfg = write_config(&dir, "vac.json", &config(system, ""));
    let o = run(&cfg, &["g3"]);
    assert_single_line_diagnostic(&o, "zero_denominator", 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn out_flag_and_config_output() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("from_config.csv");
    let extra = format!(
        r#", "grid": {{"tau1": {{"min": 0, "max": 1, "steps": 2}}, "tau2": {{"min": 0, "max": 2, "steps": 3}}}}, "output": {}"#,
        serde_json::to_string(&target).unwrap()
    );
    let cfg = write_config(&dir, "small.json", &config(REFERENCE_SYSTEM, &extra));
    assert!(run(&cfg, &["g3"]).status.success());
    let from_config = std::fs::read_to_string(&target).unwrap();
    assert_eq!(parse_g3(&from_config).len(), 6);

    let flag = dir.path().join("flag.csv");
    let o = run(&cfg, &["g3", "--out", flag.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&flag).unwrap(), from_config);
}

#[test]
fn eig_prints_sorted_spectrum() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "reference.json", &config(REFERENCE_SYSTEM, ""));
    let o = run(&cfg, &["eig"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "index,re,im\n0,1.000000000000e-01,-9.996874511566e-01\n1,1.000000000000e-01,9.996874511566e-01\n"
    );
}

#[test]
fn covariance_is_hermitian_at_equal_times() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "reference.json", &config(REFERENCE_SYSTEM, ""));
    let text = stdout(&run(&cfg, &["covariance"]));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!((rows[0][2] - 0.0657275542).abs() < 1e-9);
    assert!((rows[3][2] - 0.0665634675).abs() < 1e-9);
    assert!((rows[1][3] + rows[2][3]).abs() < 1e-15);
    assert!((rows[1][3].abs() - 0.00417956656).abs() < 1e-10);

    let later = stdout(&run(&cfg, &["covariance", "--tau", "40"]));
    assert_ne!(later, text);
}

fn detectors(ranks: [usize; 4]) -> String {
    format!(
        r#", "detectors": [
            {{"id": "1", "kind": "maxwell", "position": "r1", "gate_rank": {}}},
            {{"id": "2", "kind": "maxwell", "position": "r2", "gate_rank": {}}},
            {{"id": "3", "kind": "schrodinger", "position": "r3", "gate_rank": {}}},
            {{"id": "4", "kind": "schrodinger", "position": "r4", "gate_rank": {}}}
        ]"#,
        ranks[0], ranks[1], ranks[2], ranks[3]
    )
}

#[test]
fn gating_reports_interleaved_ordering() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "plan.json", &config(REFERENCE_SYSTEM, &detectors([2, 4, 1, 3])));
    let o = run(&cfg, &["gating"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "ordering: Psi+[r3@t3] E-[r1@t1] Psi+[r4@t4] E-[r2@t2] E+[r2@t2] Psi[r4@t4] E+[r1@t1] Psi[r3@t3]"
    );
}

#[test]
fn gating_lists_three_terms_two_survivors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "plan.json", &config(REFERENCE_SYSTEM, &detectors([1, 2, 3, 4])));
    let text = stdout(&run(&cfg, &["gating"]));
    assert!(text.contains("contributions: 3\n"));
    assert_eq!(text.matches("[rate]").count(), 2);
    assert!(text.ends_with("counting rate: direct boson_exchange\n"));
    assert!(text.contains("fermion_cross  -2 eta_m(r1) eta_m(r2) eta_x(r3,r4)"));

    let dist = config(
        REFERENCE_SYSTEM,
        &format!("{}, \"distinguishable\": true", detectors([1, 2, 3, 4])),
    );
    let cfg = write_config(&dir, "dist.json", &dist);
    assert!(stdout(&run(&cfg, &["gating"])).contains("contributions: 1\n"));
}

#[test]
fn gating_single_photodetector() {
    let dir = TempDir::new().unwrap();
    let extra = r#", "detectors": [{"id": "1", "kind": "maxwell", "position": "r1", "gate_rank": 1}]"#;
    let cfg = write_config(&dir, "one.json", &config(REFERENCE_SYSTEM, extra));
    let text = stdout(&run(&cfg, &["gating"]));
    assert!(text.starts_with("ordering: E-[r1@t1] E+[r1@t1]\n"));
}

#[test]
fn gating_rejects_bad_plans() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "dup.json", &config(REFERENCE_SYSTEM, &detectors([1, 1, 3, 4])));
    assert_single_line_diagnostic(&run(&cfg, &["gating"]), "detection", 2);
    let none = write_config(&dir, "none.json", &config(REFERENCE_SYSTEM, ""));
    assert_single_line_diagnostic(&run(&none, &["gating"]), "config", 65);
}

#[test]
fn terms_evaluates_coefficients() {
    let dir = TempDir::new().unwrap();
    let eff = r#", "efficiencies": {"eta_m(r1)": 0.5, "eta_m(r2)": 0.5, "eta_s(r3)": 0.2, "eta_s(r4)": 0.2,
        "eta_s(r3,r4)": 0.1, "eta_s(r4,r3)": 0.1, "eta_x(r3,r4)": 0.05}"#;
    let cfg = write_config(
        &dir,
        "terms.json",
        &config(REFERENCE_SYSTEM, &format!("{}{eff}", detectors([1, 2, 3, 4]))),
    );
    let o = run(&cfg, &["terms"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "class,sign,prefactor,coefficient,counting_rate\n\
         direct,1,1,1.000000000000e-02,true\n\
         boson_exchange,1,1,2.500000000000e-03,true\n\
         fermion_cross,-1,2,-2.500000000000e-02,false\n"
    );

    let missing = write_config(
        &dir,
        "missing.json",
        &config(REFERENCE_SYSTEM, &detectors([1, 2, 3, 4])),
    );
    assert_single_line_diagnostic(&run(&missing, &["terms"]), "detection", 2);
}

#[test]
fn oracle_check_passes_for_reference_system() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "reference.json", &config(REFERENCE_SYSTEM, ""));
    let o = run(&cfg, &["oracle-check"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "tau1,tau2,engine,oracle,rel_error,within_tolerance");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn oracle_check_decoupled_thermal_identity() {
    let dir = TempDir::new().unwrap();
    let system = r#"{"kappa1": 0.15, "kappa2": 0.25, "nbar1": 0.05, "nbar2": 0.1, "g": 0.0}"#;
    let cfg = write_config(&dir, "g0.json", &config(system, r#", "oracle": {"points": [[0, 0]]}"#));
    let o = run(&cfg, &["oracle-check"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let row: Vec<f64> = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .take(4)
        .map(|x| x.parse().unwrap())
        .collect();
    let want = 2.0 * 0.1 * 0.1 * 0.05;
    assert!((row[2] - want).abs() < 1e-12 * want, "{row:?}");
    assert!(((row[3] - want) / want).abs() < 1e-6, "{row:?}");
}

#[test]
fn oracle_check_cutoff_too_small() {
    let dir = TempDir::new().unwrap();
    let system = r#"{"kappa1": 0.15, "kappa2": 0.25, "nbar1": 0.5, "nbar2": 0.5, "g": 1.0}"#;
    let cfg = write_config(&dir, "hot.json", &config(system, r#", "oracle": {"cutoff": 3}"#));
    assert_single_line_diagnostic(&run(&cfg, &["oracle-check"]), "cutoff_too_small", 2);
}

#[test]
fn oracle_check_breach_exits_nonzero_after_table() {
    let dir = TempDir::new().unwrap();
    let extra = r#", "oracle": {"cutoff": 8, "points": [[1.0, 0.5]], "max_relative_error": 1e-12}"#;
    let cfg = write_config(&dir, "strict.json", &config(REFERENCE_SYSTEM, extra));
    let o = run(&cfg, &["oracle-check"]);
    assert_single_line_diagnostic(&o, "oracle_tolerance", 3);
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",false"));
}

#[test]
fn usage_and_config_errors() {
    let dir = TempDir::new().unwrap();
    assert_single_line_diagnostic(&bin().arg("g3").output().unwrap(), "usage", 64);
    assert_single_line_diagnostic(&bin().arg("frobnicate").output().unwrap(), "usage", 64);

    let missing = dir.path().join("absent.json");
    assert_single_line_diagnostic(&run(&missing, &["eig"]), "io", 74);

    let bad = write_config(&dir, "bad.json", r#"{"schema": "coherence-run/2", "system": {}}"#);
    assert_single_line_diagnostic(&run(&bad, &["eig"]), "config", 65);

    let unstable = r#"{"kappa1": -0.15, "kappa2": 0.25, "nbar1": 0.01, "nbar2": 0.1, "g": 1.0}"#;
    let cfg = write_config(&dir, "unstable.json", &config(unstable, ""));
    let o = run(&cfg, &["eig"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);

    let good = write_config(&dir, "reference.json", &config(REFERENCE_SYSTEM, ""));
    assert_single_line_diagnostic(&run(&good, &["g3", "--threads", "0"]), "usage", 64);
    let o = bin()
        .arg("--config")
        .arg(&good)
        .arg("eig")
        .env("COHERENCE_THREADS", "many")
        .output()
        .unwrap();
    assert_single_line_diagnostic(&o, "usage", 64);
}

#[test]
fn help_exits_zero() {
    let o = bin().arg("--help").output().unwrap();
    assert!(o.status.success());
    for sub in ["eig", "covariance", "g3", "gating", "terms", "oracle-check"] {
        assert!(stdout(&o).contains(sub), "{sub}");
    }
}
