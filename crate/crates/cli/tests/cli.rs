use std::process::{Command, Output};

fn bayescfar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bayescfar")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_of(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn threshold_case1_example() {
    let o = bayescfar(&["threshold", "--variant", "case1", "--crp", "1,2,5", "--interferer-index", "3", "--design-pfa", "0.25"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!((value_of(&text, "tau") - 3.0).abs() < 1e-12);
    assert!((value_of(&text, "pfa_at_tau") - 0.25).abs() < 1e-12);
}

#[test]
fn threshold_near_one_alpha_is_near_zero() {
    let o = bayescfar(&["threshold", "--variant", "case3", "--crp", "1,2,5,4", "--design-pfa", "0.999999"]);
    assert!(o.status.success());
    let tau = value_of(&stdout(&o), "tau");
    assert!(tau > 0.0 && tau < 1e-4);
}

#[test]
fn threshold_reads_crp_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let crp = dir.path().join("crp.txt");
    std::fs::write(&crp, "1.0 2.0\n3.0\n").unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, format!("variant = case2\ndesign_pfa = 0.5\ncrp_file = {}\n", crp.display())).unwrap();
    let o = bayescfar(&["threshold", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!((value_of(&text, "pfa_at_tau") / 0.5 - 1.0).abs() < 1e-9);

    // flags win over the file
    let o = bayescfar(&["threshold", "--config", cfg.to_str().unwrap(), "--design-pfa", "0.1"]);
    assert!((value_of(&stdout(&o), "design_pfa") - 0.1).abs() < 1e-15);
}

#[test]
fn config_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["threshold", "--variant", "case2", "--crp", "1,2,3", "--prior", "0.3,0.3,0.3"],
        &["pfa-sweep", "--variant", "case9", "--trials", "10"],
        &["pd-curve", "--scr-grid-db", "", "--trials", "10"],
        &["pfa-sweep", "--trials", "0"],
        &["threshold", "--variant", "case2"],
        &["pfa-sweep", "--set", "colour=blue"],
    ];
    for args in cases {
        assert_eq!(bayescfar(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_failure_exits_3() {
    let o = bayescfar(&["pfa-sweep", "--trials", "10", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn pfa_sweep_header_and_rows() {
    let o = bayescfar(&["pfa-sweep", "--variant", "case3", "--lambda-grid", "0.1,1,10", "--trials", "20000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "variant,N,lambda,icr_db,interferer_cell,trials,declared,pfa_hat,ci_low,ci_high,seed"
    );
    assert_eq!(lines.len(), 4);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 11);
        assert_eq!(fields[0], "case3");
        for f in [&fields[2], &fields[7], &fields[8], &fields[9]] {
            assert!(f.parse::<f64>().unwrap().is_finite());
        }
    }
}

#[test]
fn pd_curve_header_is_stable() {
    let o = bayescfar(&["pd-curve", "--variant", "ca-cfar", "--scr-grid-db", "0,10,20", "--trials", "5000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "variant,N,scr_db,icr_db,trials,pd_hat,ci_low,ci_high,seed"
    );
    let pd: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(pd.len(), 3);
    assert!(pd[0] < pd[1] && pd[1] < pd[2]);
}

#[test]
fn validate_passes_and_negative_control_fails() {
    let o = bayescfar(&["validate"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = bayescfar(&["validate", "--instances", "10", "--perturb", "1e-3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn validate_rel_tol_override() {
    let o = bayescfar(&["validate", "--instances", "10", "--rel-tol", "1e-9"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("rel_tol = 1e-9"));
    let o = bayescfar(&["validate", "--rel-tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}
