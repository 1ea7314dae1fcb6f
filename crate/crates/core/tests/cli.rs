use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frozen-wave")).args(args).output().expect("spawn frozen-wave")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_passes_for_every_fixture() {
    for name in ["linear", "golab_schinzel", "hyperbolic", "quadratic", "ex51", "ex52", "ex53"] {
        let o = run(&["verify", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["pass"], true, "{name}");
        assert!(!v["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn family_parameters_reach_the_solver() {
    let o = run(&["verify", "hyperbolic", "--param", "-4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["verify", "quadratic", "--param", "1", "--param", "2", "--param", "-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn configuration_errors_exit_2() {
    for args in [
        &["verify", "no_such_fixture"][..],
        &["field", "ex52", "--grid", "2x5"],
        &["field", "ex52", "--grid", "x"],
        &["verify", "ex51", "--param", "1"],
        &["verify", "quadratic", "--param", "0", "--param", "0", "--param", "1"],
        &["verify", "ex51", "--tol-pde", "-1"],
        &["bogus", "ex51"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn strict_mode_names_the_failed_hypothesis() {
    let o = run(&["verify", "ex52", "--mode", "strict"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("verification failed"), "{}", stderr(&o));
}

#[test]
fn corrupted_sigma_fails_the_pde_check() {
    let o = run(&["verify", "ex52", "--corrupt-sigma", "0.01"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("pde d_t mu + d_x sigma"), "{err}");
    assert!(err.contains("at (x, t) = "), "{err}");
}

#[test]
fn field_csv_has_header_and_one_row_per_point() {
    let o = run(&["field", "ex52", "--grid", "5x5", "--t-max", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,t,sigma,mu,frozen"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 25);
    let centre = rows.iter().find(|r| r[0].parse::<f64>().unwrap() == 0.0 && r[1].parse::<f64>().unwrap() == 1.0).unwrap();
    assert_eq!(centre[4], "true");
    assert_eq!(centre[2].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["field", "ex51", "--grid", "21x11"]);
    let b = run(&["field", "ex51", "--grid", "21x11"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["verify", "ex53"]);
    let b = run(&["verify", "ex53"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_supplies_settings_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("fields.json");
    std::fs::write(
        &cfg,
        format!("command = \"field\"\nfixture = \"ex52\"\ngrid = \"4x3\"\nformat = \"json\"\nout = {:?}\n", out.to_str().unwrap()),
    )
    .unwrap();
    let o = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["xs"].as_array().unwrap().len(), 4);

    let o = run(&["--config", cfg.to_str().unwrap(), "--grid", "6x3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["xs"].as_array().unwrap().len(), 6);

    std::fs::write(&cfg, "fixture = \"ex52\"\nunknown_key = 1\n").unwrap();
    assert_eq!(run(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let o = run(&["field", "ex52", "--grid", "3x3", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_and_example_and_report() {
    let o = run(&["solve", "linear", "--format", "csv", "--grid", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("x,F,phi,residual"));
    for name in ["ex51", "ex52", "ex53", "golab_schinzel"] {
        assert_eq!(run(&["example", name]).status.code(), Some(0), "{name}");
    }
    let o = run(&["report", "ex51"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.get("reports").is_some());
}
