use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhmetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    let ok = run(&["qh-path-check", "--kind", "cantor", "-a", "0.5", "--n", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).trim_end().ends_with("pass"));

    for args in [
        &["qh-path-check", "--kind", "cantor", "-a", "0.5", "--n", "0"][..],
        &["qh-path-check", "--kind", "koch", "-a", "0.6", "--n", "2"],
        &["render", "--kind", "koch", "-a", "0.3", "--depth", "9"],
        &["bounds-cantor", "--grid", "0.1:0.5"],
        &["qh-dist", "--kind", "punctured", "--from", "0,0", "--to", "1,0"],
        &["no-such-command"],
    ] {
        assert_eq!(run(args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn bounds_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = run(&["bounds-cantor", "--grid", "0.1:0.9:0.2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,beta1,beta2,gap"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    for (row, expected) in rows.iter().zip([0.1, 0.3, 0.5, 0.7, 0.9]) {
        assert_eq!(row[0], expected);
        let b1 = qhmetric::cantor::beta1_cantor(expected);
        let b2 = qhmetric::cantor::beta2_cantor(expected);
        assert!((row[1] - b1).abs() < 1e-11 && (row[2] - b2).abs() < 1e-11);
        assert!((row[3] - (row[2] - row[1])).abs() < 1e-11);
    }
}

#[test]
fn empty_grid_is_header_only() {
    let out = run(&["bounds-koch", "--grid", "0.4:0.2:0.1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "param,beta1,beta2,gap\n");
}

#[test]
fn koch_render_has_full_prefractal() {
    let out = run(&["render", "--kind", "koch", "-a", "0.25", "--depth", "4"]);
    assert!(out.status.success());
    let svg = stdout(&out);
    let points = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(points.split(' ').count(), 3 * 4usize.pow(4));
    assert!(!svg.contains("<path"));
}

#[test]
fn punctured_distance_reports_exact_value() {
    let out = run(&["qh-dist", "--kind", "punctured", "--from", "1,0", "--to", "-1,0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let field = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    let (upper, exact) = (field("upper_bound "), field("exact "));
    assert!((exact - std::f64::consts::PI).abs() < 1e-11);
    assert!(upper >= exact - 1e-6 && upper <= exact * 1.02);
}

#[test]
fn dimension_of_classical_snowflake() {
    let out = run(&["dimension", "--kind", "koch", "-a", "0.3333333333333333", "--tol", "1e-13"]);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 4f64.ln() / 3f64.ln()).abs() < 1e-11);
}
