use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use confbc::export::{parse_boundary_csv, parse_envelope_csv};

fn confbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confbc"))
        .args(args)
        .env("CONFBC_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn region_writes_envelope_boundary_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("env.csv");
    let svg = dir.path().join("env.svg");
    let bnd = dir.path().join("bnd.csv");
    let o = confbc(&[
        "region", "--example", "dm-ex1", "--bound", "degraded-msg", "--c12", "0.3", "--c21", "0.9", "--grid", "0.1",
        "--out", path_str(&csv), "--svg", path_str(&svg), "--boundary", path_str(&bnd),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let env = parse_envelope_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(env.directions().dim(), 2);
    // Common rate is capped by C12, the sum rate by the input entropy.
    assert!((env.support_along(&[1.0, 0.0]).unwrap() - 0.3).abs() < 1e-9);
    assert!((env.support_along(&[0.0, 1.0]).unwrap() - 1.0).abs() < 2e-3);
    assert!(stdout(&o).contains("support (1,0) = 0.3"));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert!(parse_boundary_csv(&fs::read_to_string(&bnd).unwrap()).unwrap().len() >= 3);
}

#[test]
fn region_csv_goes_to_stdout_without_out() {
    let o = confbc(&["region", "--example", "g-mirror", "--bound", "df", "--r2", "0", "--dirs", "5"]);
    assert!(o.status.success());
    let env = parse_envelope_csv(&stdout(&o)).unwrap();
    // Five fan directions plus the canonical normals not already on the fan.
    assert!(env.values().len() >= 5);
    // Mirror channel at unit power: the common rate is psi(1) plus nothing from the links.
    assert!((env.support_along(&[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn gaussian_outer_region_in_three_dimensions() {
    let o = confbc(&["region", "--example", "g-noise-at-2", "--bound", "outer", "--grid", "0.05", "--dirs", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let env = parse_envelope_csv(&stdout(&o)).unwrap();
    assert_eq!(env.directions().dim(), 3);
}

#[test]
fn inner_bound_from_factorization_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    // Every auxiliary trivial and no links: only the origin is achievable.
    fs::write(
        &f,
        r#"{"cards":{"u":1,"v":1,"w":1,"yhat1":1,"yhat2":1},"x_card":2,"y1_card":2,"y2_card":2,
            "aux":[0.5,0.5],"q1":[[1.0],[1.0]],"q2":[[1.0],[1.0]]}"#,
    )
    .unwrap();
    let o = confbc(&["region", "--example", "dm-ex1", "--bound", "inner1", "--factorization", path_str(&f), "--dirs", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let env = parse_envelope_csv(&stdout(&o)).unwrap();
    assert!(env.values().iter().all(|v| v.abs() < 1e-9));

    fs::write(&f, r#"{"cards":{"u":1}}"#).unwrap();
    let o = confbc(&["region", "--example", "dm-ex1", "--bound", "inner1", "--factorization", path_str(&f)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn inapplicable_bound_exits_with_two() {
    let o = confbc(&["region", "--example", "g-mirror", "--bound", "degraded-msg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = confbc(&["region", "--example", "dm-ex1", "--bound", "df"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments_and_files_exit_with_three() {
    assert_eq!(confbc(&["region", "--bogus"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let ch = dir.path().join("ch.json");
    fs::write(&ch, "{ not json").unwrap();
    let o = confbc(&["region", "--channel", path_str(&ch), "--bound", "outer"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oversized_sweep_exits_with_four() {
    let o = confbc(&[
        "sweep", "--example", "g-mirror", "--vary", "power", "--from", "0.1", "--to", "1", "--points", "20000",
        "--metric", "sumrate-gap",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sweep_writes_one_row_per_point() {
    let o = confbc(&[
        "sweep", "--example", "g-noise-at-2", "--vary", "lambda", "--from", "-0.5", "--to", "0.5", "--points", "3",
        "--metric", "sumrate-gap", "--grid", "0.05",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,sumrate_gap_bits"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].0, -0.5);
    // The outer bound contains the decode-and-forward region.
    assert!(rows.iter().all(|r| r.1 >= -1e-9));
}

#[test]
fn sweep_rejects_empty_range() {
    let o = confbc(&[
        "sweep", "--example", "g-mirror", "--vary", "power", "--from", "2", "--to", "1", "--points", "3", "--metric",
        "sumrate-gap",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_reports_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = confbc(&["verify", "dm-example1", "--json", path_str(&json)]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["suite"], "dm-example1");
    assert_eq!(v["pass"], true);
    assert_eq!(confbc(&["verify", "no-such-suite"]).status.code(), Some(1));
}

#[test]
fn fm_eliminates_a_variable() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("s.json");
    let out = dir.path().join("out.json");
    fs::write(
        &sys,
        r#"{"variables":["x","y"],"inequalities":[
            {"coeffs":[1,0],"rhs":3},{"coeffs":[-1,0],"rhs":-1},{"coeffs":[-1,1],"rhs":0}]}"#,
    )
    .unwrap();
    let o = confbc(&["fm", path_str(&sys), "--eliminate", "x", "--out", path_str(&out)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["variables"], serde_json::json!(["y"]));
    assert_eq!(v["inequalities"].as_array().unwrap().len(), 1);
    assert_eq!(v["inequalities"][0]["rhs"], 3.0);
    assert_eq!(confbc(&["fm", path_str(&sys), "--eliminate", "z"]).status.code(), Some(1));
}

#[test]
fn plot_overlays_envelope_and_boundary_files() {
    let dir = tempfile::tempdir().unwrap();
    let env = dir.path().join("df.csv");
    let bnd = dir.path().join("df_b.csv");
    let svg = dir.path().join("all.svg");
    let o = confbc(&[
        "region", "--example", "g-mirror", "--bound", "df", "--r2", "0", "--out", path_str(&env), "--boundary",
        path_str(&bnd),
    ]);
    assert!(o.status.success());
    let o = confbc(&["plot", path_str(&env), path_str(&bnd), "--svg", path_str(&svg), "--labels", "envelope,boundary"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.contains("envelope") && text.contains("boundary"));
    let o = confbc(&["plot", path_str(&env), "--svg", path_str(&svg), "--labels", "a,b"]);
    assert_eq!(o.status.code(), Some(1));
}
