use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_halfspace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn halfspace")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Rows of a field CSV as `(header, rows)`.
fn table(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::str::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn poisson_kernel_grid_hits_one_over_pi() {
    let out = run(&["kernel", "--family", "polyharmonic", "-n", "1", "-m", "1", "-j", "0", "--grid", "x=-3:3:121,y=0.1:2:20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = table(&out.stdout);
    assert_eq!(header, ["x", "y", "re", "im", "err"]);
    assert_eq!(rows.len(), 121 * 20);
    let row = rows.iter().find(|r| r[0] == 0.0 && (r[1] - 1.0).abs() < 1e-12).expect("row at (0, 1)");
    assert!((row[2] - 1.0 / PI).abs() < 1e-15);
    for r in &rows {
        let want = r[1] / (PI * (r[0] * r[0] + r[1] * r[1]));
        assert!((r[2] - want).abs() <= 1e-14 * want);
    }
}

#[test]
fn golden_plane_kernel() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/kernel_plane_m2_j1.csv");
    let out = run(&["kernel", "--family", "polyharmonic", "-n", "1", "-m", "2", "-j", "1", "--grid", "x=-1:1:5,y=0.5:1:2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, std::fs::read(&golden).unwrap());
    // Last-index half-plane kernel y²/(π s).
    for r in table(&out.stdout).1 {
        let want = r[1] * r[1] / (PI * (r[0] * r[0] + r[1] * r[1]));
        assert!((r[2] - want).abs() <= 1e-15 * want);
    }
}

#[test]
fn zero_xi_is_a_config_error() {
    let out = run(&["kernel", "--family", "metaharmonic", "--xi", "0"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("xi must be nonzero"));
}

#[test]
fn other_config_errors() {
    for args in [
        &["kernel", "--family", "polyharmonic", "-m", "2", "-j", "2", "--grid", "x=0,y=1"][..],
        &["kernel", "--family", "metaharmonic", "--p=-1,0", "--grid", "x=0,y=1"],
        &["kernel", "--family", "polyharmonic", "--grid", "x=0,y=-1"],
        &["kernel", "--family", "polyharmonic", "--grid", "x=0:1"],
        &["kernel", "--family", "polyharmonic"],
        &["kernel", "--family", "nope"],
        &["verify", "nope"],
        &["verify", "trace", "--family", "wave"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn delta_layer_needs_pairing() {
    let out = run(&["kernel", "--family", "wave", "-n", "2", "--grid", "x1=0,x2=0,y=1,t=2"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("DeltaLayerPresent"));

    let out = run(&["kernel", "--family", "wave", "-n", "2", "--grid", "x1=0:0.3:2,x2=0,y=0.5", "--pair-with", "gaussian:0.7,0.05"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = table(&out.stdout).1;
    assert!(rows.iter().all(|r| r[3].is_finite() && r[5].is_finite()));
    assert!(rows[0][3].abs() > 1e-6);
}

#[test]
fn on_cone_point_is_a_domain_error() {
    let out = run(&["kernel", "--family", "wave", "-n", "1", "--grid", "x=0,y=1,t=1"]);
    assert_eq!(code(&out), 3);
    let out = run(&["kernel", "--family", "wave", "-n", "1", "--grid", "x=0,y=0.5,t=1"]);
    assert_eq!(code(&out), 0);
    let v = table(&out.stdout).1[0][3];
    // −(y/π) u^{−3/2} at (0, 0.5, 1).
    assert!((v + 0.5 / PI * 0.75f64.powf(-1.5)).abs() < 1e-15);
}

#[test]
fn metaharmonic_constant_data_gives_exponential_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"family":"metaharmonic","xi":1.0,"grid":"x=0,y=0.5:2:4","data":[{"spatial":{"kind":"constant","value":1.0}}]}"#,
    );
    let out = run(&["solve", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for r in table(&out.stdout).1 {
        assert!((r[2] - (-r[1]).exp()).abs() < 1e-6);
    }
}

#[test]
fn zero_data_gives_zero_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "z.json",
        r#"{"family":"polyharmonic","n":2,"m":2,"grid":"x1=-1:1:3,x2=0,y=0.5:1:2",
            "data":[{"spatial":{"kind":"zero"}},{"spatial":{"kind":"zero"}}]}"#,
    );
    let out = run(&["solve", "--config", &cfg]);
    assert_eq!(code(&out), 0);
    let rows = table(&out.stdout).1;
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[3] == 0.0 && r[4] == 0.0 && r[5] == 0.0));
}

#[test]
fn transient_point_source_step() {
    let dir = tempfile::tempdir().unwrap();
    // Unit-mass Gaussian of width 1e-2 times a ramped step.
    let amp = 1.0 / (1e-2 * (2.0 * PI).sqrt());
    let cfg = write(
        dir.path(),
        "w.json",
        &format!(
            r#"{{"family":"wave","n":1,"grid":"x=0,y=1,t=2","options":{{"ramp_eps":1e-3}},
                "data":[{{"spatial":{{"kind":"gaussian","center":[0.0],"width":1e-2,"amplitude":{amp}}},"time":{{"kind":"heaviside"}}}}]}}"#
        ),
    );
    let out = run(&["solve", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = table(&out.stdout);
    assert_eq!(header, ["x", "y", "t", "re", "im", "err"]);
    assert!((rows[0][3] - 2.0 / (PI * 3f64.sqrt())).abs() < 1e-3);
}

#[test]
fn unreachable_tolerance_is_a_quadrature_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "q.json",
        r#"{"family":"metaharmonic","xi":1.0,"grid":"x=0,y=0.5",
            "options":{"abs_tol":0.0,"rel_tol":1e-18},
            "data":[{"spatial":{"kind":"gaussian","center":[0.3],"width":0.2}}]}"#,
    );
    let out = run(&["solve", "--config", &cfg]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn flags_override_config_and_unknown_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "k.json", r#"{"family":"polyharmonic","n":2,"grid":"x1=0,x2=0,y=1"}"#);
    let out = run(&["kernel", "--config", &cfg, "-n", "1", "--grid", "x=0,y=1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!((table(&out.stdout).1[0][2] - 1.0 / PI).abs() < 1e-15);

    let bad = write(dir.path(), "b.json", r#"{"family":"polyharmonic","grdi":"x=0,y=1"}"#);
    assert_eq!(code(&run(&["kernel", "--config", &bad])), 2);
}

#[test]
fn sampled_csv_boundary_data() {
    let dir = tempfile::tempdir().unwrap();
    // Samples of a Gaussian fine enough that interpolation error is ~1e-6.
    let mut csv = String::from("x,re\n");
    for i in 0..=2000 {
        let x = -5.0 + 1e-2 * i as f64 * 0.5;
        csv.push_str(&format!("{x:e},{:e}\n", (-x * x / 2.0).exp()));
    }
    write(dir.path(), "g.csv", &csv);
    let grid = "x=-1:1:3,y=0.5:1:2";
    let sampled = write(
        dir.path(),
        "s.json",
        &format!(r#"{{"family":"metaharmonic","xi":1.0,"grid":"{grid}","data":[{{"spatial":{{"kind":"csv","path":"g.csv"}}}}]}}"#),
    );
    let exact = write(
        dir.path(),
        "e.json",
        &format!(
            r#"{{"family":"metaharmonic","xi":1.0,"grid":"{grid}","data":[{{"spatial":{{"kind":"gaussian","center":[0.0],"width":1.0}}}}]}}"#
        ),
    );
    let a = run(&["solve", "--config", &sampled]);
    let b = run(&["solve", "--config", &exact]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(code(&b), 0);
    for (ra, rb) in table(&a.stdout).1.iter().zip(table(&b.stdout).1.iter()) {
        assert!((ra[2] - rb[2]).abs() < 1e-4, "{ra:?} vs {rb:?}");
    }
}

#[test]
fn outputs_are_reproducible_and_timing_is_separate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "g.json",
        r#"{"family":"polyharmonic","n":1,"m":2,"grid":"x=-2:2:9,y=0.25:1:3",
            "data":[{"spatial":{"kind":"gaussian","center":[0.1],"width":0.5}},{"spatial":{"kind":"gaussian","center":[-0.2],"width":0.7}}]}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let j = dir.path().join("c.json");
    assert_eq!(code(&run(&["solve", "--config", &cfg, "--threads", "1", "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["solve", "--config", &cfg, "--threads", "3", "--out", b.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["solve", "--config", &cfg, "--out", j.to_str().unwrap()])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(dir.path().join("a.csv.timing.json").exists());

    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&j).unwrap()).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["x", "y", "re", "im", "err"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 27);
    assert_eq!(doc["spec"]["family"], "polyharmonic");
    let csv_rows = table(&std::fs::read(&a).unwrap()).1;
    for (row, js) in csv_rows.iter().zip(doc["rows"].as_array().unwrap()) {
        let js: Vec<f64> = js.as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        assert_eq!(row, &js);
    }
}

#[test]
fn verify_residual_for_the_wave_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = run(&["verify", "residual", "--family", "wave", "-n", "1", "-m", "1", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["seed"], 7);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    for key in ["suite", "spec", "n_points", "max_err", "tol", "pass"] {
        assert!(reports[0].get(key).is_some(), "missing {key}");
    }
    assert!(reports[0]["max_err"].as_f64().unwrap() < 1e-8);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS residual"));
}

#[test]
fn tampered_kernel_fails_verification() {
    let out = run(&["verify", "closed-form", "--tamper-scale", "1.0001"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    let out = run(&["verify", "eq2122", "--family", "metaharmonic", "-m", "2", "--p", "2,1", "--tamper-scale", "0.999"]);
    assert_eq!(code(&out), 1);
}
