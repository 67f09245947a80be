use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SIX_DISCS: &str = r#"{"domain":[0,0,1,1],"shapes":[
  {"type":"disc","c":[0.2,0.2],"r":0.1},{"type":"disc","c":[0.5,0.2],"r":0.1},{"type":"disc","c":[0.8,0.2],"r":0.1},
  {"type":"disc","c":[0.2,0.7],"r":0.12},{"type":"disc","c":[0.5,0.75],"r":0.1},{"type":"disc","c":[0.8,0.7],"r":0.12}]}"#;

fn euler_calc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_euler-calc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn six_disc_files(dir: &Path) -> (String, String) {
    let scene = path(dir, "six.json");
    fs::write(&scene, SIX_DISCS).unwrap();
    let pgm = path(dir, "six.pgm");
    let o = euler_calc(&["scene", "rasterize", &scene, "--resolution", "256", "-o", &pgm]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "6");
    (scene, pgm)
}

#[test]
fn integrate_rasters() {
    let dir = tempfile::tempdir().unwrap();
    let (_, pgm) = six_disc_files(dir.path());
    for method in ["cells", "levels", "excursions"] {
        let o = euler_calc(&["integrate", &pgm, "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), "6");
    }
    let empty = path(dir.path(), "empty.pgm");
    fs::write(&empty, "P2\n4 3\n1\n0 0 0 0\n0 0 0 0\n0 0 0 0\n").unwrap();
    assert_eq!(stdout(&euler_calc(&["integrate", &empty])).trim(), "0");

    let o = euler_calc(&["--json", "integrate", &pgm, "--support-chi", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["integral"], 6);
    assert_eq!(v["targets"], serde_json::json!([6, 1]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(euler_calc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(euler_calc(&["integrate", "/nonexistent/file.pgm"]).status.code(), Some(2));
    let bad = path(dir.path(), "bad.json");
    fs::write(&bad, "{not json").unwrap();
    let o = euler_calc(&["integrate", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(euler_calc(&["smooth", "--radius", "-1", &bad]).status.code(), Some(2));
    assert_eq!(euler_calc(&["scene", "rasterize", &bad, "--resolution", "0"]).status.code(), Some(2));
    assert_eq!(euler_calc(&["--help"]).status.code(), Some(0));

    let scene = path(dir.path(), "scene.json");
    fs::write(&scene, SIX_DISCS).unwrap();
    let out = dir.path().join("missing-dir").join("out.pgm");
    let o = euler_calc(&["scene", "rasterize", &scene, "--resolution", "32", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn estimate_dual_against_truth() {
    let dir = tempfile::tempdir().unwrap();
    let (scene, pgm) = six_disc_files(dir.path());
    let net = path(dir.path(), "net.json");
    let o =
        euler_calc(&["scene", "sample", &scene, "--nodes", "6000", "--comm-radius", "0.04", "--seed", "3", "-o", &net]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = euler_calc(&["estimate", "dual", &net, "--truth", &pgm]);
    assert_eq!(stdout(&o), "estimate: 6\ntruth: 6\nmatch: true\n");
    let o = euler_calc(&["--json", "estimate", "dual", &net, "--truth", &scene]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(v["per_level_beta0"][0]["upper"], 6);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (scene, _) = six_disc_files(dir.path());
    let run = || {
        stdout(&euler_calc(&[
            "scene",
            "sample",
            &scene,
            "--nodes",
            "500",
            "--comm-radius",
            "0.08",
            "--seed",
            "11",
            "--noise",
            "0.1",
        ]))
    };
    assert_eq!(run(), run());
}

#[test]
fn triangulated_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = path(dir.path(), "mesh.json");
    // a lit vertex in the middle of a square
    fs::write(&mesh, r#"{"vertices":[[0,0],[1,0],[1,1],[0,1],[0.5,0.5]],"readings":[0,0,0,0,1]}"#).unwrap();
    assert_eq!(stdout(&euler_calc(&["estimate", "triangulated", &mesh])).trim(), "estimate: 1");
    fs::write(&mesh, r#"{"vertices":[[0,0],[1,0],[1,1],[0,1]],"triangles":[[0,1,2],[0,2,3]],"readings":[1,1,1,1]}"#)
        .unwrap();
    assert_eq!(stdout(&euler_calc(&["estimate", "triangulated", &mesh])).trim(), "estimate: 1");
}

#[test]
fn hole_commands() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = path(dir.path(), "field.pgm");
    let mut rows = Vec::new();
    for y in 0..8 {
        let row: Vec<&str> =
            (0..8).map(|x| if (2..6).contains(&x) && (2..6).contains(&y) { "1" } else { "0" }).collect();
        rows.push(row.join(" "));
    }
    fs::write(&pgm, format!("P2\n8 8\n1\n{}\n", rows.join("\n"))).unwrap();
    let hole = path(dir.path(), "hole.json");
    fs::write(&hole, r#"{"rect":[3,3,4,4]}"#).unwrap();
    let v: Value = serde_json::from_str(&stdout(&euler_calc(&["--json", "hole", "bounds", &pgm, &hole]))).unwrap();
    assert_eq!((v["lower"].as_i64(), v["upper"].as_i64()), (Some(1), Some(1)));
    let v: Value = serde_json::from_str(&stdout(&euler_calc(&["--json", "hole", "harmonic", &pgm, &hole]))).unwrap();
    assert!((v["integral_floor"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["strict_interior_extrema"], 0);
}

#[test]
fn smooth_network() {
    let dir = tempfile::tempdir().unwrap();
    let (scene, _) = six_disc_files(dir.path());
    let net = path(dir.path(), "net.json");
    euler_calc(&["scene", "sample", &scene, "--nodes", "3000", "--comm-radius", "0.04", "-o", &net]);
    let v: Value = serde_json::from_str(&stdout(&euler_calc(&["--json", "smooth", "--radius", "0.02", &net]))).unwrap();
    assert_eq!(v["naive"], 6);
    assert!(v["smoothed"].as_f64().is_some());
}

#[test]
fn rint_measures() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "tent.json");
    // tent of height 3 on a closed interval: {h ≥ s} closed intervals, {h > s} open ones
    fs::write(
        &f,
        r#"{"complex":{"kind":"simplicial","vertices":[[0,0],[1,0],[2,0]],"simplices":[[0,1],[1,2]]},"vertex_values":[0,3,0]}"#,
    )
    .unwrap();
    assert_eq!(stdout(&euler_calc(&["rint", &f, "--measure", "floor"])).trim(), "3");
    assert_eq!(stdout(&euler_calc(&["rint", &f, "--measure", "ceil"])).trim(), "-3");
    assert_eq!(stdout(&euler_calc(&["rint", &f, "--measure", "floor", "--by-index"])).trim(), "3");
    assert_eq!(euler_calc(&["rint", &f, "--measure", "median"]).status.code(), Some(2));
}

#[test]
fn vehicles() {
    let dir = tempfile::tempdir().unwrap();
    let traces = path(dir.path(), "traces.json");
    fs::write(
        &traces,
        r#"{"domain":[0,0,1,1],"trajectories":[
          {"path":[[0.1,0.3,0],[0.9,0.3,1]],"footprint_radius":0.05},
          {"path":[[0.5,0.9,0],[0.5,0.1,1]],"footprint_radius":0.05}]}"#,
    )
    .unwrap();
    assert_eq!(stdout(&euler_calc(&["scene", "vehicles", &traces, "--resolution", "128"])).trim(), "2");
}

#[test]
fn transforms() {
    let dir = tempfile::tempdir().unwrap();
    let scene = path(dir.path(), "disc.json");
    fs::write(&scene, r#"{"domain":[0,0,4,4],"shapes":[{"type":"disc","c":[2,2],"r":1}]}"#).unwrap();
    let (csv, svg) = (path(dir.path(), "b.csv"), path(dir.path(), "b.svg"));
    let o = euler_calc(&["transform", "bessel", &scene, "--nx", "9", "--ny", "9", "--csv", &csv, "--svg", &svg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 82);
    assert!(table.starts_with("x,y,value\n"));
    assert!(fs::read_to_string(&svg).unwrap().contains("<rect"));
    // minimum at the centre: 2r there
    let v: Value = serde_json::from_str(&stdout(&euler_calc(&[
        "--json",
        "transform",
        "bessel",
        &scene,
        "--nx",
        "9",
        "--ny",
        "9",
    ])))
    .unwrap();
    assert_eq!(v["local_minima"], serde_json::json!([[2.0, 2.0]]));

    let o = euler_calc(&["--json", "transform", "fourier", &scene, "--directions", "4"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in v["directions"].as_array().unwrap() {
        assert!((row["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    }

    let step = path(dir.path(), "step.json");
    fs::write(&step, r#"{"axes":[[0.0,0.5]],"values":[1,1,1]}"#).unwrap();
    let o = euler_calc(&[
        "--json",
        "transform",
        "wavelet",
        &step,
        "--min-scale",
        "0",
        "--max-scale",
        "1",
        "--lo",
        "-1",
        "--hi",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!v["coefficients"].as_array().unwrap().is_empty());

    let f = path(dir.path(), "f.json");
    fs::write(&f, r#"{"complex":{"kind":"grid","width":2,"height":1},"top_values":[1,1]}"#).unwrap();
    let o = euler_calc(&["--json", "transform", "convolve", &f, &f]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["integral"], 1);
    let o = euler_calc(&["--json", "transform", "convolve", &f, &f, "--deconvolve"]);
    assert_eq!(serde_json::from_str::<Value>(&stdout(&o)).unwrap()["integral"], 1);

    let kernel = path(dir.path(), "k.json");
    fs::write(
        &kernel,
        r#"{"W_points":2,"X_complex":{"kind":"cellular","cells":[{"dim":0},{"dim":0}]},"weights":[[1,0],[0,1]]}"#,
    )
    .unwrap();
    let values = path(dir.path(), "h.json");
    fs::write(&values, "[3, -2]").unwrap();
    let o = euler_calc(&[
        "--json",
        "transform",
        "radon",
        &kernel,
        &values,
        "--inverse",
        &kernel,
        "--mu",
        "1",
        "--lambda",
        "0",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["recovered"], serde_json::json!([3, -2]));
    assert_eq!(v["exact"], true);
}

#[test]
fn serve_answers_http() {
    use std::io::{Read, Write};
    use std::net::{TcpListener, TcpStream};
    use std::time::{Duration, Instant};

    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = Command::new(env!("CARGO_BIN_EXE_euler-calc"))
        .args(["serve", "--port", &port.to_string()])
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    let deadline = Instant::now() + Duration::from_secs(10);
    let mut stream = loop {
        match TcpStream::connect(("127.0.0.1", port)) {
            Ok(s) => break s,
            Err(_) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(50)),
            Err(e) => panic!("server did not start: {e}"),
        }
    };
    let body = r#"{"domain":[0,0,1,1],"shapes":[],"sampling":{"nodes":50}}"#;
    write!(
        stream,
        "POST /sessions HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(response.starts_with("HTTP/1.1 201"), "{response}");
    assert!(response.contains(r#""id":1"#));
}
