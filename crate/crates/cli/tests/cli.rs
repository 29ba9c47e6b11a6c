use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const MODEL: &str = r#"
[rec]
x_min = 0.0
x_max = 4.0
y_min = 0.0
y_max = 3.0

[intensity]
kind = "gaussian_mixture"
background = 0.5
hotspot_x = [1.2]
hotspot_y = [1.5]
hotspot_mass = [8.0]
hotspot_sigma = [0.4]

[link]
kind = "inverse_distance"

[capacity]
kind = "constant"
value = 1.0
"#;

fn tecmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tecmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_model(dir: &Path) -> String {
    let path = dir.join("model.toml");
    fs::write(&path, MODEL).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn edcc_prints_breakdown_and_implied_eps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_model(dir.path());
    let out = tecmap(&[
        "edcc", "--config", &cfg, "--cx", "1.5", "--cy", "1.5", "--radius", "0.8", "--eps", "1",
        "--delta", "0.1",
    ]);
    let v = json(&out);
    let parts = ["alpha", "beta", "gamma"].map(|k| v[k].as_f64().unwrap());
    assert!(parts.iter().all(|p| *p > 0.0));
    assert_eq!(parts.iter().sum::<f64>(), v["total"].as_f64().unwrap());
    assert!(String::from_utf8_lossy(&out.stderr).contains("implied eps"));
}

#[test]
fn fsl_writes_map() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_model(dir.path());
    let csv = dir.path().join("map.csv");
    let out = tecmap(&[
        "fsl", "--config", &cfg, "--radius", "0.6", "--eps", "1", "--delta", "0.2", "--out",
        csv.to_str().unwrap(), "--format", "csv",
    ]);
    let v = json(&out);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,tec"));
    assert_eq!(text.lines().count() as u64, v["n_centers"].as_u64().unwrap() + 1);
    let best = v["argmax_value"].as_f64().unwrap();
    let max = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(f64::MIN, f64::max);
    assert_eq!(best, max);

    let asc = dir.path().join("map.asc");
    let out = tecmap(&[
        "fsl", "--config", &cfg, "--radius", "0.6", "--eps", "1", "--delta", "0.2", "--out",
        asc.to_str().unwrap(), "--format", "ascii",
    ]);
    assert!(out.status.success());
    assert!(fs::read_to_string(&asc).unwrap().starts_with("ncols"));
}

#[test]
fn rcce_uniform_and_density() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_model(dir.path());
    let base = ["rcce", "--config", &cfg, "--radius", "0.5", "--eps", "1", "--delta", "0.2"];
    let uniform = json(&tecmap(&base))["expected_damage"].as_f64().unwrap();
    assert!(uniform > 0.0);

    // flat density over a larger extent, rescaled onto the admissible centers
    let psi = dir.path().join("psi.asc");
    fs::write(
        &psi,
        "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 2\n0.1 0.1\n0.1 0.1\n",
    )
    .unwrap();
    let mut args = base.to_vec();
    args.extend(["--psi", psi.to_str().unwrap()]);
    let rejected = tecmap(&args);
    assert_eq!(rejected.status.code(), Some(2));
    args.push("--normalize-over-rec");
    let out = tecmap(&args);
    let density = json(&out)["expected_damage"].as_f64().unwrap();
    assert!((density - uniform).abs() <= 1e-12 * uniform);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mass"));
}

#[test]
fn sample_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_model(dir.path());
    let out_path = dir.path().join("samples.csv");
    let args = [
        "sample", "--config", &cfg, "--cx", "1.5", "--cy", "1.5", "--radius", "0.8", "--n", "50",
        "--seed", "11", "--out", out_path.to_str().unwrap(),
    ];
    let first = json(&tecmap(&args));
    let text = fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().next(), Some("index,nodes,links,alpha,beta,gamma,total"));
    assert_eq!(text.lines().count(), 51);
    assert_eq!(first, json(&tecmap(&args)));
    assert_eq!(text, fs::read_to_string(&out_path).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_model(dir.path());

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[rec]\nx_min = \"zero\"\n").unwrap();
    let out = tecmap(&[
        "edcc", "--config", bad.to_str().unwrap(), "--cx", "1", "--cy", "1", "--radius", "0.5",
        "--eps", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("nope.toml");
    let out = tecmap(&[
        "edcc", "--config", missing.to_str().unwrap(), "--cx", "1", "--cy", "1", "--radius",
        "0.5", "--eps", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // grid constant not below half the radius
    let out = tecmap(&[
        "edcc", "--config", &cfg, "--cx", "1.5", "--cy", "1.5", "--radius", "0.5", "--eps", "1",
        "--delta", "0.3",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // the derived grid needs far more points than the default budget
    let out = tecmap(&[
        "edcc", "--config", &cfg, "--cx", "1.5", "--cy", "1.5", "--radius", "0.5", "--eps",
        "1e-6",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let unwritable = dir.path().join("no/such/dir/map.csv");
    let out = tecmap(&[
        "fsl", "--config", &cfg, "--radius", "0.6", "--eps", "1", "--delta", "0.2", "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));

    let out = tecmap(&["edcc", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}
