use std::path::Path;
use std::process::{Command, Output};

fn bellsteer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellsteer")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn sample_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    for out in [&a, &b] {
        assert!(bellsteer(&["sample", "--n", "500", "--seed", "7", "--out", out]).status.success());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.lines().count(), 501);
    assert!(text.starts_with("index,t1,t2,t3,p00,p01,p10,p11,C,S,chsh,normS,V,frob,s3lb,s3est,class\n"));
}

#[test]
fn analyze_json_has_report_keys() {
    let o = bellsteer(&["analyze", "--t", "-1,-1,-1", "--json"]);
    assert!(o.status.success(), "{o:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "steerable2");
    assert_eq!(v["C"], 1.0);
    assert!((v["S"].as_f64().unwrap() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-15);

    let o = bellsteer(&["analyze", "--werner", "0.7", "--s3-estimate", "--seed", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "entangled-unsteerable2-steerable3");
    assert!(v["s3est"].as_f64().unwrap() >= v["s3lb"].as_f64().unwrap() - 1e-6);
}

#[test]
fn analyze_rejects_bad_states() {
    assert_eq!(bellsteer(&["analyze", "--t", "0.8,0.5,0.3"]).status.code(), Some(2));
    assert_eq!(bellsteer(&["analyze", "--probs", "0.5,0.5,0.5,0.5"]).status.code(), Some(2));
    assert!(!bellsteer(&["analyze", "--werner", "0.5", "--edge", "0.5"]).status.success());
    assert!(!bellsteer(&["analyze"]).status.success());
    let o = bellsteer(&["analyze", "--edge", "0.5"]);
    assert!(stdout(&o).contains("S       = 2\n"));
}

#[test]
fn verify_exit_codes() {
    let o = bellsteer(&["verify", "--n", "20000", "--seed", "1", "--strict"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 violations, 0 saturation failures"));
    assert_eq!(bellsteer(&["verify", "--n", "0", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn thresholds_prints_three_values() {
    let o = bellsteer(&["thresholds", "--family", "werner"]);
    let text = stdout(&o);
    let got: Vec<f64> = text.lines().map(|l| l.rsplit(' ').next().unwrap().parse().unwrap()).collect();
    let want = [0.5, (3f64.sqrt() + 1.0) / 4.0, (3.0 * std::f64::consts::SQRT_2 + 2.0) / 8.0];
    assert_eq!(got.len(), 3);
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-9, "{text}");
    }
    assert!(!bellsteer(&["thresholds", "--family", "edge"]).status.success());
}

#[test]
fn ft_reads_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "pts.txt");
    std::fs::write(&file, "1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n").unwrap();
    let o = bellsteer(&["ft", "--points", &file]);
    assert!(o.status.success());
    let text = stdout(&o);
    let total: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("total_distance = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((total - 4.0 * 3f64.sqrt()).abs() < 1e-12);

    std::fs::write(&file, "1 1 1\n1 -1\n").unwrap();
    assert_eq!(bellsteer(&["ft", "--points", &file]).status.code(), Some(2));
}

#[test]
fn sweep_and_regions_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = path(dir.path(), "sweep.csv");
    let o = bellsteer(&["sweep", "--family", "werner", "--from", "0", "--to", "1", "--step", "0.25", "--out", &sweep]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&sweep).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("param,t1,"));
    let bad = bellsteer(&["sweep", "--family", "edge", "--from", "0", "--to", "1", "--step", "0", "--out", &sweep]);
    assert_eq!(bad.status.code(), Some(2));

    let regions = path(dir.path(), "regions.csv");
    let o = bellsteer(&["regions", "--axis", "t3", "--value", "-0.2", "--res", "16", "--out", &regions]);
    assert!(o.status.success(), "{o:?}");
    let text = std::fs::read_to_string(&regions).unwrap();
    assert_eq!(text.lines().count(), 16 * 16 + 1);
    assert!(text.contains("invalid"));
    assert_eq!(bellsteer(&["regions", "--axis", "t4", "--value", "0", "--res", "16", "--out", &regions]).status.code(), Some(2));
}
