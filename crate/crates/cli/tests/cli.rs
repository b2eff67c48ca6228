use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lsseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsseq")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn params_check() {
    let ok = lsseq(&["params", "check", "2,1,1"]);
    assert_eq!(ok.status.code(), Some(0));
    let beta = json(&ok)["beta"].as_f64().unwrap();
    assert!((beta - 0.392647).abs() < 1e-6);
    assert_eq!(lsseq(&["params", "check", "1,1"]).status.code(), Some(0));

    let bad = lsseq(&["params", "check", "0,1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["reason"], "ZeroEndpoint");
    assert_eq!(json(&lsseq(&["params", "check", "1,0,0,0,1"]))["reason"], "RootConditionViolated");
}

#[test]
fn generation() {
    let out = lsseq(&["gen", "2,1,1", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "N,value");
    let beta: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    let second: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    let third: f64 = rows[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!((second - 2.0 * beta).abs() < 1e-15);
    assert!((third - (2.0 * beta + beta * beta)).abs() < 1e-15);

    let coeffs = stdout(&lsseq(&["gen", "2,1,1", "--count", "1", "--start", "8", "--coeffs", "--no-header"]));
    assert!(coeffs.starts_with("8,0.3688") && coeffs.trim_end().ends_with(",2:2 3:1"));

    let as_json = json(&lsseq(&["gen", "2", "--count", "3", "--format", "json"]));
    let values: Vec<f64> = as_json.as_array().unwrap().iter().map(|p| p["value"].as_f64().unwrap()).collect();
    assert_eq!(values, vec![0.5, 0.25, 0.75]);
}

#[test]
fn digits_and_counts() {
    let out = stdout(&lsseq(&["digits", "2,1,1", "9"]));
    assert!(out.contains("9,\"(1,2);(1,0)\""), "{out}");
    let big = json(&lsseq(&["digits", "1,1", "123456789012345678901234567890", "--format", "json"]));
    assert!(big["pairs"].as_array().unwrap().len() > 100);

    let counts = stdout(&lsseq(&["counts", "1,1", "--levels", "5"]));
    let t: Vec<&str> = counts.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(t, vec!["1", "2", "3", "5", "8", "13"]);
}

#[test]
fn partition_output() {
    let out = stdout(&lsseq(&["partition", "2,1,1", "--level", "1", "--endpoints", "--no-header"]));
    let ends: Vec<f64> = out.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(ends.len(), 4);
    assert!((ends[3] - 0.939465).abs() < 1e-6);
    assert_eq!(lsseq(&["partition", "1,1", "--level", "60"]).status.code(), Some(1));
}

#[test]
fn disc_round_trip() {
    let generated = lsseq(&["gen", "3,2,1", "--count", "5000"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_lsseq"))
        .args(["disc", "--file", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&generated.stdout).unwrap();
    let piped = child.wait_with_output().unwrap();
    let direct = lsseq(&["disc", "3,2,1", "--count", "5000"]);
    assert_eq!(piped.stdout, direct.stdout);
    let report = json(&direct);
    assert!(report["star"].as_f64().unwrap() <= report["extreme"].as_f64().unwrap());
}

#[test]
fn bounds_and_verify() {
    let b = json(&lsseq(&["bound", "2,1,1", "--n", "1000"]));
    assert_eq!(b["kind"], "generalized");
    assert_eq!(b["evaluated"]["certified"], true);
    assert_eq!(b["printed"]["main_coeff"].as_f64(), Some(51.4562));
    assert_eq!(lsseq(&["bound", "2,1,1", "--kind", "classical"]).status.code(), Some(1));
    let c = json(&lsseq(&["bound", "10,1", "--kind", "classical"]));
    assert!((c["main_coeff"].as_f64().unwrap() - 9.02).abs() < 0.01);

    for (p, max) in [("1,1", "100000"), ("2,1,1", "100000"), ("3,2,1", "10000")] {
        let out = lsseq(&["verify", p, "--max-n", max]);
        assert_eq!(out.status.code(), Some(0), "{p}");
        let text = stdout(&out);
        assert_eq!(text.lines().next(), Some("N,D_star,D,bound,ratio"));
        assert!(text.lines().count() > 50);
    }
    assert_eq!(lsseq(&["verify", "1,1", "--max-n", "2000000"]).status.code(), Some(1));
}

#[test]
fn integration_demo() {
    let x2 = json(&lsseq(&["integrate", "1,1", "--count", "10000", "--function", "x2"]));
    assert!(x2["abs_error"].as_f64().unwrap() <= x2["star_disc"].as_f64().unwrap());
    assert_eq!(x2["koksma_bound_ok"], true);
    let cos = json(&lsseq(&["integrate", "2,1,1", "--count", "10000", "--function", "cos2pi"]));
    assert!(cos["estimate"].as_f64().unwrap().abs() <= 4.0 * cos["star_disc"].as_f64().unwrap());
    let one = json(&lsseq(&["integrate", "2,1,1", "--count", "1", "--function", "exp"]));
    let beta = json(&lsseq(&["params", "check", "2,1,1"]))["beta"].as_f64().unwrap();
    assert_eq!(one["estimate"].as_f64().unwrap(), beta.exp());
    assert_eq!(lsseq(&["integrate", "1,1", "--count", "10", "--function", "sin"]).status.code(), Some(1));
}

#[test]
fn deterministic_and_exit_codes() {
    let a = lsseq(&["gen", "2,1,1", "--count", "2000", "--coeffs"]);
    let b = lsseq(&["gen", "2,1,1", "--count", "2000", "--coeffs"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains(&b'\r'));
    assert_eq!(lsseq(&["gen", "0,1", "--count", "2"]).status.code(), Some(1));
    assert_eq!(lsseq(&["disc", "--file", "/nonexistent/points.csv"]).status.code(), Some(3));
    assert_eq!(lsseq(&["nonsense"]).status.code(), Some(1));
    assert_eq!(lsseq(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("lsseq-cli-test-{}.csv", std::process::id()));
    let out = lsseq(&["gen", "1,1", "--count", "4", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written.lines().count(), 5);
}
