use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_page-spectrum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_record(o: &Output) -> serde_json::Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let line = err.lines().last().expect("error record on stderr");
    serde_json::from_str(line).expect("error record is JSON")
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn scalar_ground_family_as_csv() {
    let o = run(&["compute", "--problem", "scalar", "--n", "0", "--k", "0", "--overtones", "5", "--resolution", "250"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("problem,n,k,N,resolution,eigenvalue,residual,units\n"));
    let values: Vec<f64> = csv_column(&text, "eigenvalue").iter().map(|v| v.parse().unwrap()).collect();
    let expected = [0.0, 1.85251690621979, 5.55511072563301, 11.1094400455677, 18.5152564002121];
    assert_eq!(values.len(), 5);
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() < 1e-10 * (1.0 + e), "{v} vs {e}");
    }
    assert_eq!(csv_column(&text, "N"), ["0", "1", "2", "3", "4"]);
    assert!(csv_column(&text, "units").iter().all(|u| u == "Lambda=1"));
    assert!(csv_column(&text, "resolution").iter().all(|r| r == "250"));
}

#[test]
fn tensor_spectrum_to_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tensor.json");
    let o = run(&["compute", "--problem", "tensor", "--overtones", "60", "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["problem"], "tensor");
    assert_eq!(v["resolutions"], serde_json::json!([551, 577, 601]));
    let records = v["eigenvalues"].as_array().unwrap();
    assert_eq!(records.len(), 60);
    let first = records[0]["eigenvalue"].as_f64().unwrap();
    assert!((first - -6.44142027579817).abs() < 1e-10);
    let lambda = records[0]["lambda"].as_f64().unwrap();
    assert!(lambda < 0.0 && (lambda / first - 0.30882).abs() < 1e-4);
    assert!(records.iter().all(|r| r["residual"].as_f64().unwrap() <= 1e-10));
}

#[test]
fn negative_k_is_rejected() {
    let o = run(&["compute", "--k", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let rec = error_record(&o);
    assert_eq!(rec["error"]["kind"], "invalid_input");
    assert_eq!(rec["exit_code"], 2);
}

#[test]
fn malformed_arguments_exit_with_invalid_input() {
    for args in [
        &["compute", "--resolution", "300,250"][..],
        &["compute", "--overtones", "0"],
        &["compute", "--problem", "vector"],
        &["compute", "--problem", "tensor", "--resolution", "100,151"],
        &["fit", "--window", "9:3"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(error_record(&o)["error"]["kind"], "invalid_input", "{args:?}");
    }
    assert!(run(&["--help"]).status.success());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("ref.csv");
    std::fs::write(
        &cfg,
        format!(
            "problem = \"nu-zero-reference\"\nn = 1\nk = 1\novertones = 4\nresolution = 64\nout = \"{}\"\n\n[tolerances]\nrealness = 1e-9\n",
            out.display()
        ),
    )
    .unwrap();
    let o = run(&["compute", "--config", cfg.to_str().unwrap(), "--overtones", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let values: Vec<f64> = csv_column(&text, "eigenvalue").iter().map(|v| v.parse().unwrap()).collect();
    // μ = 3·5 − 1 = 14; λ = 14/4 + ℓ(ℓ+1), ℓ = 1 + N
    let exact = [5.5, 9.5, 15.5];
    assert_eq!(values.len(), 3);
    for (v, e) in values.iter().zip(exact) {
        assert!((v - e).abs() < 1e-10, "{v} vs {e}");
    }
    std::fs::write(&cfg, "colour = \"blue\"\n").unwrap();
    assert_eq!(run(&["compute", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn eigenfunctions_are_right_endpoint_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = run(&[
        "compute", "--n", "1", "--k", "0", "--overtones", "3", "--resolution", "64", "--eigenfunctions", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let side = std::fs::read_to_string(dir.path().join("run.eigenfunctions.csv")).unwrap();
    let mut lines = side.lines();
    assert_eq!(lines.next(), Some("N,x,u"));
    let rows: Vec<(usize, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3 * 65);
    for big_n in 0..3 {
        let first = rows.iter().find(|r| r.0 == big_n).unwrap();
        assert_eq!((first.1, first.2), (1.0, 1.0));
    }
    // JSON carries the same data inline
    let o = run(&["compute", "--overtones", "2", "--resolution", "32", "--eigenfunctions", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ef = v["eigenvalues"][1]["eigenfunction"].as_array().unwrap();
    assert_eq!(ef.len(), 33);
    assert_eq!(ef[0]["u"].as_f64(), Some(1.0));
    assert_eq!(v["eigenvalues"][1]["normalization"], "right-endpoint");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("run{i}.json"))).collect();
    for p in &paths {
        let o = run(&["compute", "--n", "2", "--k", "1", "--overtones", "6", "--format", "json", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert!(!Path::new(&paths[0]).with_extension("json.tmp").exists());
}

#[test]
fn validate_reports_measured_residuals() {
    let o = run(&["validate", "--suite", "integrals,nu-zero,shooting"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let suites = v.as_array().unwrap();
    assert_eq!(suites.len(), 3);
    for s in suites {
        assert_eq!(s["passed"], true);
        for c in s["checks"].as_array().unwrap() {
            assert!(c["measured"].as_f64().unwrap() <= c["threshold"].as_f64().unwrap());
        }
    }
    let shooting = suites.iter().find(|s| s["suite"] == "shooting").unwrap();
    assert!(shooting["checks"].as_array().unwrap().iter().all(|c| c["measured"].as_f64().unwrap() < 1e-8));
}

#[test]
fn fit_reports_slope_and_prediction() {
    let o = run(&["fit", "--n", "0", "--k", "0", "--window", "200:500", "--resolution", "800", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a = v["fits"][0]["a"].as_f64().unwrap();
    assert!((a - 0.925729).abs() < 1e-6, "{a}");
    let prediction = v["perturbative_prediction"].as_f64().unwrap();
    assert!((prediction - 0.92064).abs() < 1e-5);
    // window beyond the resolved overtones is a numerical failure
    let o = run(&["fit", "--window", "200:500", "--resolution", "300"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_record(&o)["error"]["kind"], "numerical_failure");
}
