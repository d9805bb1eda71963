use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cu-sketch-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(cli(&["sweep", "--help"]).status.code(), Some(0));
    assert_eq!(cli(&["--version"]).status.code(), Some(0));
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "x.csv");
    for args in [
        vec!["sweep", "--no-such-flag"],
        vec!["frobnicate"],
        vec!["run", "--lambda", "0.5", "--beta", "0.5", "--out", &out],
        vec!["run", "--lambda", "0.5", "--model", "zipf", "--out", &out],
        vec![
            "run",
            "--lambda",
            "0.5",
            "--strategy",
            "both",
            "--out",
            &out,
        ],
        vec!["sweep", "--lambda-grid", "1:0:0.1", "--out", &out],
        vec!["dual", "--n", "10", "--r", "11", "--out", &out],
        vec!["sweep", "--lambda", "0.5", "--jobs", "0", "--out", &out],
    ] {
        assert_eq!(cli(&args).status.code(), Some(1), "{args:?}");
    }
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn dual_reports_measured_and_predicted() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "dual.csv");
    let status = cli(&[
        "dual", "--n", "10", "--r", "2", "--N", "100000", "--out", &out,
    ])
    .status;
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# cu-sketch-lab v"));
    let cols: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let get = |name: &str| -> f64 {
        row[cols.iter().position(|c| *c == name).unwrap()]
            .parse()
            .unwrap()
    };
    assert!((get("measured_mean_r") - 0.111).abs() < 0.01);
    assert!((get("predicted_r") - 1.0 / 9.0).abs() < 1e-12);
}

#[test]
fn reruns_are_byte_identical_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.csv");
    let b = path(dir.path(), "b.csv");
    let base = [
        "sweep",
        "--k",
        "3",
        "--n",
        "200",
        "--lambda-grid",
        "0.4:1.2:0.4",
        "--N",
        "50",
        "--replicates",
        "3",
    ];
    let run = |out: &str, jobs: &str| {
        let mut args = base.to_vec();
        args.extend(["--seed", "7", "--jobs", jobs, "--out", out]);
        assert_eq!(cli(&args).status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run(&a, "1"), run(&b, "4"));

    let ja = path(dir.path(), "a.json");
    let jb = path(dir.path(), "b.json");
    let zipf = |out: &str, jobs: &str| {
        let args = [
            "zipf",
            "--n",
            "200",
            "--lambda",
            "0.5",
            "--N",
            "20",
            "--replicates",
            "2",
            "--format",
            "json",
            "--jobs",
            jobs,
            "--out",
            out,
        ];
        assert_eq!(cli(&args).status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    assert_eq!(zipf(&ja, "2"), zipf(&jb, "3"));
}

#[test]
fn gen_peel_run_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "g.txt");
    let levels = path(dir.path(), "levels.csv");
    let errors = path(dir.path(), "errors.csv");
    assert_eq!(
        cli(&["gen", "--kind", "regular", "--t", "10", "--out", &graph])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        cli(&["peel", "--input", &graph, "--out", &levels])
            .status
            .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&levels).unwrap();
    // a 2-regular hypergraph has no leaves, so everything stays in the core
    assert!(text.lines().skip(2).all(|l| l.ends_with(",core")));
    assert_eq!(text.lines().count(), 2 + 30);

    let status = cli(&[
        "run",
        "--input",
        &graph,
        "--N",
        "5",
        "--model",
        "balanced",
        "--strategy",
        "cm",
        "--check-invariants",
        "--out",
        &errors,
    ]);
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(&errors).unwrap();
    // regular CM under balanced input: every edge has R_e = min degree − 1 = 1
    assert!(text.lines().skip(2).all(|l| l.ends_with(",1")));
}

#[test]
fn sketch_never_underestimates() {
    let dir = tempfile::tempdir().unwrap();
    let keys = path(dir.path(), "keys.txt");
    let out = path(dir.path(), "est.csv");
    let saved = path(dir.path(), "sketch.bin");
    let body: String = (0..2000u32)
        .map(|i| format!("{}\n", (i * 7919) % 300))
        .collect();
    std::fs::write(&keys, body).unwrap();
    let status = cli(&[
        "sketch", "--input", &keys, "--width", "64", "--depth", "3", "--out", &out, "--save",
        &saved,
    ]);
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    for line in text.lines().skip(2) {
        let v: Vec<u64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[2] >= v[1], "{line}");
    }
    assert!(std::fs::metadata(&saved).unwrap().len() > 64 * 8);
}
