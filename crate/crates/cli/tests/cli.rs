use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn coevo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coevo")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = coevo(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn err(args: &[&str]) -> String {
    let out = coevo(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn decompose_reports_precheck_cost() {
    let text = ok(&["decompose", "--problem", "ZDT1", "--dim", "500", "--seeds", "1"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["fes"], 1503);
    assert_eq!(doc["fully_separable"], true);
    assert_eq!(doc["groups"].as_array().unwrap().len(), 500);
    assert_eq!(doc["grouper"], "lmm");

    let text = ok(&["decompose", "--problem", "DTLZ1", "--dim", "20", "--grouper", "dg", "--seeds", "1,2"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let runs = doc.as_array().unwrap();
    assert_eq!(runs.len(), 2);
    for run in runs {
        let mut seen: Vec<u64> = run["groups"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|g| g.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()))
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..20).collect::<Vec<_>>());
    }
}

#[test]
fn decompose_writes_grouping_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g");
    ok(&["decompose", "--problem", "ZDT2", "--dim", "10", "--out", out.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("grouping.json")).unwrap()).unwrap();
    assert_eq!(doc["fes"], 33);
}

fn matrix_into(dir: &Path) -> String {
    ok(&[
        "matrix", "--problem", "ZDT1", "--dim", "20", "--budget", "3000", "--seeds", "1..3", "--methods",
        "none,random,lmm+hybrid", "--out", dir.to_str().unwrap(),
    ])
}

#[test]
fn matrix_is_byte_identical_on_rerun() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let summary = matrix_into(a.path());
    assert!(summary.contains("lmm+hybrid"));
    matrix_into(b.path());
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 5, "{names:?}");
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name:?}");
    }
    let runs = fs::read_to_string(a.path().join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 1 + 9);
    for line in runs.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let used: u64 = cols[6].parse::<u64>().unwrap() + cols[7].parse::<u64>().unwrap();
        assert!(used <= 3000);
    }

    // recomputing indicators from an archive file reproduces the run rows
    let archive = a.path().join("archive_lmm_hybrid.csv");
    let point_line = ok(&[
        "indicators", "--archive", archive.to_str().unwrap(), "--problem", "ZDT1", "--dim", "20",
        "--reference-set-size", "1000",
    ]);
    let mut lines = point_line.lines();
    assert!(lines.next().unwrap().starts_with("# reference_point="));
    assert_eq!(lines.next().unwrap(), "file,seed,hv,igd,hv_stderr");
    let igds: Vec<String> = lines.map(|l| l.split(',').nth(3).unwrap().to_string()).collect();
    let expected: Vec<String> = runs
        .lines()
        .skip(1)
        .filter(|l| l.contains(",lmm,true,"))
        .map(|l| l.split(',').nth(9).unwrap().to_string())
        .collect();
    assert_eq!(igds, expected);
}

#[test]
fn optimize_with_config_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "problem = \"DTLZ2\"\ndim = 12\nobjectives = 3\nbudget = 2000\nseeds = [4]\ngrouper = \"random\"\n\n[random]\ngroups = 3\n",
    )
    .unwrap();
    let out = dir.path().join("o");
    ok(&[
        "optimize", "--config", cfg.to_str().unwrap(), "--hybrid", "on", "--estimator", "least-squares",
        "--dump-solutions", "--out", out.to_str().unwrap(),
    ]);
    let runs = fs::read_to_string(out.join("runs.csv")).unwrap();
    let row: Vec<&str> = runs.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..6], &["DTLZ2", "12", "3", "random", "true", "4"]);
    let sols: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("solutions_random_hybrid.json")).unwrap()).unwrap();
    let first = &sols.as_array().unwrap()[0];
    assert_eq!(first["x"].as_array().unwrap().len(), 12);
    assert_eq!(first["objectives"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_input_is_rejected() {
    assert!(err(&["decompose", "--problem", "ZDT1", "--dim", "-3"]).contains("--dim"));
    let msg = err(&["decompose", "--problem", "ZDT1", "--dim", "10", "--grouper", "dg2"]);
    assert!(msg.contains("lmm") && msg.contains("random"), "{msg}");
    assert!(err(&["decompose", "--problem", "ZDT5", "--dim", "10"]).contains("ZDT5"));
    assert!(err(&["optimize", "--problem", "ZDT1", "--dim", "10", "--budget", "0"]).contains("budget"));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "problem = \"ZDT1\"\ndim = 10\nbudget = 100\nseeds = [1]\n[lmm]\ngene_lenght = 3\n").unwrap();
    assert!(err(&["decompose", "--config", cfg.to_str().unwrap()]).contains("lmm"));
}
