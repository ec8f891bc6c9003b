use std::path::PathBuf;
use std::process::{Command, Output};

fn apvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apvar"))
        .args(args)
        .env_remove("APVAR_THREADS")
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("apvar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn identities_all_pass() {
    let out = apvar(&["--experiment", "identities", "--n", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.contains(",PASS,")), "{text}");
}

#[test]
fn variance_scaling_reports_slope() {
    let out = apvar(&[
        "--experiment",
        "variance_scaling",
        "--n",
        "20000",
        "--f",
        "one",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "Q,V,predicted,ratio");
    assert_eq!(lines.len(), 6);
    let slope: f64 = lines[5].strip_prefix("# slope=").unwrap().parse().unwrap();
    assert!((1.7..=2.3).contains(&slope));
}

#[test]
fn small_grid_is_a_usage_error() {
    let out = apvar(&[
        "--experiment",
        "l2_minor",
        "--n",
        "1000",
        "--f",
        "one",
        "--grid-mult",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid_mult"));
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("l2.cfg");
    std::fs::write(
        &cfg,
        "# constant function\nexperiment = l2_minor\nN = 4096\nf = one\nq_list = 500, 1000\nformat = csv\n",
    )
    .unwrap();
    let out = apvar(&["--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["notes"]["M"], "16384");
}

#[test]
fn config_errors_listed_with_lines() {
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "experiment = l2_minor\nN = 8\nf = one\nsize = 3\n").unwrap();
    let out = apvar(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2: N must satisfy N >= 16"), "{err}");
    assert!(err.contains("line 4: unknown key 'size'"), "{err}");
}

#[test]
fn reruns_are_byte_identical() {
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    for path in [&a, &b] {
        let out = apvar(&[
            "--experiment",
            "cs_chain",
            "--n",
            "2048",
            "--f",
            "omega",
            "--q-min",
            "200",
            "--q-max",
            "2048",
            "--q-points",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn thread_override_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_apvar"))
        .args(["--experiment", "identities", "--n", "100"])
        .env("APVAR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_apvar"))
        .args(["--experiment", "identities", "--n", "100"])
        .env("APVAR_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
