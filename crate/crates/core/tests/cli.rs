use std::path::Path;
use std::process::{Command, Output};

fn silofill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_silofill")).args(args).output().unwrap()
}

fn write_config(dir: &Path) -> String {
    let p = dir.join("patch.toml");
    std::fs::write(
        &p,
        r#"name = "patch"

[domain]
shape = "interval"
length = 1.0

[grid]
h = [0.1]

[[source.patches]]
intensity = 1.0
region = { shape = "interval", a = 0.4, b = 0.6 }

[output]
profiles = true
errors = true
"#,
    )
    .unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn lists_examples() {
    let out = silofill(&["examples"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["point-source-1d", "centred-patch-1d", "central-ball-2d", "two-balls-2d", "growing-ball-2d"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn dumped_example_is_a_valid_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = silofill(&["examples", "centred-patch-1d", "--dump", "--h-list", "0.05,0.025"]);
    assert!(out.status.success());
    let cfg = dir.path().join("dump.toml");
    std::fs::write(&cfg, &out.stdout).unwrap();
    let parsed = silofill::harness::ExperimentConfig::load(&cfg).unwrap();
    assert_eq!(parsed.grid.h, vec![0.05, 0.025]);
}

#[test]
fn compare_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out_dir = dir.path().join("out");
    let out = silofill(&[
        "compare",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
        "--h-list",
        "0.05,1/40",
        "--quiet",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let table = std::fs::read_to_string(out_dir.join("table.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    assert!(table.starts_with("h,err_u_fe,err_u_fd,err_v_fe,err_v_fd,order_u_fe"));
    for f in ["u_exact.csv", "v_fe.csv", "u_fd.csv", "err_v_fd.csv"] {
        assert!(out_dir.join("row01").join(f).is_file(), "{f}");
    }
}

#[test]
fn similarity_and_evolve_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    for verb in ["similarity", "evolve"] {
        let out_dir = dir.path().join(verb);
        let out = silofill(&[verb, "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success(), "{verb}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("row00") && text.contains(" ok"), "{text}");
    }
    assert!(dir.path().join("similarity/row00/u_fe.csv").is_file());
    assert!(!dir.path().join("similarity/row00/u_fd.csv").exists());
    assert!(dir.path().join("evolve/row00/u_fd.csv").is_file());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out_dir = dir.path().join("o");
    let short = silofill(&["evolve", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--max-steps", "5"]);
    assert_eq!(short.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&short.stdout).contains("FAILED"));

    let bad = silofill(&["compare", "--config", &cfg, "--h-list", "0.05,0.1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("strictly decreasing"));

    let missing = silofill(&["compare", "--config", "/nonexistent.toml"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent.toml"));

    let unknown = silofill(&["examples", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn evolve_writes_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("movie");
    let out = silofill(&[
        "examples",
        "growing-ball-2d",
        "--out",
        out_dir.to_str().unwrap(),
        "--h-list",
        "0.125",
        "--quiet",
    ]);
    assert!(out.status.success());
    let snaps = std::fs::read_dir(out_dir.join("row00/snapshots")).unwrap().count();
    assert!(snaps > 2, "{snaps}");
    let first = std::fs::read_to_string(out_dir.join("row00/snapshots/u_000000.csv")).unwrap();
    assert_eq!(first.lines().count(), 82);
    assert!(first.starts_with("x,y,value\n"));
}
