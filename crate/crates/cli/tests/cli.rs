use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_soficlab"));
    c.env_remove("SOFICLAB_MAX_POINTS").env_remove("SOFICLAB_MAX_TERMS").env_remove("SOFICLAB_MAX_BALL");
    c
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn only_run_dir(base: &Path) -> PathBuf {
    let dirs: Vec<PathBuf> = fs::read_dir(base).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs[0].clone()
}

#[test]
fn run_writes_content_addressed_directory() {
    let out = tempfile::tempdir().unwrap();
    let o = bin().arg("run").arg(config("circulant.json")).arg("--out").arg(out.path()).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = only_run_dir(out.path());
    assert_eq!(dir.file_name().unwrap().len(), 64);
    let csv = fs::read_to_string(dir.join("results.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 20);
    assert_eq!(lines[0], "step,set_size,field,rank_num,rank_den,check,gap_num,gap_den,bound,verdict,ms");
    assert_eq!(lines[1], "1,2,Q,1,2,convergence,1,2,,INFO,");
    assert_eq!(lines[19], "19,20,Q,19,20,convergence,1,20,,INFO,");
    for f in ["summary.txt", "series.dat", "timings.csv", "config.json"] {
        assert!(dir.join(f).is_file(), "{f}");
    }

    let report = bin().arg("report").arg(&dir).output().unwrap();
    assert_eq!(code(&report), 0);
    assert!(String::from_utf8_lossy(&report.stdout).contains("verdict PASS"));
}

#[test]
fn rerun_is_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for name in ["modp.json", "torus.json", "twisted_s3.json", "semicontinuity.json"] {
        for out in [a.path(), b.path()] {
            let o = bin().arg("run").arg(config(name)).arg("--out").arg(out).output().unwrap();
            assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
    for entry in fs::read_dir(a.path()).unwrap() {
        let dir = entry.unwrap().path();
        let twin = b.path().join(dir.file_name().unwrap());
        for f in ["results.csv", "summary.txt", "series.dat", "config.json"] {
            assert_eq!(fs::read(dir.join(f)).unwrap(), fs::read(twin.join(f)).unwrap(), "{f}");
        }
    }
}

#[test]
fn check_reports_positions() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(config("circulant.json")).unwrap().replace("1 - a", "1/0");
    let path = dir.path().join("bad.json");
    fs::write(&path, text).unwrap();
    let o = bin().arg("check").arg(&path).output().unwrap();
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("matrix[0][0]") && err.contains("parse error at 2"), "{err}");

    fs::write(&path, "{\"field\": ").unwrap();
    let o = bin().arg("check").arg(&path).output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let ok = bin().arg("check").arg(config("twisted_s3.json")).output().unwrap();
    assert_eq!(code(&ok), 0);
}

#[test]
fn failing_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(config("twisted_s3.json"))
        .unwrap()
        .replace("\"checks\"", "\"limit\": \"1/2\", \"checks\"");
    let path = dir.path().join("wrong_limit.json");
    fs::write(&path, text).unwrap();
    let o = bin().arg("run").arg(&path).arg("--out").arg(dir.path().join("runs")).output().unwrap();
    assert_eq!(code(&o), 1);
    let run = only_run_dir(&dir.path().join("runs"));
    assert_eq!(code(&bin().arg("report").arg(&run).output().unwrap()), 1);
    assert_eq!(code(&bin().arg("report").arg(dir.path()).output().unwrap()), 2);
}

#[test]
fn seed_and_cap_overrides() {
    let out = tempfile::tempdir().unwrap();
    let a = bin().args(["check"]).arg(config("modp.json")).output().unwrap();
    let b = bin().args(["check", "--seed", "8"]).arg(config("modp.json")).output().unwrap();
    assert_eq!((code(&a), code(&b)), (0, 0));
    assert_ne!(a.stdout, b.stdout);

    let capped = bin()
        .env("SOFICLAB_MAX_POINTS", "10")
        .arg("run")
        .arg(config("circulant.json"))
        .arg("--out")
        .arg(out.path())
        .output()
        .unwrap();
    assert_eq!(code(&capped), 2);
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds cap 10"));
}
