use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn giro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_giro"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

const MAB: &str = "\
mode = mab
n = 300
runs = 4
seed = 9
arms = 4

policy.kind = giro
policy.name = giro
policy.a = 1

policy.kind = ucb1
policy.name = ucb1
";

#[test]
fn simulate_writes_round_major_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mab.cfg", MAB);
    let out = dir.path().join("out.csv");
    let res = giro(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "round,policy,mean,stderr");
    assert_eq!(lines.len(), 1 + 300 * 2);
    assert!(lines[1].starts_with("1,giro,"));
    assert!(lines[2].starts_with("1,ucb1,"));
    assert!(lines[600].starts_with("300,ucb1,"));
    assert!(!text.contains('\r'));
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mab.cfg", MAB);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(
        giro(&["simulate", "--config", &cfg, "--out", a.to_str().unwrap()])
            .status
            .success()
    );
    assert!(giro(&[
        "--sequential",
        "simulate",
        "--config",
        &cfg,
        "--out",
        b.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = dir.path().join("c.csv");
    let res = giro(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        c.to_str().unwrap(),
        "--independent-draws",
    ]);
    assert!(res.status.success());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn lemma1_reports_lock_frequency() {
    let res = giro(&[
        "lemma1", "--mu1", "0.6", "--mu2", "0.2", "--n", "200", "--runs", "300", "--seed", "2",
    ]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.contains("lock_violations=0"));
    assert!(text.contains("expected_lock_frequency=0.2"));
}

#[test]
fn verify_bounds_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bounds.csv");
    let res = giro(&[
        "verify-bounds",
        "--grid",
        "small",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("check,n,p,a,lhs,rhs,slack,pass\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn contextual_on_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let mut data = String::from("f1,f2,label\n");
    for i in 0..40 {
        data.push_str(&format!("{},{},{}\n", i % 4, (i * 7) % 5, i % 2));
    }
    let data = write(dir.path(), "toy.csv", &data);
    let cfg = write(
        dir.path(),
        "ctx.cfg",
        "mode = contextual\nn = 60\nruns = 2\n\npolicy.kind = cgiro\npolicy.name = cgiro\npolicy.model = linear\n\npolicy.kind = random\npolicy.name = random\n",
    );
    let out = dir.path().join("ctx.csv");
    let res = giro(&[
        "contextual",
        "--config",
        &cfg,
        "--data",
        &data,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 60 * 2);
}

#[test]
fn usage_and_data_errors_exit_one() {
    assert_eq!(giro(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(giro(&["lemma1", "--mu1", "0.6"]).status.code(), Some(1));
    assert_eq!(
        giro(&["simulate", "--config", "/no/such/file"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        giro(&["lemma1", "--mu1", "0.2", "--mu2", "0.6", "--n", "5", "--runs", "5", "--seed", "0"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "f1,label\n1,0\nx,1\n");
    let cfg = write(
        dir.path(),
        "ctx.cfg",
        "mode = contextual\npolicy.kind = random\n",
    );
    let res = giro(&["contextual", "--config", &cfg, "--data", &bad]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 3"));
    let broken = write(dir.path(), "broken.cfg", "n = 10\nmystery = 1\n");
    let res = giro(&["simulate", "--config", &broken]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(giro(&["--help"]).status.code(), Some(0));
}
