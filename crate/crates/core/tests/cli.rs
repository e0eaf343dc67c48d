//! End-to-end runs of the `teamq` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SYM_CAC: &str = r#"{"class":"cac","prior":{"type":"iid-lambda","lambda":0.8},"chi":2}"#;
const STRATEGY: &str = r#"{"alpha":1.5707963267948966,"theta":[0,3.141592653589793,0,0],
    "phi":[0,1.5707963267948966,0.7853981633974483,0.7853981633974483],"assignment":[0,1,0,1,0,1,0,1]}"#;

fn teamq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teamq")).args(args).output().expect("spawn teamq")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn thresholds_for_lambda() {
    let out = teamq(&["thresholds", "--lambda", "0.8"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("chi_th       0.157671"), "{text}");
    assert!(text.contains("chi_up_th    6.342329"), "{text}");
}

#[test]
fn evaluate_and_optimise() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", SYM_CAC);
    let strat = write(&dir, "strat.json", STRATEGY);

    let out = teamq(&["evaluate", &inst, &strat]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("cost       -1.06819805"));

    let out = teamq(&["classical", &inst, "--all"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("cost   -1.200000000000"));

    let out = teamq(&["nosignalling", &inst]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("interval  (0.062500, 16.000000)"));

    let out = teamq(&["quantum", &inst, "--json"]);
    assert_eq!(code(&out), 0);
    let optimum = write(&dir, "opt.json", &stdout(&out));
    let out = teamq(&["evaluate", &inst, &optimum]);
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_and_validation_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{");
    let bad_chi = write(&dir, "chi.json", r#"{"class":"cac","prior":{"type":"iid-lambda","lambda":0.8},"chi":-1}"#);
    let mismatch = write(
        &dir,
        "mismatch.json",
        r#"{"class":"cac","M":[[1,0],[0,0]],"N":[[0,1],[1,0]],"prior":{"type":"iid-lambda","lambda":0.8},"chi":1}"#,
    );
    for path in [&broken, &bad_chi, &mismatch] {
        assert_eq!(code(&teamq(&["classical", path])), 2, "{path}");
    }
    assert_eq!(code(&teamq(&["thresholds"])), 2);
    assert_eq!(code(&teamq(&["thresholds", "--lambda", "0.3"])), 2);
    assert_eq!(code(&teamq(&["no-such-command"])), 2);
    assert_eq!(
        code(&teamq(&["sweep", "--lambda", "0.8", "--chi-from", "2", "--chi-to", "1", "--steps", "4"])),
        2
    );
}

#[test]
fn non_symmetric_instances_exit_3() {
    let dir = TempDir::new().unwrap();
    let table = write(
        &dir,
        "table.json",
        r#"{"class":"cac","prior":{"type":"table","values":[0.2,0.1,0.05,0.15,0.1,0.1,0.2,0.1]},"chi":2}"#,
    );
    let out = teamq(&["thresholds", &table]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-signalling bounds"));
    assert_eq!(code(&teamq(&["quantum", &table])), 3);

    let general = write(
        &dir,
        "general.json",
        r#"{"class":"general","M":[[1,1],[0,0]],"N":[[0,0],[1,1]],"prior":{"type":"iid-lambda","lambda":0.8},"chi":2}"#,
    );
    assert_eq!(code(&teamq(&["thresholds", &general])), 3);
}

#[test]
fn io_failures_exit_4() {
    assert_eq!(code(&teamq(&["classical", "/nonexistent/instance.json"])), 4);
    let out = teamq(&[
        "sweep", "--lambda", "0.8", "--chi-from", "0.5", "--chi-to", "2", "--steps", "2", "--out", "/nonexistent/x.csv",
    ]);
    assert_eq!(code(&out), 4);
}

fn sweep_to(path: &Path) -> Vec<u8> {
    let out = teamq(&[
        "sweep",
        "--lambda",
        "0.8",
        "--chi-from",
        "0.05",
        "--chi-to",
        "20",
        "--steps",
        "64",
        "--scale",
        "log",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    fs::read(path).unwrap()
}

#[test]
fn sweeps_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = sweep_to(&dir.path().join("a.csv"));
    let b = sweep_to(&dir.path().join("b.csv"));
    assert_eq!(a, b);

    let text = String::from_utf8(a).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(lines[0], "chi,j_classical,j_ns,j_quantum,gap_quantum,gap_ns,quantum_advantage,ns_advantage");
    assert!(lines[1].starts_with("5.0000000000000003e-2,"));
    assert!(lines[64].starts_with("2.0000000000000000e1,"));
    // advantage flags switch exactly at the thresholds, except at chi = 1 which is off-grid here
    for line in &lines[1..] {
        let fields: Vec<_> = line.split(',').collect();
        let chi: f64 = fields[0].parse().unwrap();
        let inside = 0.1576708 < chi && chi < 6.3423292;
        assert_eq!(fields[6] == "true", inside, "{line}");
    }
}

#[test]
fn verify_fast_passes() {
    let out = teamq(&["verify"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("ok")).count(), 10);
}

#[test]
fn injected_fault_is_caught() {
    let out = teamq(&["verify", "--inject-fault", "table-constant"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL table_trace_agreement"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("table_trace_agreement"));
}
