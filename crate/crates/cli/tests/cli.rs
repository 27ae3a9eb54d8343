use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use wiener_chaos::cumulants::CumulantReport;

fn wchaos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wchaos")).args(args).env_remove("WCHAOS_SEED").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = wchaos(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    wchaos(args).status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn diagram_counts() {
    assert_eq!(ok_json(&["diagrams", "count", "--q", "2", "--m", "3"])["count"], 8);
    assert_eq!(ok_json(&["diagrams", "count", "--q", "3", "--m", "3"])["count"], 0);
    let r = ok_json(&["diagrams", "count", "--q", "2", "--m", "4"]);
    assert_eq!(r["count"], 48);
    assert!(r["lower"].as_f64().unwrap() <= 48.0 && r["upper"].as_f64().unwrap() >= 48.0);
    assert_eq!(code(&["diagrams", "count", "--q", "1", "--m", "3"]), 2);
}

#[test]
fn diagram_listing_and_cap() {
    let out = wchaos(&["diagrams", "enum", "--q", "2", "--m", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().any(|l| l == "(1,4)(2,5)(3,6)"));
    assert_eq!(code(&["diagrams", "enum", "--q", "4", "--m", "6"]), 3);
    assert_eq!(code(&["diagrams", "enum", "--q", "2", "--m", "4", "--cap", "6"]), 3);
}

#[test]
fn matching_summary() {
    let r = ok_json(&["matching", "--q", "3", "--m", "4"]);
    assert_eq!(r["holds"], true);
    assert!(r["min_matching"].as_u64().unwrap() >= r["lower_bound"].as_u64().unwrap());
}

#[test]
fn cumulant_reports() {
    let dir = tempfile::tempdir().unwrap();
    let atom = write(dir.path(), "atom.txt", "order 2 dim 1\n1 1 1\n");
    let out = wchaos(&["cumulant", "exact", "--kernel", &atom, "--m", "4"]);
    assert!(out.status.success());
    let report: CumulantReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.records[1].exact, Some(2.0));
    assert_eq!(report.records[3].exact, Some(48.0));

    let bad = write(dir.path(), "bad.txt", "order 2 dim 2\n1 3 1\n");
    assert_eq!(code(&["cumulant", "exact", "--kernel", &bad]), 4);
    assert_eq!(code(&["cumulant", "exact"]), 2);
    assert_eq!(code(&["cumulant", "exact", "--q", "3", "--N", "4", "--m", "6", "--cap", "10"]), 3);

    let mc = ok_json(&["cumulant", "mc", "--q", "2", "--N", "3", "--m", "4", "--samples", "20000", "--bootstrap", "20"]);
    let rec = &mc["records"][1];
    let (exact, emp, se) = (rec["exact"].as_f64().unwrap(), rec["empirical"].as_f64().unwrap(), rec["se"].as_f64().unwrap());
    assert!((exact - emp).abs() <= 4.0 * se, "{exact} {emp} {se}");
}

#[test]
fn bound_values() {
    assert_eq!(ok_json(&["bounds", "tail", "--z", "0"])["tail_bound"], 2.0);
    let d = ok_json(&["bounds", "delta", "--q", "2", "--K", "0.5"])["delta"].as_f64().unwrap();
    assert!((d - 1.0 / (8.0 * 0.5f64.sqrt())).abs() < 1e-15);
    assert_eq!(code(&["bounds", "delta", "--q", "2"]), 2);
    assert_eq!(code(&["bounds", "tail"]), 2);
    let rows = ok_json(&["bounds", "major", "--z", "10", "20", "--delta", "100"]);
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[0]["c_flagged"], true);
    assert_eq!(rows[1]["tail_better"], true);
    assert!(ok_json(&["bounds", "ratio", "--p", "0.01", "--z", "3", "--K", "0.1"])["log_ratio"].as_f64().unwrap() >= 0.0);
    assert_eq!(code(&["bounds", "ratio", "--p", "0.01", "--z", "3"]), 2);
}

#[test]
fn application_tables() {
    let s = ok_json(&["app", "sheet", "--d", "1", "--n", "100"]);
    assert!((s["mean"].as_f64().unwrap() - 100f64.ln()).abs() < 1e-12);
    assert!(s["variance"].as_f64().unwrap() > 0.0 && s["delta"].as_f64().unwrap() > 0.0);
    assert_eq!(code(&["app", "fbm", "--H", "0.8"]), 2);
    let f = ok_json(&["app", "fbm", "--H", "0.7", "--n", "64"]);
    assert_eq!(f["constants_flagged"], "c_H");
    assert_eq!(ok_json(&["app", "bispectrum", "--l", "2", "2", "4"])["variance_factor"], 2);
    assert_eq!(code(&["app", "bispectrum", "--l", "2", "3", "4"]), 2);

    let out = wchaos(&["app", "fbm", "--H", "0.3", "--n", "16", "--path", "--format", "csv", "--seed", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,increment\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn monte_carlo_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let args = ["mc", "tail", "--samples", "5000", "--seed", "9", "--workers", workers, "--format", "csv", "--out", p];
        assert_eq!(code(&args), 0);
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "1"));
    assert_eq!(a, run("c.csv", "3"));
    assert_eq!(code(&["mc", "tail", "--samples", "0"]), 2);
    assert_eq!(code(&["mc", "mdp", "--samples", "0"]), 2);
}

#[test]
fn censored_cells_are_marked() {
    let out = wchaos(&["mc", "tail", "--model", "gaussian", "--z", "1", "40", "--samples", "1000", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].contains(",ok,"));
    assert!(rows[1].contains(",censored,"));
    let mdp = ok_json(&["mc", "mdp", "--model", "gaussian", "--a", "2", "40", "--z", "1", "--samples", "1000"]);
    assert_eq!(mdp[1]["status"], "censored");
    assert!(mdp[1]["scaled"].is_null());
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_wchaos"))
        .args(["mc", "tail", "--samples", "200", "--z", "1"])
        .env("WCHAOS_SEED", "77")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["rng_seed"], 77);
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# example\ncommand = bounds tail\nz = 0 1\nq = 3\n");
    let rows = ok_json(&["--config", &cfg]);
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[0]["q"], 3);
    // the command line wins
    let r = ok_json(&["--config", &cfg, "bounds", "tail", "--z", "0"]);
    assert_eq!(r["z"], 0.0);
    assert_eq!(r["q"], 3);

    let unknown = write(dir.path(), "unknown.cfg", "depth = 2\n");
    assert_eq!(code(&["--config", &unknown, "bounds", "tail", "--z", "1"]), 2);
    let malformed = write(dir.path(), "bad.cfg", "z 1\n");
    assert_eq!(code(&["--config", &malformed, "bounds", "tail"]), 4);
}

#[test]
fn help_lists_flags() {
    for (cmd, flags) in [
        (&["bounds", "tail"][..], &["--z", "--q", "--delta", "--K", "--L", "--format", "--out"][..]),
        (&["mc", "tail"][..], &["--seed", "--samples", "--workers", "--z", "--n", "--H", "--kernel"][..]),
        (&["cumulant", "exact"][..], &["--kernel", "--q", "--N", "--m", "--cap"][..]),
        (&["app", "sheet"][..], &["--d", "--n"][..]),
        (&["diagrams", "enum"][..], &["--q", "--m", "--cap"][..]),
    ] {
        let mut args = cmd.to_vec();
        args.push("--help");
        let out = wchaos(&args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        for f in flags {
            assert!(text.contains(f), "{cmd:?} help lacks {f}");
        }
    }
}
