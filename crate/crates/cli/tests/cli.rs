use std::process::{Command, Output};

use fzddn_core::MatrixDump;

fn fzddn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fzddn")).args(args).output().expect("spawn fzddn")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn verify_ybe_passes() {
    let out = fzddn(&["verify", "--suite", "ybe", "--n", "3", "--samples", "25", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["suite"], "ybe");
    assert_eq!(r["pass"], true);
    assert!(!r["checks"].as_array().unwrap().is_empty());
    for c in r["checks"].as_array().unwrap() {
        for key in ["name", "residual", "tol", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn verify_braid_passes() {
    let out = fzddn(&["verify", "--suite", "braid", "--n", "5", "--sites", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn even_n_is_usage_error() {
    let out = fzddn(&["verify", "--suite", "ybe", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_and_bad_flags_are_usage_errors() {
    assert_eq!(fzddn(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(fzddn(&["spectrum", "--boundary", "sideways"]).status.code(), Some(2));
    assert_eq!(fzddn(&["spectrum", "--boundary", "twisted", "--twist", "q^2"]).status.code(), Some(2));
}

#[test]
fn cap_is_resource_error() {
    let out = fzddn(&["spectrum", "--n", "5", "--sites", "6"]);
    assert_eq!(out.status.code(), Some(3));
    let out = fzddn(&["spectrum", "--n", "3", "--sites", "3", "--cap", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical_per_seed() {
    let args = ["verify", "--suite", "transfer", "--n", "3", "--sites", "2", "--samples", "4"];
    let a = fzddn(&args);
    let b = fzddn(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "0"]);
    assert_eq!(fzddn(&seeded).stdout, a.stdout);
}

fn energies(csv: &[u8]) -> Vec<f64> {
    let mut r = csv::Reader::from_reader(csv);
    r.records().map(|rec| rec.unwrap()[1].parse().unwrap()).collect()
}

#[test]
fn periodic_spectrum_n3_l2() {
    let out = fzddn(&["spectrum", "--n", "3", "--sites", "2", "--boundary", "periodic"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let e = energies(&out.stdout);
    assert_eq!(e.len(), 9);
    assert!(e.iter().sum::<f64>().abs() < 1e-9);
    assert!(e.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn conjugate_twists_share_a_spectrum() {
    let run = |twist: &str| {
        let out = fzddn(&["spectrum", "--n", "3", "--sites", "3", "--boundary", "twisted", "--twist", twist]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        energies(&out.stdout)
    };
    let a = run("s^0 t^1");
    let b = run("s^2 t^1");
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
}

#[test]
fn open_spectrum_reports_degeneracies() {
    let out = fzddn(&["spectrum", "--n", "3", "--sites", "2", "--boundary", "open"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(energies(&out.stdout).len(), 9);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("multiplets"), "{err}");
}

#[test]
fn spectrum_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = fzddn(&["spectrum", "--n", "3", "--sites", "2", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(r["suite"], "spectrum");
}

#[test]
fn build_dump_round_trips_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let out = fzddn(&[
        "build", "--op", "transfer", "--n", "3", "--sites", "2", "--z1", "0.6,0.8", "--z2", "-0.28,0.96", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let dump = MatrixDump::from_json(&text).unwrap();
    assert_eq!(dump.meta.op, "transfer");
    let m = dump.to_matrix().unwrap();
    assert_eq!((m.nrows(), m.ncols()), (9, 9));
    let again = MatrixDump::from_matrix(&m, dump.meta.clone());
    assert_eq!(again, dump);
    assert_eq!(again.to_json().trim_end(), text.trim_end());
}

#[test]
fn build_projector_and_bad_pair() {
    let ok = fzddn(&["build", "--op", "projector", "--n", "3", "--pair", "1,2"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = fzddn(&["build", "--op", "projector", "--n", "3", "--pair", "2,0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn fusion_runs() {
    let out = fzddn(&["fusion", "--n", "3", "--sites", "2", "--boundary", "periodic", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["pass"], true);
    let tw = fzddn(&["fusion", "--n", "3", "--sites", "2", "--boundary", "twisted", "--twist", "s^1 t^0"]);
    assert_eq!(tw.status.code(), Some(2));
}

#[test]
fn bethe_runs_for_every_class() {
    let cases: &[&[&str]] = &[
        &["--boundary", "periodic"],
        &["--boundary", "open"],
        &["--boundary", "braided", "--z0", "0,0"],
        &["--boundary", "braided", "--z0", "inf,inf"],
    ];
    for extra in cases {
        let mut args = vec!["bethe", "--n", "3", "--sites", "2"];
        args.extend_from_slice(extra);
        let out = fzddn(&args);
        assert_eq!(out.status.code(), Some(0), "{extra:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(report(&out)["pass"], true);
    }
}
