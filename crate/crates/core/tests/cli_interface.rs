//! Command-line contract: CSV shape and determinism, threshold agreement
//! with the sweep sign change, the reference-figure files, the fiducial file
//! path, and the documented exit codes of the installed binary.

use std::path::PathBuf;
use std::process::Command;

use qfi_detect::cli::{
    run_reproduce_fig2, run_sweep, ObsChoice, SweepConfig, FIG2_HEADER, SWEEP_HEADER,
};
use qfi_detect::states::StateFamily;

fn sweep_config(out: PathBuf) -> SweepConfig {
    SweepConfig {
        family: StateFamily::Isotropic { local_dim: 3 },
        obs_a: ObsChoice::Sic,
        obs_b: ObsChoice::Sic,
        fiducial: None,
        grid_start: 0.0,
        grid_stop: 1.0,
        grid_count: 101,
        out,
        seed: 0,
        jobs: 2,
    }
}

fn run_sweep_to_string(config: &SweepConfig) -> String {
    let mut buffer = Vec::new();
    run_sweep(config, &mut buffer).unwrap();
    String::from_utf8(buffer).unwrap()
}

#[test]
fn sweep_csv_shape_and_endpoints() {
    let config = sweep_config(PathBuf::from("unused.csv"));
    let text = run_sweep_to_string(&config);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 102);

    // eta = 0 is the maximally mixed state: both totals vanish.
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first.len(), 7);
    assert!(first[1].parse::<f64>().unwrap().abs() <= 1e-12);
    assert!(first[2].parse::<f64>().unwrap().abs() <= 1e-12);
    assert_eq!(first[5], "false");
    assert_eq!(first[6], "false");
}

#[test]
fn sweep_opt_total_crosses_bound_between_046_and_047() {
    let config = sweep_config(PathBuf::from("unused.csv"));
    let text = run_sweep_to_string(&config);
    let mut crossing = None;
    let mut prev: Option<(f64, f64, f64)> = None;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let eta: f64 = cols[0].parse().unwrap();
        let opt: f64 = cols[2].parse().unwrap();
        let bound: f64 = cols[3].parse().unwrap();
        if let Some((peta, popt, pbound)) = prev {
            if popt <= pbound && opt > bound {
                crossing = Some((peta, eta));
            }
        }
        prev = Some((eta, opt, bound));
    }
    let (lo, hi) = crossing.expect("optimized total must cross the bound");
    assert!(lo >= 0.46 && hi <= 0.47, "crossing at ({lo}, {hi})");
}

#[test]
fn werner_unoptimized_never_exceeds_bound() {
    let config = SweepConfig {
        family: StateFamily::Werner { local_dim: 3 },
        obs_a: ObsChoice::Loo,
        obs_b: ObsChoice::Loo,
        ..sweep_config(PathBuf::from("unused.csv"))
    };
    let text = run_sweep_to_string(&config);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let unopt: f64 = cols[1].parse().unwrap();
        let bound: f64 = cols[3].parse().unwrap();
        assert!(unopt <= bound, "werner unoptimized exceeded the bound");
        assert_eq!(cols[5], "false");
    }
}

#[test]
fn threshold_matches_sweep_sign_change_within_one_step() {
    let config = sweep_config(PathBuf::from("unused.csv"));
    let text = run_sweep_to_string(&config);
    let mut first_violated = None;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[6] == "true" {
            first_violated = Some(cols[0].parse::<f64>().unwrap());
            break;
        }
    }
    let grid_step = 0.01;
    let sweep_edge = first_violated.expect("sweep must show a violation");

    let sic = qfi_detect::observables::sic_povm(3).unwrap();
    let t = qfi_detect::criterion::threshold(
        StateFamily::Isotropic { local_dim: 3 },
        &sic,
        &sic,
        qfi_detect::criterion::Mode::Optimized,
    )
    .unwrap()
    .unwrap();
    assert!((sweep_edge - t).abs() <= grid_step + 1e-9);
}

#[test]
fn reproduce_fig2_emits_deterministic_files() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run_reproduce_fig2(dir.path(), 2).unwrap();
    assert_eq!(summary.len(), 4);

    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();
    let fig2a = read("fig2a_isotropic.csv");
    let fig2b = read("fig2b_werner.csv");
    for text in [&fig2a, &fig2b] {
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], FIG2_HEADER);
        assert_eq!(lines.len(), 202);
    }

    // Re-running produces byte-identical files.
    let dir2 = tempfile::tempdir().unwrap();
    run_reproduce_fig2(dir2.path(), 1).unwrap();
    assert_eq!(fig2a, std::fs::read_to_string(dir2.path().join("fig2a_isotropic.csv")).unwrap());
    assert_eq!(fig2b, std::fs::read_to_string(dir2.path().join("fig2b_werner.csv")).unwrap());
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qfi-detect"))
}

#[test]
fn exit_codes_follow_the_documented_contract() {
    // 0: successful certification.
    let ok = binary().args(["validate", "--kind", "sic", "--dim", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert!(stdout.contains("pass"));

    // 1: usage error (no built-in SIC at d = 5 and no fiducial given).
    let usage = binary().args(["validate", "--kind", "sic", "--dim", "5"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));

    // 1: malformed flags.
    let malformed = binary().args(["sweep", "--family", "nope"]).output().unwrap();
    assert_eq!(malformed.status.code(), Some(1));
}

#[test]
fn threshold_command_prints_five_decimals_or_none() {
    let out = binary()
        .args(["threshold", "--family", "isotropic", "--dim", "3", "--obs", "loo", "--mode", "unopt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let printed = String::from_utf8_lossy(&out.stdout);
    let value: f64 = printed.trim().parse().unwrap();
    assert!((value - 2.0 / 3.0).abs() <= 1e-4);

    let none = binary()
        .args(["threshold", "--family", "werner", "--dim", "3", "--obs", "sic", "--mode", "unopt"])
        .output()
        .unwrap();
    assert_eq!(none.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&none.stdout).trim(), "none");
}

#[test]
fn validate_accepts_fiducial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fiducial.txt");
    std::fs::write(&path, "3\n0 0\n0.7071067811865476 0\n-0.7071067811865476 0\n").unwrap();
    let out = binary()
        .args(["validate", "--kind", "sic", "--dim", "3", "--fiducial"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // A non-fiducial vector fails certification-by-construction: exit 1
    // because the set cannot even be built.
    std::fs::write(&path, "3\n1 0\n0 0\n0 0\n").unwrap();
    let out = binary()
        .args(["validate", "--kind", "sic", "--dim", "3", "--fiducial"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_command_writes_file_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for (out, jobs) in [(&out_a, "1"), (&out_b, "3")] {
        let status = binary()
            .args([
                "sweep", "--family", "isotropic", "--dim", "3", "--obs", "loo", "--grid",
                "0:1:21", "--jobs", jobs, "--out",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read_to_string(&out_a).unwrap();
    let b = std::fs::read_to_string(&out_b).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 22);
}
