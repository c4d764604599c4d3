use std::path::{Path, PathBuf};
use std::process::Command as Process;

use donor_cpt::io::{execute, parse_config, run, Command, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn header_hash(text: &str) -> Option<&str> {
    text.lines().find_map(|l| {
        l.strip_prefix("# config_sha256=")
            .or_else(|| l.trim().strip_prefix("\"config_sha256\": \"").map(|r| r.trim_end_matches(['"', ','])))
            .or_else(|| l.strip_prefix("# config_sha256 = \"").map(|r| r.trim_end_matches('"')))
    })
}

#[test]
fn echoed_config_parses_to_the_same_run() {
    let tmp = tempfile::tempdir().unwrap();
    for name in ["cpt_sweep", "power_series", "energetics", "extrapolate", "levels"] {
        let cfg = parse_config(&configs().join(format!("{name}.toml")), None).unwrap();
        let echo = write(tmp.path(), &format!("{name}.toml"), &cfg.to_toml());
        let again = parse_config(&echo, None).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.to_toml(), cfg.to_toml());
    }
}

#[test]
fn every_output_carries_the_config_hash() {
    let tmp = tempfile::tempdir().unwrap();
    for name in ["energetics", "extrapolate", "levels"] {
        let path = configs().join(format!("{name}.toml"));
        let out = run(&parse_config(&path, None).unwrap(), &path, tmp.path(), Some(2)).unwrap();
        for f in &out.files {
            let text = std::fs::read_to_string(f).unwrap();
            assert_eq!(header_hash(&text), Some(out.config_sha256.as_str()), "{}", f.display());
            assert!(text.ends_with('\n'));
        }
    }
}

#[test]
fn energetics_breakpoints_list_the_lithium_level() {
    let tmp = tempfile::tempdir().unwrap();
    let path = configs().join("energetics.toml");
    let out = run(&parse_config(&path, None).unwrap(), &path, tmp.path(), None).unwrap();
    let text = std::fs::read_to_string(tmp.path().join("breakpoints.csv")).unwrap();
    let mut rows = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let li: Vec<f64> = rows
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[1] == "Li_Zn")
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(li, [0.69, 0.69]);
    assert_eq!(out.files.len(), 4);
}

#[test]
fn extrapolation_json_reports_the_dilute_limit() {
    let tmp = tempfile::tempdir().unwrap();
    let path = configs().join("extrapolate.toml");
    run(&parse_config(&path, None).unwrap(), &path, tmp.path(), None).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("extrapolation.json")).unwrap()).unwrap();
    assert!((v["intercept_mhz"].as_f64().unwrap() - 466.7).abs() < 1e-3);
    assert!((v["slope"].as_f64().unwrap() - 258.26).abs() < 1e-6);
    assert_eq!(v["anchor"]["atoms"], 1024);
}

#[test]
fn negative_rate_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "command = \"cpt-sweep\"\n[cpt_sweep.probe_grid]\nstart_hz = -1e8\nstop_hz = 1e8\nstep_hz = 1e6\n\
                [cpt_sweep.dissipators]\nw_flipflop_up_hz = -3.0\n";
    let path = write(tmp.path(), "bad.toml", text);
    let err = parse_config(&path, None).unwrap_err();
    assert_eq!(err.field_path.as_deref(), Some("cpt_sweep.dissipators.w_flipflop_up_hz"));
    assert_eq!(err.line, Some(7));
    assert!(err.to_string().contains("w_flipflop_up_hz"));
    let out = tmp.path().join("out");
    assert_eq!(execute(None, &path, &out, None), EXIT_VALIDATION);
    assert!(!out.exists());
}

#[test]
fn numerical_failure_exits_two_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    // no ground relaxation at all: two disconnected nuclear sectors
    let text = "command = \"cpt-sweep\"\n[cpt_sweep.probe_grid]\nstart_hz = -1e8\nstop_hz = 1e8\nstep_hz = 1e7\n\
                [cpt_sweep.dissipators]\ngamma_e_relax_hz = 0.0\nw_flipflop_up_hz = 0.0\nw_flipflop_down_hz = 0.0\n";
    let path = write(tmp.path(), "degenerate.toml", text);
    let out = tmp.path().join("out");
    assert_eq!(execute(None, &path, &out, Some(1)), EXIT_NUMERICAL);
    assert!(!out.join("spectrum.csv").exists());
}

#[test]
fn levels_runs_without_a_table() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write(tmp.path(), "empty.toml", "");
    assert_eq!(execute(Some(Command::Levels), &path, &tmp.path().join("o"), None), EXIT_OK);
    assert!(tmp.path().join("o/levels.json").exists());
    assert_eq!(execute(None, &path, &tmp.path().join("p"), None), EXIT_VALIDATION);
}

#[test]
fn binary_dispatches_subcommands() {
    let tmp = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_donor-cpt");
    let status = Process::new(bin)
        .args(["extrapolate", "--config"])
        .arg(configs().join("extrapolate.toml"))
        .arg("--out")
        .arg(tmp.path())
        .args(["--threads", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    assert!(tmp.path().join("extrapolation.json").exists());

    let wrong = Process::new(bin)
        .args(["levels", "--config"])
        .arg(configs().join("extrapolate.toml"))
        .arg("--out")
        .arg(tmp.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(wrong.status.code(), Some(EXIT_VALIDATION));
    assert!(String::from_utf8_lossy(&wrong.stderr).contains("extrapolate"));
}

#[test]
fn failed_write_removes_partial_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    std::fs::create_dir_all(out.join("levels.json")).unwrap();
    let path = write(tmp.path(), "empty.toml", "");
    assert_eq!(execute(Some(Command::Levels), &path, &out, None), EXIT_VALIDATION);
    assert!(!out.join("resolved_config.toml").exists());
}
