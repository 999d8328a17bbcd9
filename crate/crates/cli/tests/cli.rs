use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use geofreq::io::{read_analysis, read_waveform};

fn geofreq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geofreq"))
        .args(args)
        .output()
        .expect("spawn geofreq")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_header_and_rows() {
    let o = geofreq(&["generate", "E0", "--t1", "0.04", "--dt", "1e-4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,va,vb,vc");
    assert_eq!(lines.len(), 402);
    assert!(lines[1].starts_with("0,0,-10.39"));
}

#[test]
fn generate_dc_is_constant() {
    let o = geofreq(&["generate", "--scenario", "DC", "--vdc", "7.5", "--t1", "0.01"]);
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines().skip(1) {
        assert!(line.ends_with(",7.5,0,0"), "{line}");
    }
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let o = geofreq(&["generate", "E9"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn conflicting_inputs_are_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    fs::write(&csv, "t,va,vb,vc\n0,1,2,3\n1,1,2,3\n").unwrap();
    assert_eq!(code(&geofreq(&["analyze", "--scenario", "E0", "--csv", path_str(&csv)])), 2);
    assert_eq!(code(&geofreq(&["analyze", "--scenario", "E0", "--filter-tau", "1e-3"])), 2);
}

#[test]
fn analytic_e0() {
    let o = geofreq(&["analyze", "--scenario", "E0", "--mode", "analytic", "--t1", "0.02"]);
    assert_eq!(code(&o), 0);
    let rows = read_analysis(&o.stdout[..]).unwrap();
    assert_eq!(rows.len(), 201);
    for r in rows {
        assert!(r.rho.unwrap().abs() <= 1e-9);
        assert!(r.xi.unwrap().abs() <= 1e-9);
        assert!((r.w.unwrap() - 100.0 * PI).abs() <= 1e-9 * 100.0 * PI);
        assert!(r.rotation_defined);
    }
}

#[test]
fn numeric_round_trip_keeps_timestamps() {
    let dir = tempfile::tempdir().unwrap();
    let wave = dir.path().join("e0.csv");
    let out = dir.path().join("a.csv");
    let g = geofreq(&["generate", "E0", "--t1", "0.05", "--out", path_str(&wave)]);
    assert_eq!(code(&g), 0);
    let a = geofreq(&["analyze", "--csv", path_str(&wave), "--out", path_str(&out)]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));

    let series = read_waveform(fs::read(&wave).unwrap().as_slice()).unwrap();
    let rows = read_analysis(fs::read(&out).unwrap().as_slice()).unwrap();
    let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
    assert_eq!(t, series.times()[2..series.len() - 2].to_vec());
    for r in rows {
        assert!((r.w.unwrap() - 100.0 * PI).abs() <= 1e-3 * 100.0 * PI);
    }
}

#[test]
fn bad_header_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "time,a,b,c\n0,1,2,3\n1,1,2,3\n").unwrap();
    let o = geofreq(&["analyze", "--csv", path_str(&csv)]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&geofreq(&["analyze", "--csv", "/nonexistent/x.csv"])), 3);
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze", "--scenario", "E8", "--mode", "analytic", "--t1", "0.05"];
    let (a, b) = (geofreq(&args), geofreq(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("NaN"));
}

#[test]
fn dc_rows_leave_rotation_cells_empty() {
    let o = geofreq(&["analyze", "--scenario", "DC", "--t1", "0.001"]);
    assert_eq!(code(&o), 0);
    for r in read_analysis(&o.stdout[..]).unwrap() {
        assert!(!r.rotation_defined);
        assert_eq!(r.xi, None);
        assert_eq!(r.w, Some(0.0));
    }
}

#[test]
fn validate_passes_and_mutation_fails() {
    let o = geofreq(&["validate"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&geofreq(&["validate", "frenet_core"])), 0);
    assert_eq!(code(&geofreq(&["validate", "nope"])), 2);

    let m = geofreq(&["validate", "frenet_core", "--mutate", "flip-omega-sign"]);
    assert_eq!(code(&m), 1);
    let all = format!("{}{}", stdout(&m), String::from_utf8_lossy(&m.stderr));
    assert!(all.contains("reconstruction"), "{all}");
}

#[test]
fn park_synchronous_frame() {
    let o = geofreq(&[
        "park", "--scenario", "E0", "--wdq", "314.1592653589793", "--theta0", "-1.5707963267948966", "--t1", "0.001",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert!(lines.next().unwrap().starts_with("t,vd,vq,vo,"));
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[1] - 12.0).abs() < 1e-9 && f[2].abs() < 1e-9, "{line}");
        // delta_omega column
        assert!(f[11].abs() < 1e-9, "{line}");
    }
}

#[test]
fn hilbert_report() {
    let o = geofreq(&["hilbert", "--scenario", "SINGLE_PHASE", "--t1", "0.4095", "--taper", "0.25"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("t,u,uh,phi_dot,w,rho,xi\n"));
    assert!(text.lines().any(|l| l.starts_with('#')));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[scenario]\nid = \"DC\"\nparams = { vdc = 2.0 }\n\n[sampling]\nt1 = 0.01\ndt = 1e-3\n").unwrap();
    let o = geofreq(&["generate", "--config", path_str(&cfg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 12);
    assert!(text.lines().nth(1).unwrap().ends_with(",2,0,0"));

    let o = geofreq(&["generate", "--config", path_str(&cfg), "--dt", "5e-3"]);
    assert_eq!(stdout(&o).lines().count(), 4);

    fs::write(&cfg, "[sampling]\nbogus = 1\n").unwrap();
    assert_eq!(code(&geofreq(&["generate", "--config", path_str(&cfg)])), 2);
}
