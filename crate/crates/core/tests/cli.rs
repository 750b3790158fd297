use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn divspec(args: &[&str], cfg: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divspec"))
        .args(args)
        .arg("--config")
        .arg(cfg)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn spectrum_writes_metadata_and_logs_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "uca.cfg",
        r#"{"aperture": {"kind": "circle", "radius": 1}, "pas": {"kind": "isotropic"}}"#,
    );
    let out = divspec(&["spectrum"], &cfg);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    for key in ["N", "N_D", "r1", "rho_max", "eig_error_bound", "omega", "hs_error_bound"] {
        assert!(csv.lines().any(|l| l.starts_with(&format!("# {key}="))), "missing {key}");
    }
    assert!(csv.contains("\nindex,eigenvalue,cumulative\n"));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("eigenvalue bound") && stderr.contains("Hilbert-Schmidt bound"), "{stderr}");
    let rows = data_rows(&csv);
    let last: f64 = rows.last().unwrap()[2].parse().unwrap();
    assert!((last - 1.0).abs() < 1e-10);
}

#[test]
fn missing_field_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "bad.cfg", r#"{"aperture": {"kind": "disk"}, "pas": {"kind": "isotropic"}}"#);
    let out = divspec(&["spectrum"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("radius"));
    let out = divspec(&["spectrum"], &dir.path().join("absent.cfg"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_error_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "low.cfg",
        r#"{"aperture": {"kind": "circle", "radius": 1}, "pas": {"kind": "isotropic"}, "n_override": 4}"#,
    );
    let out = divspec(&["spectrum"], &cfg);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("N_D"));
}

#[test]
fn dump_matrices_and_oracle_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "seg.cfg",
        r#"{"aperture": {"kind": "segment", "length": 0.5}, "pas": {"kind": "von_mises", "kappa": 3, "alpha0_deg": 40}}"#,
    );
    let out_csv = dir.path().join("seg.csv");
    let out = divspec(&["spectrum", "--dump-matrices", "--oracle", "--out", out_csv.to_str().unwrap()], &cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&out_csv).unwrap();
    assert!(csv.contains("index,eigenvalue,cumulative,nystrom\n"));
    for row in data_rows(&csv).iter().take(5) {
        let (a, b): (f64, f64) = (row[1].parse().unwrap(), row[3].parse().unwrap());
        assert!((a - b).abs() < 1e-8, "{row:?}");
    }
    let gram = fs::read_to_string(dir.path().join("seg.gram.csv")).unwrap();
    let rtilde = fs::read_to_string(dir.path().join("seg.rtilde.csv")).unwrap();
    // N = N_D + 10 = 13 for r1 = 0.25: (2N+1)² entries plus a header
    assert_eq!(gram.lines().count(), 27 * 27 + 1);
    assert_eq!(rtilde.lines().count(), 27 * 27 + 1);
    assert!(rtilde.starts_with("row,col,re,im\n0,0,1.0000000000000000e0,0.0000000000000000e0\n"));
}

#[test]
fn tabulated_pas_and_csv_positions() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("pas.csv"), "alpha_deg,density\n-180,0\n-20,1\n20,0\n").unwrap();
    fs::write(dir.path().join("pos.csv"), "x,y\n0,0\n0.5,0\n1.0,0\n").unwrap();
    let cfg = write_cfg(
        dir.path(),
        "arr.cfg",
        r#"{"aperture": {"kind": "discrete_array", "positions_csv": "pos.csv"},
            "pas": {"kind": "tabulated", "table": "pas.csv"}}"#,
    );
    let out = divspec(&["spectrum"], &cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# L=3\n"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 3);
    let total: f64 = rows[2][2].parse().unwrap();
    assert!((total - 1.0).abs() < 1e-14);
}

#[test]
fn antennas_sweep_saturates_near_continuous_value() {
    let dir = tempfile::tempdir().unwrap();
    let base = r#""aperture": {"kind": "circle", "radius": 1}, "pas": {"kind": "isotropic"}"#;
    let cont = write_cfg(dir.path(), "c.cfg", &format!("{{{base}}}"));
    let sweep = write_cfg(
        dir.path(),
        "s.cfg",
        &format!(r#"{{{base}, "sweep": {{"kind": "antennas", "start": 2, "stop": 32, "steps": 31}}}}"#),
    );
    let csv = String::from_utf8(divspec(&["spectrum"], &cont).stdout).unwrap();
    let omega: f64 = csv.lines().find_map(|l| l.strip_prefix("# omega=")).unwrap().parse().unwrap();
    let rows = data_rows(&String::from_utf8(divspec(&["sweep"], &sweep).stdout).unwrap());
    assert_eq!(rows.len(), 31);
    assert_eq!(rows[0][0], "2");
    let w32: f64 = rows[30][1].parse().unwrap();
    assert!((w32 - omega).abs() / omega < 0.05);
    let w2: f64 = rows[0][1].parse().unwrap();
    assert!((1.0..=2.0 + 1e-12).contains(&w2));
}

#[test]
fn doppler_command_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "d.cfg",
        r#"{"aperture": {"kind": "circle", "radius": 1}, "pas": {"kind": "isotropic"}}"#,
    );
    let out_csv = dir.path().join("d.csv");
    let out = divspec(&["doppler", "--out", out_csv.to_str().unwrap()], &cfg);
    assert!(out.status.success());
    let csv = fs::read_to_string(&out_csv).unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 201);
    let mid: f64 = rows[100][1].parse().unwrap();
    assert!((mid - 1.0 / std::f64::consts::PI).abs() < 1e-15);

    let status = Command::new(env!("CARGO_BIN_EXE_divspec"))
        .args(["plot", "--kind", "doppler", "--csv"])
        .arg(&out_csv)
        .status()
        .unwrap();
    assert!(status.success());
    let script = fs::read_to_string(dir.path().join("d.py")).unwrap();
    assert!(script.contains("import matplotlib.pyplot"));

    let out = Command::new(env!("CARGO_BIN_EXE_divspec"))
        .args(["plot", "--kind", "polar", "--csv"])
        .arg(&out_csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("spectrum, sweep, doppler"));
}

#[test]
fn failed_sweep_points_leave_empty_cells() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "r.cfg",
        r#"{"aperture": {"kind": "circle", "radius": 1}, "pas": {"kind": "isotropic"}, "n_override": 9,
            "sweep": {"kind": "radius", "start": 0.5, "stop": 1.5, "steps": 3}}"#,
    );
    let out = divspec(&["sweep"], &cfg);
    assert!(out.status.success());
    let rows = data_rows(&String::from_utf8(out.stdout).unwrap());
    assert!(!rows[0][1].is_empty());
    // N = N_D at r = 1 leaves the omega correction unusable, and N = 9 is below N_D = 13 at r = 1.5
    assert_eq!(rows[1][1..], ["", "", ""]);
    assert_eq!(rows[2][1..], ["", "", ""]);
    assert!(String::from_utf8(out.stderr).unwrap().contains("failed"));
}
