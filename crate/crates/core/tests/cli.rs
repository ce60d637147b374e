use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pcraman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcraman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fig2() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../paper_fig2.cfg")
}

/// fig2 with a coarse grid and a few edits, written to `dir/name`.
fn small_config(dir: &Path, name: &str, edits: &[(&str, &str)]) -> PathBuf {
    let mut text = std::fs::read_to_string(fig2()).unwrap();
    let mut all = vec![
        ("defect_slices = 4000", "defect_slices = 200"),
        ("grid_inner_points = 2001", "grid_inner_points = 101"),
        ("grid_outer_points = 201", "grid_outer_points = 21"),
    ];
    all.extend_from_slice(edits);
    for (from, to) in all {
        assert!(text.contains(from), "{from}");
        text = text.replace(from, to);
    }
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn fpc_passive_resonance_prints_unity() {
    let o = pcraman(&["fpc", "--tm", "0.1", "--rm", "0.9", "--alphad", "0", "--phi", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "T=1"), "{}", stdout(&o));
}

#[test]
fn fpc_json_and_bad_args() {
    let o = pcraman(&["fpc", "--tm", "0.1", "--rm", "0.9", "--alphad", "0", "--phi", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["T"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let o = pcraman(&["fpc", "--tm=-0.1", "--rm", "0.9", "--alphad", "0", "--phi", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error[config]"));
}

#[test]
fn spectrum_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "a.cfg", &[]);
    let out = dir.path().join("out");
    let o = pcraman(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("fig2_T_R.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("omega_rad_s,detuning_over_gamma10,T,R"));
    assert_eq!(lines.count(), 101 + 21 - 1);
    let svg = std::fs::read_to_string(out.join("fig2.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn spectrum_json_no_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "a.cfg", &[]);
    let o = pcraman(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--format",
        "json",
        "--no-plot",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!dir.path().join("fig2.svg").exists());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig2_T_R.json")).unwrap()).unwrap();
    for key in ["omegas", "t", "r"] {
        assert_eq!(v[key].as_array().unwrap().len(), 121, "{key}");
    }
    assert_eq!(v["config_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn scan_writes_maxima() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(
        dir.path(),
        "s.cfg",
        &[(
            "output_stem = \"fig2\"",
            "output_stem = \"s\"\nscan_g1_max_over_gamma10 = 0.01\nscan_points = 3\nscan_window_points = 41",
        )],
    );
    let o = pcraman(&["scan", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("s_maxima.csv")).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "g1_over_gamma10,t_max,r_max");
    assert_eq!(lines.len(), 4);
    assert!(dir.path().join("s.svg").exists());
}

#[test]
fn bad_config_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "bad.cfg", &[("periods = 10", "periods = 10\nperoids = 3")]);
    let o = pcraman(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("error[config]") && err.contains("bad.cfg:"), "{err}");

    let cfg = small_config(dir.path(), "neg.cfg", &[("gamma20_over_gamma10 = 0.1", "gamma20_over_gamma10 = -0.1")]);
    let o = pcraman(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn io_failures_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.cfg");
    let o = pcraman(&["spectrum", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("nope.cfg"));

    let cfg = small_config(dir.path(), "a.cfg", &[]);
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = pcraman(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn overflowing_gain_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(
        dir.path(),
        "hot.cfg",
        &[
            ("coupling_k_rad_s = 2.4e5", "coupling_k_rad_s = 1e20"),
            ("pump_rabi_over_gamma10 = 0.007", "pump_rabi_over_gamma10 = 0.5"),
        ],
    );
    let o = pcraman(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("error[solver]"));
}
