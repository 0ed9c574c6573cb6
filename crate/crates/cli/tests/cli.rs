use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn xcoh(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_xcoh"));
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("XCOH_WORKERS", w),
        None => cmd.env_remove("XCOH_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn scatter_writes_samples_and_overlays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = xcoh(
        &[
            "scatter",
            "--channel",
            "pd:eta_p=0",
            "--samples",
            "1000",
            "--seed",
            "3",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("#schema=xcoh-scatter/1\n"));
    let rows = data_rows(&out);
    let header = &rows[0];
    assert_eq!(header.len(), 21);
    let m0_pre = header.iter().position(|c| c == "m0_pre").unwrap();
    let m0 = header.iter().position(|c| c == "m0").unwrap();
    let family = header.iter().position(|c| c == "family").unwrap();
    let samples: Vec<_> = rows[1..].iter().filter(|r| r[family].is_empty()).collect();
    assert_eq!(samples.len(), 1000);
    assert_eq!(rows.len() - 1, 1000 + 3 * 200);
    for r in &rows[1..] {
        assert_eq!(r[m0_pre], r[m0]);
    }
    for name in ["mnms", "werner", "mems"] {
        assert_eq!(rows.iter().filter(|r| r[family] == name).count(), 200);
    }
}

#[test]
fn scatter_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for w in ["1", "8"] {
        let out = dir.path().join(format!("w{w}.csv"));
        let o = xcoh(
            &[
                "scatter",
                "--channel",
                "nmad:gamma=1,Gamma=0.1,t=2.5",
                "--samples",
                "5000",
                "--seed",
                "11",
                "--out",
                out.to_str().unwrap(),
            ],
            Some(w),
        );
        assert!(o.status.success());
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn measures_flag_selects_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = xcoh(
        &[
            "scatter",
            "--channel",
            "ad:eta_a=0.3",
            "--samples",
            "10",
            "--measures",
            "fmax,d2max",
            "--no-overlays",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success());
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 11);
    assert_eq!(&rows[0][13..], &["fmax".to_string(), "d2max".to_string()]);
}

#[test]
fn sweep_bell_under_phase_damping() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw.csv");
    let o = xcoh(
        &[
            "sweep",
            "--preset",
            "pd",
            "--family",
            "bell",
            "--grid",
            "0:1:200",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success());
    let rows = data_rows(&out);
    assert_eq!(rows[0], ["kappa", "m0", "m1", "fmax", "conc", "d2max"]);
    assert_eq!(rows.len(), 201);
    for r in &rows[1..] {
        let kappa: f64 = r[0].parse().unwrap();
        let m0: f64 = r[1].parse().unwrap();
        assert!((m0 - (1.0 - kappa)).abs() < 1e-15);
    }
}

#[test]
fn sweep_with_family_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mn.csv");
    let o = xcoh(
        &[
            "sweep",
            "--preset",
            "rtn",
            "--family",
            "mnms",
            "--epsilon",
            "0.5",
            "--grid",
            "0:1:50",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success());
    let rows = data_rows(&out);
    let m0: f64 = rows[1][1].parse().unwrap();
    assert!((m0 - 0.5).abs() < 1e-15);
}

#[test]
fn verify_passes_by_default_and_fails_on_fault() {
    let o = xcoh(&["verify", "--samples", "300"], None);
    let report = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{report}");
    for check in [
        "cptp",
        "dual-path",
        "eigen-oracle",
        "rana",
        "horodecki",
        "frozen-state",
    ] {
        assert!(report.contains(&format!("PASS {check}")), "{report}");
    }
    assert!(report.contains("max residual"));

    let o = xcoh(
        &["verify", "--samples", "50", "--inject-fault", "1e-3"],
        None,
    );
    let report = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(1));
    assert!(report.contains("FAIL cptp"), "{report}");
}

#[test]
fn bad_channel_text_reports_position() {
    let o = xcoh(&["scatter", "--channel", "pd:eta_p=zz", "--out", "-"], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("byte 9"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let o = xcoh(&["sweep", "--preset", "nope", "--out", "-"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr)
        .contains("valid presets: pd, nmd, rtn, pln, oun, ad, admem, nmad"));

    let o = xcoh(
        &[
            "scatter",
            "--channel",
            "pd:eta_p=0.3",
            "--measures",
            "m9",
            "--out",
            "-",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));

    let o = xcoh(
        &["scatter", "--channel", "pd:eta_p=1.5", "--out", "-"],
        None,
    );
    assert_eq!(o.status.code(), Some(2));

    let o = xcoh(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("x.csv");
    let o = xcoh(
        &[
            "scatter",
            "--channel",
            "pd:eta_p=0.3",
            "--samples",
            "5",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot create"));
}
