use std::f64::consts::PI;
use std::process::Command;

use cvfb_cli::{
    apply_overrides, parse_config, parse_sweep_arg, run_scenario, serialize_config, ConfigError,
    Scenario,
};
use cvfb_core::ScenarioConfig;

fn cvfb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvfb"))
}

#[test]
fn empty_document_is_defaults() {
    let cfg = parse_config("").unwrap();
    assert_eq!(cfg, ScenarioConfig::default());
    assert_eq!(
        (cfg.sample.t, cfg.sample.r, cfg.sample.l),
        (0.75, 0.14, 0.11)
    );
    assert_eq!(cfg.detection.params.efficiency, 0.7);
    assert_eq!(cfg.analysis.frequency_hz, 2e6);
    assert_eq!(cfg.classical.m3_reflectivity, 0.96);
}

#[test]
fn budget_violation_is_named() {
    let err = parse_config("[sample]\nt = 0.5\nr = 0.6\n").unwrap_err();
    let ConfigError::Invalid(errs) = &err else {
        panic!("{err}")
    };
    assert!(errs.iter().any(|e| e.contains("budget")), "{errs:?}");
}

#[test]
fn every_failure_is_listed() {
    let doc =
        "[sample]\nq = 1\n[detection]\nefficiency = 1.5\n[feedback]\nenabled = 3\n[bogus]\nx = 1\n";
    let ConfigError::Invalid(errs) = parse_config(doc).unwrap_err() else {
        panic!()
    };
    assert_eq!(errs.len(), 4, "{errs:?}");
    assert!(errs.iter().any(|e| e.contains("sample.q")));
    assert!(errs.iter().any(|e| e.contains("detection.efficiency")));
    assert!(errs.iter().any(|e| e.contains("feedback.enabled")));
    assert!(errs.iter().any(|e| e.contains("[bogus]")));
}

#[test]
fn syntax_errors_carry_line_numbers() {
    match parse_config("[sample]\nt = 0.75\nr = = 0.14\n") {
        Err(ConfigError::Syntax { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn degrees_are_converted() {
    let cfg = parse_config("[feedback]\ndetuning_deg = 90\n").unwrap();
    assert!((cfg.feedback.detuning - PI / 2.0).abs() < 1e-15);
    let s = parse_sweep_arg("feedback.detuning_deg=-180:180:5").unwrap();
    assert_eq!(s.parameter, "feedback.detuning");
    assert_eq!((s.from, s.to), (-PI, PI));
}

#[test]
fn serialization_is_a_fixed_point() {
    let doc = "[nopa]\npump_parameter = 0.25\npump_phase_deg = 170\n[sample]\nt = 0.7\nr = 0.19\n\
               [feedback]\nenabled = false\npath_length = 0.35\n[classical]\nsamples = 17\n\
               [sweep]\nparameter = \"sample.r\"\nfrom = 0\nto = 0.4\nsteps = 5\n";
    let a = parse_config(doc).unwrap();
    let text = serialize_config(&a);
    let b = parse_config(&text).unwrap();
    assert_eq!(a, b);
    assert_eq!(serialize_config(&b), text);
    assert_eq!(
        parse_config(&serialize_config(&ScenarioConfig::default())).unwrap(),
        ScenarioConfig::default()
    );
}

#[test]
fn overrides_apply_and_validate() {
    let cfg = apply_overrides(
        ScenarioConfig::default(),
        &["sample.t=0.7", "sample.r=0.19", "feedback.enabled=false"],
    )
    .unwrap();
    assert_eq!(cfg.sample.t, 0.7);
    assert!(!cfg.feedback.enabled);
    assert!(apply_overrides(ScenarioConfig::default(), &["sample.t=0.7"]).is_err());
    assert!(apply_overrides(ScenarioConfig::default(), &["nonsense"]).is_err());
}

#[test]
fn sweep_arguments_are_checked() {
    assert!(parse_sweep_arg("feedback.detuning=0:1:1").is_err());
    assert!(parse_sweep_arg("feedback.detuning=1:1:5").is_err());
    assert!(parse_sweep_arg("feedback.enabled=0:1:5").is_err());
    assert!(parse_sweep_arg("feedback.detuning=0:1").is_err());
    assert!(parse_sweep_arg("nope=0:1:3").is_err());
}

#[test]
fn scenario_tables_have_expected_shape() {
    let cfg = ScenarioConfig::default();
    let t = run_scenario(Scenario::FeedbackEot, &cfg, 1, true).unwrap();
    assert_eq!(t.columns(), ["sum_db", "diff_db", "duan", "enhancement_db"]);
    assert_eq!(t.rows().len(), 1);

    let t = run_scenario(Scenario::DetuningSweep, &cfg, 2, true).unwrap();
    assert_eq!(t.rows().len(), 201);

    let t = run_scenario(Scenario::Snl, &cfg, 1, true).unwrap();
    for v in &t.rows()[0] {
        assert!((v - 1.0).abs() < 1e-9);
    }

    let t = run_scenario(Scenario::CavityScan, &cfg, 1, true).unwrap();
    assert_eq!(t.rows().len(), cfg.classical.samples);
}

#[test]
fn binary_writes_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let st = cvfb()
        .args([
            "detuning-sweep",
            "--sweep",
            "feedback.detuning=-3.141592653589793:3.141592653589793:201",
            "--deterministic",
            "--jobs",
            "2",
            "--output",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(st.status.success());
    assert!(st.stderr.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let data = text.lines().filter(|l| !l.starts_with('#')).skip(1).count();
    assert_eq!(data, 201);
}

#[test]
fn binary_exit_codes() {
    let st = cvfb().arg("no-such-scenario").output().unwrap();
    assert_eq!(st.status.code(), Some(2));

    let st = cvfb()
        .args(["source", "--set", "sample.t=0.5"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    let st = cvfb()
        .args(["source", "--set", "nopa.pump_parameter=1.0"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    let st = cvfb()
        .args(["correct-detection", "--set", "detection.detected_db=6"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));

    let st = cvfb()
        .args(["source", "--output", "/nonexistent-dir/x.csv"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    std::fs::write(&path, "[sample]\nt = 0.7\nr = 0.19\n").unwrap();
    let st = cvfb()
        .args(["feedback-eot", "--deterministic", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(st.status.success());
    let st = cvfb()
        .args(["feedback-eot", "--config", "/nonexistent.toml"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
}
