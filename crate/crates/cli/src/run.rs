//! Scenario dispatch.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::document::apply_sweep_point;
use crate::table::{Provenance, ResultTable, TableError};
use cvfb_core::scenarios::{
    calibrate_source, cavity_scan, correct_detection, detuning_point, feedback_eot,
    open_loop_transmission, optimize_detuning, printed_open_loop_formula, reflectivity_point,
    snl_calibration, source_entanglement, DetuningObjective,
};
use cvfb_core::{QuadratureCombo, ScenarioConfig, SqueezingDb, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Source,
    OpenLoop,
    FeedbackEot,
    DetuningSweep,
    ReflectivitySweep,
    CavityScan,
    Snl,
    CorrectDetection,
    Calibrate,
    OptimizeDetuning,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Scenario::Source,
        Scenario::OpenLoop,
        Scenario::FeedbackEot,
        Scenario::DetuningSweep,
        Scenario::ReflectivitySweep,
        Scenario::CavityScan,
        Scenario::Snl,
        Scenario::CorrectDetection,
        Scenario::Calibrate,
        Scenario::OptimizeDetuning,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Source => "source",
            Scenario::OpenLoop => "open-loop",
            Scenario::FeedbackEot => "feedback-eot",
            Scenario::DetuningSweep => "detuning-sweep",
            Scenario::ReflectivitySweep => "reflectivity-sweep",
            Scenario::CavityScan => "cavity-scan",
            Scenario::Snl => "snl",
            Scenario::CorrectDetection => "correct-detection",
            Scenario::Calibrate => "calibrate",
            Scenario::OptimizeDetuning => "optimize-detuning",
        }
    }

    /// Sweeps built into the scenario itself, used when the config has none.
    fn default_sweep(self) -> Option<SweepSpec> {
        match self {
            Scenario::DetuningSweep => Some(SweepSpec::new("feedback.detuning", -PI, PI, 201)),
            Scenario::ReflectivitySweep => Some(SweepSpec::new("sample.r", 0.0, 0.5, 11)),
            _ => None,
        }
        .map(|s| s.expect("built-in sweep is valid"))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::ALL.iter().map(|s| s.name()).collect();
                RunError::Usage(format!(
                    "unknown scenario `{s}`; expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] crate::document::ConfigError),
    #[error(transparent)]
    Solver(#[from] cvfb_core::Error),
    #[error(transparent)]
    Output(#[from] TableError),
}

impl RunError {
    /// 1 for solver and output failures, 2 for usage and config problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) | RunError::Config(_) => 2,
            RunError::Solver(_) | RunError::Output(_) => 1,
        }
    }
}

type Rows = (Vec<&'static str>, Vec<Vec<f64>>);

/// Single-configuration evaluation. Multi-row scenarios return many rows.
fn evaluate(sc: Scenario, cfg: &ScenarioConfig) -> cvfb_core::Result<Rows> {
    Ok(match sc {
        Scenario::Source => {
            let r = source_entanglement(cfg)?;
            (
                vec!["sum_db", "diff_db", "duan"],
                vec![vec![r.sum_db, r.diff_db, r.duan]],
            )
        }
        Scenario::OpenLoop => {
            let t = cfg.sample.t;
            let mut rows = Vec::new();
            for v in [cfg.targets.sum_db, cfg.targets.diff_db] {
                let db = SqueezingDb::new(v)?;
                rows.push(vec![
                    v,
                    t,
                    open_loop_transmission(db, t)?.value(),
                    printed_open_loop_formula(db, t)?.value(),
                ]);
            }
            (
                vec![
                    "input_db",
                    "transmissivity",
                    "transmitted_db",
                    "printed_formula_db",
                ],
                rows,
            )
        }
        Scenario::FeedbackEot => {
            let r = feedback_eot(cfg)?;
            (
                vec!["sum_db", "diff_db", "duan", "enhancement_db"],
                vec![vec![
                    r.closed.sum_db,
                    r.closed.diff_db,
                    r.closed.duan,
                    r.enhancement_db,
                ]],
            )
        }
        Scenario::DetuningSweep => {
            let p = detuning_point(cfg, cfg.feedback.detuning)?;
            (
                vec!["theta", "d2_intensity", "sum_db"],
                vec![vec![p.theta, p.d2_intensity, p.sum_db]],
            )
        }
        Scenario::ReflectivitySweep => {
            let p = reflectivity_point(cfg, cfg.sample.r)?;
            (
                vec![
                    "r",
                    "t",
                    "sum_db_feedback_on",
                    "sum_db_feedback_off",
                    "gap_db",
                    "duan_feedback_on",
                    "duan_feedback_off",
                ],
                vec![vec![
                    p.r,
                    p.t,
                    p.sum_db_feedback_on,
                    p.sum_db_feedback_off,
                    p.gap_db(),
                    p.duan_feedback_on,
                    p.duan_feedback_off,
                ]],
            )
        }
        Scenario::CavityScan => {
            let rows = cavity_scan(cfg)?
                .into_iter()
                .map(|s| vec![s.time, s.drive_voltage, s.theta, s.circulating_ratio])
                .collect();
            (
                vec!["time", "drive_voltage", "theta", "circulating_ratio"],
                rows,
            )
        }
        Scenario::Snl => {
            let s = snl_calibration(cfg)?;
            let combos = [
                QuadratureCombo::x(0),
                QuadratureCombo::y(0),
                QuadratureCombo::x(1),
                QuadratureCombo::y(1),
                QuadratureCombo::amplitude_sum(0, 1),
                QuadratureCombo::phase_difference(0, 1),
            ];
            let row = combos
                .iter()
                .map(|c| s.variance(c))
                .collect::<cvfb_core::Result<Vec<_>>>()?;
            (
                vec![
                    "var_x1", "var_y1", "var_x2", "var_y2", "var_sum", "var_diff",
                ],
                vec![row],
            )
        }
        Scenario::CorrectDetection => {
            let r = correct_detection(cfg)?;
            (
                vec![
                    "inferred_db",
                    "inferred_reference_db",
                    "enhancement_db",
                    "variance_improvement_percent",
                ],
                vec![vec![
                    r.inferred_db,
                    r.inferred_reference_db,
                    r.enhancement_db,
                    r.variance_improvement_percent,
                ]],
            )
        }
        Scenario::Calibrate => {
            let f = cfg.frequency()?;
            let c = calibrate_source(
                cfg.targets.sum_db,
                cfg.targets.diff_db,
                cfg.nopa.escape_efficiency,
                cfg.nopa.normalized_frequency(f),
                cfg.detection.params.efficiency,
            )?;
            (
                vec!["pump_parameter", "excess_phase_noise", "achieved_sum_db"],
                vec![vec![
                    c.pump_parameter,
                    c.excess_phase_noise,
                    c.achieved_sum_db,
                ]],
            )
        }
        Scenario::OptimizeDetuning => {
            let sq = optimize_detuning(cfg, DetuningObjective::MaxSumSqueezing)?;
            let d2 = optimize_detuning(cfg, DetuningObjective::MinD2Intensity)?;
            (
                vec![
                    "theta_max_sum_squeezing",
                    "max_sum_db",
                    "theta_min_d2",
                    "min_d2_intensity",
                    "degenerate",
                ],
                vec![vec![
                    sq.theta,
                    sq.value,
                    d2.theta,
                    d2.value,
                    if sq.degenerate || d2.degenerate {
                        1.0
                    } else {
                        0.0
                    },
                ]],
            )
        }
    })
}

/// Run a scenario, honouring the config's sweep (or the scenario's own
/// default sweep). Sweep points are evaluated on up to `jobs` threads and
/// merged in sweep order.
pub fn run_scenario(
    sc: Scenario,
    cfg: &ScenarioConfig,
    jobs: usize,
    deterministic: bool,
) -> Result<ResultTable, RunError> {
    let provenance = Provenance::new(sc.name(), cfg, deterministic);
    let sweep = cfg.sweep.clone().or_else(|| sc.default_sweep());
    let Some(sweep) = sweep else {
        let (cols, rows) = evaluate(sc, cfg)?;
        return Ok(ResultTable::new(cols, rows, provenance)?);
    };
    if sc == Scenario::CavityScan {
        return Err(RunError::Usage(
            "cavity-scan is a time series and does not take a sweep".into(),
        ));
    }
    let builtin = sc.default_sweep().map(|s| s.parameter);
    if let Some(p) = &builtin {
        if *p != sweep.parameter {
            return Err(RunError::Usage(format!(
                "{} sweeps `{p}`, not `{}`",
                sc.name(),
                sweep.parameter
            )));
        }
    }

    let points = sweep.points();
    let eval = |&v: &f64| -> cvfb_core::Result<Rows> {
        let c = apply_sweep_point(cfg, &sweep.parameter, v)?;
        evaluate(sc, &c)
    };
    let results: Vec<cvfb_core::Result<Rows>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| RunError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
        pool.install(|| points.par_iter().map(eval).collect())
    } else {
        points.iter().map(eval).collect()
    };

    let mut columns: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for (v, r) in points.iter().zip(results) {
        let (cols, rs) = r?;
        if columns.is_empty() {
            // Scenarios that sweep their own key already report it.
            if builtin.is_none() {
                columns.push(sweep.parameter.clone());
            }
            columns.extend(cols.iter().map(|c| c.to_string()));
        }
        for mut row in rs {
            if builtin.is_none() {
                row.insert(0, *v);
            }
            rows.push(row);
        }
    }
    Ok(ResultTable::new(columns, rows, provenance)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for sc in Scenario::ALL {
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert_eq!("nope".parse::<Scenario>().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn generic_sweep_prepends_parameter() {
        let cfg = ScenarioConfig {
            sweep: Some(SweepSpec::new("detection.efficiency", 0.5, 1.0, 3).unwrap()),
            ..Default::default()
        };
        let t = run_scenario(Scenario::Source, &cfg, 1, true).unwrap();
        assert_eq!(t.columns()[0], "detection.efficiency");
        assert_eq!(t.rows().len(), 3);
        assert_eq!(
            t.column("detection.efficiency").unwrap(),
            vec![0.5, 0.75, 1.0]
        );
    }

    #[test]
    fn builtin_sweep_rejects_foreign_parameter() {
        let cfg = ScenarioConfig {
            sweep: Some(SweepSpec::new("sample.r", 0.0, 0.3, 3).unwrap()),
            ..Default::default()
        };
        assert!(matches!(
            run_scenario(Scenario::DetuningSweep, &cfg, 1, true),
            Err(RunError::Usage(_))
        ));
    }

    #[test]
    fn parallel_matches_serial() {
        let cfg = ScenarioConfig {
            sweep: Some(SweepSpec::new("feedback.detuning", -1.0, 1.0, 9).unwrap()),
            ..Default::default()
        };
        let a = run_scenario(Scenario::DetuningSweep, &cfg, 1, true).unwrap();
        let b = run_scenario(Scenario::DetuningSweep, &cfg, 4, true).unwrap();
        assert_eq!(a, b);
    }
}
