//! Reproducible experiments built on the network solver.
//!
//! Every function here is pure in its configuration. Sweep helpers are
//! sequential; callers wanting parallelism evaluate the `*_point`
//! functions themselves and keep sweep order.

use std::f64::consts::PI;

use crate::config::ScenarioConfig;
use crate::elements::{Element, NopaParams};
use crate::error::{Error, Result};
use crate::network::{LoopSolveResult, Network};
use crate::numerics::{bisect, golden_section_min};
use crate::spectrum::{duan_sum, NoiseSpectrum, QuadratureCombo};
use crate::units::{db_to_variance, variance_to_db, AnalysisFrequency, SqueezingDb};

/// Golden-section tolerance for [`optimize_detuning`] (rad).
pub const DETUNING_TOL: f64 = 1e-6;
/// Objective spread below which the detuning optimum is reported degenerate.
pub const FLATNESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Squeezing of `(X1 + X2)/√2`, dB below shot noise.
    pub sum_db: f64,
    /// Squeezing of `(Y1 − Y2)/√2`, dB below shot noise.
    pub diff_db: f64,
    pub duan: f64,
}

impl EntanglementReport {
    fn from_solution(sol: &LoopSolveResult) -> Result<Self> {
        let v_sum = sol.measure_combo(&QuadratureCombo::amplitude_sum(0, 1))?;
        let v_diff = sol.measure_combo(&QuadratureCombo::phase_difference(0, 1))?;
        Ok(Self {
            sum_db: variance_to_db(v_sum)?.value(),
            diff_db: variance_to_db(v_diff)?.value(),
            duan: duan_sum(v_sum, v_diff)?,
        })
    }
}

/// NOPA coupler → detector → sink.
pub fn build_source_network(cfg: &ScenarioConfig) -> Network {
    let mut net = Network::new();
    let nopa = net.add(Element::Nopa(cfg.nopa));
    let det = net.add(Element::Detector {
        params: cfg.detection.params,
        modes: 2,
    });
    net.source(nopa.input(0))
        .source(nopa.input(1))
        .source(det.input(1));
    net.connect(nopa.output(0), det.input(0), 0.0);
    net.sink(det.output(0));
    net
}

/// NOPA → sample → detector. With `closed`, the sample's reflection is
/// returned to the NOPA coupler with carrier phase θ and the path's sideband
/// phase; otherwise the reflection is discarded and the coupler sees vacuum.
/// The only sink is the detected transmitted pair.
pub fn build_feedback_network(cfg: &ScenarioConfig, closed: bool) -> Result<Network> {
    let mut net = Network::new();
    let nopa = net.add(Element::Nopa(cfg.nopa));
    let sample = net.add(Element::Sample {
        params: cfg.sample,
        modes: 2,
    });
    let det = net.add(Element::Detector {
        params: cfg.detection.params,
        modes: 2,
    });
    net.connect(nopa.output(0), sample.input(0), 0.0);
    net.connect(sample.output(0), det.input(0), 0.0);
    if closed {
        let sideband = cfg.sideband_phase()?;
        net.connect_delayed(
            sample.output(1),
            nopa.input(0),
            cfg.feedback.detuning,
            sideband,
        );
    } else {
        net.source(nopa.input(0));
    }
    net.source(nopa.input(1))
        .source(sample.input(1))
        .source(sample.input(2))
        .source(det.input(1));
    net.sink(det.output(0));
    Ok(net)
}

fn validated(cfg: &ScenarioConfig) -> Result<AnalysisFrequency> {
    if let Err(mut errs) = cfg.validate() {
        return Err(errs.swap_remove(0));
    }
    cfg.frequency()
}

/// Detected entanglement of the bare source.
pub fn source_entanglement(cfg: &ScenarioConfig) -> Result<EntanglementReport> {
    let f = validated(cfg)?;
    EntanglementReport::from_solution(&build_source_network(cfg).solve(f)?)
}

/// Squeezing left after a lossy channel of transmissivity `t`:
/// `V′ = −10·lg(1 − T·(1 − 10^{−V/10}))`.
pub fn open_loop_transmission(v: SqueezingDb, t: f64) -> Result<SqueezingDb> {
    check_transmissivity(t)?;
    variance_to_db(t * v.to_variance() + 1.0 - t)
}

/// The loss law as printed in the source article,
/// `−10·lg(1 − T·10^{−V/10})`. Kept only to document that it disagrees
/// with the article's own numbers.
pub fn printed_open_loop_formula(v: SqueezingDb, t: f64) -> Result<SqueezingDb> {
    check_transmissivity(t)?;
    variance_to_db(1.0 - t * v.to_variance())
}

fn check_transmissivity(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::param(
            "transmissivity",
            format!("must lie in [0, 1], got {t}"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackReport {
    /// With the loop closed (equal to `open` when feedback is disabled).
    pub closed: EntanglementReport,
    pub open: EntanglementReport,
    /// `closed.sum_db − open.sum_db`.
    pub enhancement_db: f64,
}

/// Transmitted entanglement with and without the coherent-feedback loop.
pub fn feedback_eot(cfg: &ScenarioConfig) -> Result<FeedbackReport> {
    let f = validated(cfg)?;
    let open = EntanglementReport::from_solution(&build_feedback_network(cfg, false)?.solve(f)?)?;
    let closed = if cfg.feedback.enabled {
        EntanglementReport::from_solution(&build_feedback_network(cfg, true)?.solve(f)?)?
    } else {
        open
    };
    Ok(FeedbackReport {
        closed,
        open,
        enhancement_db: closed.sum_db - open.sum_db,
    })
}

fn check_reflectivities(r1_sq: f64, r2_sq: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&r1_sq) {
        return Err(Error::param(
            "classical.m3_reflectivity",
            format!("must lie in [0, 1], got {r1_sq}"),
        ));
    }
    if !(0.0..=1.0).contains(&r2_sq) {
        return Err(Error::param(
            "sample.r",
            format!("must lie in [0, 1], got {r2_sq}"),
        ));
    }
    if r1_sq == 1.0 && r2_sq == 1.0 {
        return Err(Error::Domain(
            "lossless closed cavity has no steady state".into(),
        ));
    }
    Ok((r1_sq.sqrt(), r2_sq.sqrt()))
}

/// Carrier power reflected by the coupler/sample compound cavity, relative
/// to the incident power: `|(−r1 + r2·e^{iθ}) / (1 − r1·r2·e^{iθ})|²`.
pub fn d2_intensity(m3_reflectivity: f64, sample_reflectivity: f64, theta: f64) -> Result<f64> {
    let (r1, r2) = check_reflectivities(m3_reflectivity, sample_reflectivity)?;
    let e = num_complex::Complex64::from_polar(1.0, theta);
    Ok(((-r1 + r2 * e) / (1.0 - r1 * r2 * e)).norm_sqr())
}

/// Circulating power of the feedback cavity relative to the incident power:
/// `t1² / |1 − r1·r2·e^{iθ}|²`.
pub fn circulating_ratio(
    m3_reflectivity: f64,
    sample_reflectivity: f64,
    theta: f64,
) -> Result<f64> {
    let (r1, r2) = check_reflectivities(m3_reflectivity, sample_reflectivity)?;
    let e = num_complex::Complex64::from_polar(1.0, theta);
    Ok((1.0 - m3_reflectivity) / (1.0 - r1 * r2 * e).norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningPoint {
    pub theta: f64,
    pub d2_intensity: f64,
    pub sum_db: f64,
}

pub fn detuning_point(cfg: &ScenarioConfig, theta: f64) -> Result<DetuningPoint> {
    let c = cfg.with_detuning(theta);
    Ok(DetuningPoint {
        theta,
        d2_intensity: d2_intensity(c.classical.m3_reflectivity, c.sample.r, theta)?,
        sum_db: feedback_eot(&c)?.closed.sum_db,
    })
}

pub fn detuning_sweep(cfg: &ScenarioConfig, thetas: &[f64]) -> Result<Vec<DetuningPoint>> {
    thetas.iter().map(|&t| detuning_point(cfg, t)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectivityPoint {
    pub r: f64,
    pub t: f64,
    pub sum_db_feedback_on: f64,
    pub sum_db_feedback_off: f64,
    pub duan_feedback_on: f64,
    pub duan_feedback_off: f64,
}

impl ReflectivityPoint {
    pub fn gap_db(&self) -> f64 {
        self.sum_db_feedback_on - self.sum_db_feedback_off
    }
}

/// One sample of reflectivity `r` with the internal loss held fixed and
/// `T = 1 − L − R`. The loop is closed regardless of `feedback.enabled`.
pub fn reflectivity_point(cfg: &ScenarioConfig, r: f64) -> Result<ReflectivityPoint> {
    let mut c = cfg.with_reflectivity(r)?;
    c.feedback.enabled = true;
    let rep = feedback_eot(&c)?;
    Ok(ReflectivityPoint {
        r,
        t: c.sample.t,
        sum_db_feedback_on: rep.closed.sum_db,
        sum_db_feedback_off: rep.open.sum_db,
        duan_feedback_on: rep.closed.duan,
        duan_feedback_off: rep.open.duan,
    })
}

pub fn reflectivity_sweep(cfg: &ScenarioConfig, rs: &[f64]) -> Result<Vec<ReflectivityPoint>> {
    rs.iter().map(|&r| reflectivity_point(cfg, r)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample {
    pub time: f64,
    pub drive_voltage: f64,
    pub theta: f64,
    pub circulating_ratio: f64,
}

/// Symmetric triangle wave of unit period, −1 at integer `u`, +1 halfway.
pub fn triangle(u: f64) -> f64 {
    1.0 - 4.0 * (u - u.floor() - 0.5).abs()
}

/// Cavity transmission trace while the PZT is driven by a triangle wave.
pub fn cavity_scan(cfg: &ScenarioConfig) -> Result<Vec<ScanSample>> {
    validated(cfg)?;
    let c = &cfg.classical;
    let span = c.periods * c.scan_period;
    let n = c.samples - 1;
    (0..c.samples)
        .map(|i| {
            let time = span * i as f64 / n as f64;
            let drive_voltage = c.scan_amplitude * triangle(time / c.scan_period);
            let theta = c.volts_to_radians * drive_voltage;
            Ok(ScanSample {
                time,
                drive_voltage,
                theta,
                circulating_ratio: circulating_ratio(c.m3_reflectivity, cfg.sample.r, theta)?,
            })
        })
        .collect()
}

/// Positions of circulating-power maxima inside `[lo, hi]`, refined by
/// golden-section search around each resonance `2πk`.
pub fn scan_peaks(cfg: &ScenarioConfig, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let (r1_sq, r2_sq) = (cfg.classical.m3_reflectivity, cfg.sample.r);
    let mut peaks = Vec::new();
    let k_lo = (lo / (2.0 * PI)).ceil() as i64;
    let k_hi = (hi / (2.0 * PI)).floor() as i64;
    for k in k_lo..=k_hi {
        let centre = 2.0 * PI * k as f64;
        let (theta, _) = golden_section_min(
            |t| Ok(-circulating_ratio(r1_sq, r2_sq, t)?),
            centre - 1.0,
            centre + 1.0,
            1e-10,
        )?;
        peaks.push(theta);
    }
    Ok(peaks)
}

/// Spectrum of the full feedback network with the pump blocked. Passive
/// optics map vacuum onto vacuum, so this is the shot-noise reference.
pub fn snl_calibration(cfg: &ScenarioConfig) -> Result<NoiseSpectrum> {
    let blocked = cfg.with_pump_blocked();
    let f = validated(&blocked)?;
    Ok(build_feedback_network(&blocked, blocked.feedback.enabled)?
        .solve(f)?
        .spectrum)
}

/// Inverts `V_det = η·V + (1 − η)` to recover the squeezing before
/// detection.
pub fn detection_correction(detected: SqueezingDb, efficiency: f64) -> Result<SqueezingDb> {
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::param(
            "detection.efficiency",
            format!("must lie in (0, 1], got {efficiency}"),
        ));
    }
    let v_det = detected.to_variance();
    let floor = 1.0 - efficiency;
    if v_det <= floor {
        return Err(Error::UnphysicalDetection {
            variance: v_det,
            floor,
        });
    }
    variance_to_db((v_det - floor) / efficiency)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionReport {
    pub inferred_db: f64,
    pub inferred_reference_db: f64,
    pub enhancement_db: f64,
    /// Relative variance reduction `1 − V/V_ref`, percent.
    pub variance_improvement_percent: f64,
}

/// Detection-corrected comparison of the configured detected value against
/// the reference value.
pub fn correct_detection(cfg: &ScenarioConfig) -> Result<CorrectionReport> {
    let eta = cfg.detection.params.efficiency;
    let v = detection_correction(SqueezingDb::new(cfg.detection.detected_db)?, eta)?;
    let v_ref = detection_correction(SqueezingDb::new(cfg.detection.reference_db)?, eta)?;
    Ok(CorrectionReport {
        inferred_db: v.value(),
        inferred_reference_db: v_ref.value(),
        enhancement_db: v.value() - v_ref.value(),
        variance_improvement_percent: 100.0 * (1.0 - v.to_variance() / v_ref.to_variance()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceCalibration {
    pub pump_parameter: f64,
    pub excess_phase_noise: f64,
    /// Detected amplitude-sum squeezing reached by `pump_parameter`.
    pub achieved_sum_db: f64,
}

/// Fit the pump parameter and excess phase noise so that the source,
/// seen through a detector of efficiency `detection_efficiency`, shows the
/// target squeezing values.
///
/// The amplitude-sum target fixes `x` via the closed-form OPO spectrum with
/// effective efficiency `η_esc·η_det`; the remaining gap to the
/// phase-difference target is attributed to excess noise at the source,
/// `N_ex = (V_diff − V_sum)/η_det`.
pub fn calibrate_source(
    target_sum_db: f64,
    target_diff_db: f64,
    escape_efficiency: f64,
    omega_ratio: f64,
    detection_efficiency: f64,
) -> Result<SourceCalibration> {
    if !(escape_efficiency > 0.0 && escape_efficiency <= 1.0) {
        return Err(Error::param(
            "nopa.escape_efficiency",
            format!("must lie in (0, 1], got {escape_efficiency}"),
        ));
    }
    if !(detection_efficiency > 0.0 && detection_efficiency <= 1.0) {
        return Err(Error::param(
            "detection.efficiency",
            format!("must lie in (0, 1], got {detection_efficiency}"),
        ));
    }
    if !omega_ratio.is_finite() || omega_ratio < 0.0 {
        return Err(Error::param(
            "omega_ratio",
            format!("must be >= 0, got {omega_ratio}"),
        ));
    }
    if !(target_sum_db.is_finite() && target_sum_db >= 0.0) {
        return Err(Error::param(
            "nopa.target_sum_db",
            format!("must be finite and >= 0, got {target_sum_db}"),
        ));
    }
    if !target_diff_db.is_finite() || target_diff_db > target_sum_db {
        return Err(Error::Calibration(format!(
            "phase-difference target {target_diff_db} dB must not exceed the amplitude-sum target {target_sum_db} dB"
        )));
    }
    let eta = escape_efficiency * detection_efficiency;
    let w2 = omega_ratio * omega_ratio;
    let s_minus = |x: f64| 1.0 - eta * 4.0 * x / ((1.0 + x).powi(2) + w2);
    let supremum_db = -10.0 * s_minus(1.0).log10();
    if target_sum_db >= supremum_db {
        return Err(Error::Infeasible {
            target_db: target_sum_db,
            supremum_db,
        });
    }
    let v_sum = db_to_variance(SqueezingDb(target_sum_db));
    let x = if target_sum_db == 0.0 {
        0.0
    } else {
        bisect(|x| Ok(s_minus(x) - v_sum), 0.0, 1.0, 1e-15)?
    };
    let achieved_sum_db = -10.0 * s_minus(x).log10();
    let v_diff = db_to_variance(SqueezingDb(target_diff_db));
    Ok(SourceCalibration {
        pump_parameter: x,
        excess_phase_noise: ((v_diff - s_minus(x)) / detection_efficiency).max(0.0),
        achieved_sum_db,
    })
}

/// Calibrate the config's source against its own targets, detector and
/// analysis frequency, returning the updated NOPA parameters.
pub fn calibrated_nopa(cfg: &ScenarioConfig) -> Result<NopaParams> {
    let f = cfg.frequency()?;
    let cal = calibrate_source(
        cfg.targets.sum_db,
        cfg.targets.diff_db,
        cfg.nopa.escape_efficiency,
        cfg.nopa.normalized_frequency(f),
        cfg.detection.params.efficiency,
    )?;
    Ok(NopaParams {
        pump_parameter: cal.pump_parameter,
        excess_phase_noise: cal.excess_phase_noise,
        ..cfg.nopa
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningObjective {
    MaxSumSqueezing,
    MinD2Intensity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningOptimum {
    pub theta: f64,
    /// Objective at `theta`, in its natural sign (dB or intensity).
    pub value: f64,
    /// The objective is flat in θ; `theta` is then reported as 0.
    pub degenerate: bool,
}

const FLATNESS_PROBES: usize = 64;

/// Golden-section search over θ ∈ [−π, π] for the lock point.
pub fn optimize_detuning(
    cfg: &ScenarioConfig,
    objective: DetuningObjective,
) -> Result<DetuningOptimum> {
    validated(cfg)?;
    // Minimized internally; negated squeezing turns the maximum into a minimum.
    let cost = |theta: f64| -> Result<f64> {
        match objective {
            DetuningObjective::MaxSumSqueezing => {
                Ok(-feedback_eot(&cfg.with_detuning(theta))?.closed.sum_db)
            }
            DetuningObjective::MinD2Intensity => {
                d2_intensity(cfg.classical.m3_reflectivity, cfg.sample.r, theta)
            }
        }
    };
    let sign = match objective {
        DetuningObjective::MaxSumSqueezing => -1.0,
        DetuningObjective::MinD2Intensity => 1.0,
    };

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..FLATNESS_PROBES {
        let v = cost(-PI + 2.0 * PI * i as f64 / FLATNESS_PROBES as f64)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi - lo <= FLATNESS_TOL {
        return Ok(DetuningOptimum {
            theta: 0.0,
            value: sign * cost(0.0)?,
            degenerate: true,
        });
    }
    let (theta, v) = golden_section_min(cost, -PI, PI, DETUNING_TOL)?;
    Ok(DetuningOptimum {
        theta,
        value: sign * v,
        degenerate: false,
    })
}
