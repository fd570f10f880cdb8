//! Optical element library. Every element renders to a
//! [`BogoliubovTransfer`] on the doubled basis, with an explicit vacuum
//! input for each loss channel so the dilation stays complete.
//!
//! Passive multi-port elements act identically on every mode of a port; a
//! port of `modes = 2` carries the signal and idler beams side by side.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bogoliubov::{BogoliubovTransfer, Port};
use crate::error::{Error, Result};
use crate::units::AnalysisFrequency;

const BUDGET_TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_fraction(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::param(name, format!("must lie in [0, 1], got {v}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    pub transmissivity: f64,
}

impl BeamSplitterParams {
    pub fn new(transmissivity: f64) -> Result<Self> {
        let p = Self { transmissivity };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_fraction("transmissivity", self.transmissivity)
    }

    /// Real orthogonal mode matrix `[[√T, √(1−T)], [√(1−T), −√T]]`.
    fn mode_matrix(&self) -> DMatrix<Complex64> {
        let t = self.transmissivity.sqrt();
        let r = (1.0 - self.transmissivity).sqrt();
        DMatrix::from_row_slice(2, 2, &[c(t), c(r), c(r), c(-t)])
    }
}

/// Sample power budget: transmitted `t`, reflected `r`, internally lost `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePortSample {
    pub t: f64,
    pub r: f64,
    pub l: f64,
}

impl ThreePortSample {
    pub fn new(t: f64, r: f64, l: f64) -> Result<Self> {
        let s = Self { t, r, l };
        s.validate()?;
        Ok(s)
    }

    /// Transmission `t` with `r = 1 − l − t`.
    pub fn with_fixed_loss(r: f64, l: f64) -> Result<Self> {
        Self::new(1.0 - l - r, r, l)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sample.t", self.t),
            ("sample.r", self.r),
            ("sample.l", self.l),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::param(name, format!("must be >= 0, got {v}")));
            }
        }
        let sum = self.t + self.r + self.l;
        if (sum - 1.0).abs() > BUDGET_TOL {
            return Err(Error::param(
                "sample",
                format!("budget T + R + L must equal 1, got {sum}"),
            ));
        }
        Ok(())
    }

    /// Mode matrix with inputs `(cavity, far, loss)` and outputs
    /// `(transmitted, reflected, loss)`: a loss splitter of transmissivity
    /// `1 − L` followed by a splitter of transmissivity `T/(1 − L)`.
    fn mode_matrix(&self) -> Result<DMatrix<Complex64>> {
        self.validate()?;
        if self.l >= 1.0 {
            return Err(Error::DegenerateSample);
        }
        let keep = (1.0 - self.l).sqrt();
        let lose = self.l.sqrt();
        let tp = (self.t / (1.0 - self.l)).min(1.0);
        let ts = tp.sqrt();
        let rs = (1.0 - tp).sqrt();
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(3, 3, &[
            c(ts * keep), c(rs),  c(ts * lose),
            c(rs * keep), c(-ts), c(rs * lose),
            c(lose),      c(0.0), c(-keep),
        ]);
        Ok(m)
    }
}

/// Below-threshold nondegenerate parametric amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NopaParams {
    /// Total intracavity amplitude decay rate κ (rad/s).
    pub kappa_total: f64,
    /// κ_out / κ_total.
    pub escape_efficiency: f64,
    /// Pump parameter `x = ε/κ_total`; threshold at 1.
    pub pump_parameter: f64,
    /// π selects parametric deamplification.
    pub pump_phase: f64,
    /// Classical noise added to `(Y1 − Y2)/√2` at the coupler output,
    /// shot-noise units.
    pub excess_phase_noise: f64,
}

impl NopaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_total.is_finite() && self.kappa_total > 0.0) {
            return Err(Error::param(
                "nopa.kappa_total",
                format!("must be > 0, got {}", self.kappa_total),
            ));
        }
        if !(self.escape_efficiency > 0.0 && self.escape_efficiency <= 1.0) {
            return Err(Error::param(
                "nopa.escape_efficiency",
                format!("must lie in (0, 1], got {}", self.escape_efficiency),
            ));
        }
        if !self.pump_parameter.is_finite() || self.pump_parameter < 0.0 {
            return Err(Error::param(
                "nopa.pump_parameter",
                format!("must be >= 0, got {}", self.pump_parameter),
            ));
        }
        if self.pump_parameter >= 1.0 {
            return Err(Error::AboveThreshold(self.pump_parameter));
        }
        if !self.pump_phase.is_finite() {
            return Err(Error::param("nopa.pump_phase", "must be finite"));
        }
        if !self.excess_phase_noise.is_finite() || self.excess_phase_noise < 0.0 {
            return Err(Error::param(
                "nopa.excess_phase_noise",
                format!("must be >= 0, got {}", self.excess_phase_noise),
            ));
        }
        Ok(())
    }

    /// Ω/κ_total at the given analysis frequency.
    pub fn normalized_frequency(&self, f: AnalysisFrequency) -> f64 {
        f.omega() / self.kappa_total
    }

    /// Closed-form output spectra `(S_−, S_+)` of the squeezed and
    /// antisqueezed combos for `N_ex = 0`.
    pub fn analytic_spectra(&self, f: AnalysisFrequency) -> (f64, f64) {
        let x = self.pump_parameter;
        let w2 = self.normalized_frequency(f).powi(2);
        let g = self.escape_efficiency * 4.0 * x;
        (
            1.0 - g / ((1.0 + x).powi(2) + w2),
            1.0 + g / ((1.0 - x).powi(2) + w2),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    pub efficiency: f64,
}

impl DetectionParams {
    pub fn new(efficiency: f64) -> Result<Self> {
        let p = Self { efficiency };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::param(
                "detection.efficiency",
                format!("must lie in (0, 1], got {}", self.efficiency),
            ));
        }
        Ok(())
    }
}

/// Two-port splitter, one mode per port.
pub fn beam_splitter(p: BeamSplitterParams) -> Result<BogoliubovTransfer> {
    Element::BeamSplitter {
        params: p,
        modes: 1,
    }
    .bogoliubov(AnalysisFrequency::dc())
}

/// Three-port sample, one mode per port.
pub fn sample_transfer(s: ThreePortSample) -> Result<BogoliubovTransfer> {
    Element::Sample {
        params: s,
        modes: 1,
    }
    .bogoliubov(AnalysisFrequency::dc())
}

/// Signal+idler through-cavity relation including the intracavity-loss
/// ports. Excess phase noise is not part of the Bogoliubov map; see
/// [`Element::transfer`].
pub fn nopa_transfer(p: NopaParams, f: AnalysisFrequency) -> Result<BogoliubovTransfer> {
    Element::Nopa(p).bogoliubov(f)
}

/// Efficiency loss on one detected mode.
pub fn detector_chain(p: DetectionParams) -> Result<BogoliubovTransfer> {
    Element::Detector {
        params: p,
        modes: 1,
    }
    .bogoliubov(AnalysisFrequency::dc())
}

pub fn phase_shift(theta: f64) -> Result<BogoliubovTransfer> {
    Element::PhaseShift { theta, modes: 1 }.bogoliubov(AnalysisFrequency::dc())
}

/// Bogoliubov part plus additive classical noise columns.
#[derive(Debug, Clone)]
pub struct ElementTransfer {
    pub bogoliubov: BogoliubovTransfer,
    /// `2M_out × K` coupling of K real classical noise inputs.
    pub classical: DMatrix<Complex64>,
    pub classical_variances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Identity {
        modes: usize,
    },
    BeamSplitter {
        params: BeamSplitterParams,
        modes: usize,
    },
    Sample {
        params: ThreePortSample,
        modes: usize,
    },
    /// Ports: `coupler`, `loss`, two modes each.
    Nopa(NopaParams),
    Detector {
        params: DetectionParams,
        modes: usize,
    },
    PhaseShift {
        theta: f64,
        modes: usize,
    },
}

impl Element {
    pub fn input_ports(&self) -> Vec<Port> {
        match *self {
            Element::Identity { modes } | Element::PhaseShift { modes, .. } => {
                vec![Port::new("in", modes)]
            }
            Element::BeamSplitter { modes, .. } => {
                vec![Port::new("a", modes), Port::new("b", modes)]
            }
            Element::Sample { modes, .. } => vec![
                Port::new("cavity", modes),
                Port::new("far", modes),
                Port::new("loss", modes),
            ],
            Element::Nopa(_) => vec![Port::new("coupler", 2), Port::new("loss", 2)],
            Element::Detector { modes, .. } => {
                vec![Port::new("signal", modes), Port::new("vacuum", modes)]
            }
        }
    }

    pub fn output_ports(&self) -> Vec<Port> {
        match *self {
            Element::Identity { modes } | Element::PhaseShift { modes, .. } => {
                vec![Port::new("out", modes)]
            }
            Element::BeamSplitter { modes, .. } => {
                vec![Port::new("c", modes), Port::new("d", modes)]
            }
            Element::Sample { modes, .. } => vec![
                Port::new("transmitted", modes),
                Port::new("reflected", modes),
                Port::new("loss", modes),
            ],
            Element::Nopa(_) => vec![Port::new("coupler", 2), Port::new("loss", 2)],
            Element::Detector { modes, .. } => {
                vec![Port::new("detected", modes), Port::new("lost", modes)]
            }
        }
    }

    /// True when the element cannot add energy (everything except a pumped
    /// NOPA).
    pub fn is_passive(&self) -> bool {
        match self {
            Element::Nopa(p) => p.pump_parameter == 0.0 && p.excess_phase_noise == 0.0,
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Element::Identity { .. } => Ok(()),
            Element::BeamSplitter { params, .. } => params.validate(),
            Element::Sample { params, .. } => params.mode_matrix().map(|_| ()),
            Element::Nopa(p) => p.validate(),
            Element::Detector { params, .. } => params.validate(),
            Element::PhaseShift { theta, .. } => {
                if theta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::param("theta", "must be finite"))
                }
            }
        }
    }

    pub fn bogoliubov(&self, f: AnalysisFrequency) -> Result<BogoliubovTransfer> {
        self.validate()?;
        let (ins, outs) = (self.input_ports(), self.output_ports());
        let passive = |u: DMatrix<Complex64>, modes: usize| {
            let full = u.kronecker(&DMatrix::<Complex64>::identity(modes, modes));
            BogoliubovTransfer::from_mode_matrix(&full, ins.clone(), outs.clone())
        };
        match *self {
            Element::Identity { modes } => passive(DMatrix::identity(1, 1), modes),
            Element::BeamSplitter { params, modes } => passive(params.mode_matrix(), modes),
            Element::Sample { params, modes } => passive(params.mode_matrix()?, modes),
            Element::Detector { params, modes } => passive(
                BeamSplitterParams {
                    transmissivity: params.efficiency,
                }
                .mode_matrix(),
                modes,
            ),
            Element::PhaseShift { theta, modes } => passive(
                DMatrix::from_element(1, 1, Complex64::from_polar(1.0, theta)),
                modes,
            ),
            Element::Nopa(p) => BogoliubovTransfer::new(nopa_matrix(&p, f.omega()), ins, outs),
        }
    }

    /// Full transfer including classical noise inputs.
    pub fn transfer(&self, f: AnalysisFrequency) -> Result<ElementTransfer> {
        let bogoliubov = self.bogoliubov(f)?;
        let rows = bogoliubov.matrix().nrows();
        match self {
            Element::Nopa(p) if p.excess_phase_noise > 0.0 => {
                // Y1 += δ, Y2 −= δ with var δ = N_ex/2 adds N_ex to (Y1 − Y2)/√2.
                let half_i = Complex64::new(0.0, 0.5);
                let mut d = DMatrix::zeros(rows, 1);
                d[(0, 0)] = half_i;
                d[(1, 0)] = -half_i;
                d[(4, 0)] = -half_i;
                d[(5, 0)] = half_i;
                Ok(ElementTransfer {
                    bogoliubov,
                    classical: d,
                    classical_variances: vec![p.excess_phase_noise / 2.0],
                })
            }
            _ => Ok(ElementTransfer {
                bogoliubov,
                classical: DMatrix::zeros(rows, 0),
                classical_variances: Vec::new(),
            }),
        }
    }
}

/// Frequency-domain solution of
/// `(κ + iΩ) a_j = ε a_k†(−Ω) + √(2κ_out) A_in,j + √(2κ_loss) B_in,j`
/// with `A_out = √(2κ_out) a − A_in` (and likewise for the loss port).
///
/// Doubled index layout: `0,1` coupler a, `2,3` loss a, `4,5` coupler a†,
/// `6,7` loss a†.
fn nopa_matrix(p: &NopaParams, omega: f64) -> DMatrix<Complex64> {
    let kappa = p.kappa_total;
    let s = Complex64::new(kappa, omega);
    let eps = Complex64::from_polar(p.pump_parameter * kappa, p.pump_phase);
    let det = s * s - eps.norm_sqr();

    // (sI − G)^{-1} = [[s I, E], [E*, s I]] / (s² − |ε|²), E = ε σ_x
    let mut inv = DMatrix::<Complex64>::zeros(4, 4);
    for j in 0..2 {
        let k = 1 - j;
        inv[(j, j)] = s / det;
        inv[(2 + j, 2 + j)] = s / det;
        inv[(j, 2 + k)] = eps / det;
        inv[(2 + j, k)] = eps.conj() / det;
    }

    let g_out = (2.0 * kappa * p.escape_efficiency).sqrt();
    let g_loss = (2.0 * kappa * (1.0 - p.escape_efficiency)).sqrt();
    let mut l = DMatrix::<Complex64>::zeros(4, 8);
    for j in 0..2 {
        l[(j, j)] = c(g_out);
        l[(j, 2 + j)] = c(g_loss);
        l[(2 + j, 4 + j)] = c(g_out);
        l[(2 + j, 6 + j)] = c(g_loss);
    }
    l.transpose() * inv * &l - DMatrix::<Complex64>::identity(8, 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;
    use crate::spectrum::{NoiseSpectrum, QuadratureCombo};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn nopa(x: f64, eta: f64) -> NopaParams {
        NopaParams {
            kappa_total: 1.0,
            escape_efficiency: eta,
            pump_parameter: x,
            pump_phase: PI,
            excess_phase_noise: 0.0,
        }
    }

    fn at(w: f64) -> AnalysisFrequency {
        AnalysisFrequency::from_angular(w).unwrap()
    }

    #[test]
    fn beam_splitter_examples() {
        let t1 = beam_splitter(BeamSplitterParams::new(1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(t1.a_block(0, 0).re, 1.0);
        assert_abs_diff_eq!(t1.a_block(1, 1).re, -1.0);
        assert_abs_diff_eq!(t1.a_block(0, 1).norm(), 0.0);

        let half = beam_splitter(BeamSplitterParams::new(0.5).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(half.a_block(i, j).norm(), 0.5f64.sqrt(), epsilon = 1e-15);
            }
        }
        assert!(half.symplectic_error() < 1e-15);
        assert!(BeamSplitterParams::new(1.2).is_err());
        assert!(BeamSplitterParams::new(-0.1).is_err());
    }

    #[test]
    fn beam_splitter_on_squeezed_input() {
        // T·V + (1 − T) with V = 10^(-0.27)
        let v = 10f64.powf(-0.27);
        let t = 0.75;
        let out = t * v + (1.0 - t);
        assert_abs_diff_eq!(out, 0.6528, epsilon = 1e-4);
        assert_abs_diff_eq!(-10.0 * out.log10(), 1.853, epsilon = 1e-3);
    }

    #[test]
    fn sample_examples() {
        let id = sample_transfer(ThreePortSample::new(1.0, 0.0, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(id.a_block(0, 0).re, 1.0);
        assert_abs_diff_eq!(id.a_block(1, 0).norm(), 0.0);

        let s = sample_transfer(ThreePortSample::new(0.75, 0.14, 0.11).unwrap()).unwrap();
        assert_abs_diff_eq!(s.a_block(0, 0).norm(), 0.8660, epsilon = 1e-4);
        assert_abs_diff_eq!(s.a_block(1, 0).norm(), 0.3742, epsilon = 1e-4);
        assert_abs_diff_eq!(s.a_block(2, 0).norm(), 0.3317, epsilon = 1e-4);
        let budget: f64 = (0..3).map(|r| s.a_block(r, 0).norm_sqr()).sum();
        assert_abs_diff_eq!(budget, 1.0, epsilon = 1e-12);
        assert!(s.symplectic_error() < 1e-12);

        let mirror = sample_transfer(ThreePortSample::new(0.0, 1.0, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(mirror.a_block(1, 0).norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sample_errors() {
        assert!(matches!(
            ThreePortSample::new(0.5, 0.6, 0.11),
            Err(Error::Parameter { .. })
        ));
        assert!(ThreePortSample::new(-0.1, 0.6, 0.5).is_err());
        let dead = ThreePortSample {
            t: 0.0,
            r: 0.0,
            l: 1.0,
        };
        assert_eq!(sample_transfer(dead).unwrap_err(), Error::DegenerateSample);
    }

    #[test]
    fn detector_examples() {
        let id = detector_chain(DetectionParams::new(1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(id.a_block(0, 0).re, 1.0);
        assert_abs_diff_eq!(id.a_block(0, 1).norm(), 0.0);
        // affine loss law on a combo
        let eta = 0.7;
        assert_abs_diff_eq!(eta * 0.537 + (1.0 - eta), 0.6759, epsilon = 1e-4);
        assert!(DetectionParams::new(0.0).is_err());
        assert!(DetectionParams::new(1.01).is_err());
    }

    #[test]
    fn phase_shift_examples() {
        assert!(
            (phase_shift(0.0).unwrap().matrix() - DMatrix::<Complex64>::identity(2, 2)).camax()
                == 0.0
        );
        let pi = phase_shift(PI).unwrap();
        let twice = pi.then(&pi).unwrap();
        assert!((twice.matrix() - DMatrix::<Complex64>::identity(2, 2)).camax() < 1e-15);
    }

    #[test]
    fn quarter_turn_swaps_quadratures() {
        let squeezed = NoiseSpectrum::single_mode(0.5, 2.0);
        let out = squeezed.through(&phase_shift(PI / 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(out.matrix()[(0, 0)], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.matrix()[(1, 1)], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn nopa_passive_when_unpumped() {
        let p = nopa(0.0, 1.0);
        for w in [0.0, 0.3, 2.0, 10.0] {
            let t = nopa_transfer(p, at(w)).unwrap();
            let s = Network::single(Element::Nopa(p))
                .solve(at(w))
                .unwrap()
                .spectrum;
            assert!(s.distance_from_vacuum() < 1e-12, "w = {w}");
            assert!(t.symplectic_error() < 1e-12);
        }
    }

    #[test]
    fn nopa_matches_analytic_oracle() {
        let p = NopaParams {
            kappa_total: 1.0,
            escape_efficiency: 0.9,
            pump_parameter: 0.186,
            pump_phase: PI,
            excess_phase_noise: 0.0,
        };
        let f = at(0.2);
        let r = Network::single(Element::Nopa(p)).solve(f).unwrap();
        let v_sum = r
            .measure_combo(&QuadratureCombo::amplitude_sum(0, 1))
            .unwrap();
        let v_anti = r
            .measure_combo(&QuadratureCombo::amplitude_difference(0, 1))
            .unwrap();
        // independent closed forms
        let s_minus = 1.0 - 0.9 * 4.0 * 0.186 / (1.186f64.powi(2) + 0.04);
        let s_plus = 1.0 + 0.9 * 4.0 * 0.186 / (0.814f64.powi(2) + 0.04);
        assert_abs_diff_eq!(v_sum, s_minus, epsilon = 1e-12);
        assert_abs_diff_eq!(v_anti, s_plus, epsilon = 1e-12);
        assert_abs_diff_eq!(v_sum, 0.537, epsilon = 1e-3);
        assert_abs_diff_eq!(-10.0 * v_sum.log10(), 2.70, epsilon = 0.02);
        assert_abs_diff_eq!(v_anti, 1.953, epsilon = 1e-3);

        let v_diff = r
            .measure_combo(&QuadratureCombo::phase_difference(0, 1))
            .unwrap();
        let v_psum = r.measure_combo(&QuadratureCombo::phase_sum(0, 1)).unwrap();
        assert_abs_diff_eq!(v_diff, v_sum, epsilon = 1e-12);
        assert_abs_diff_eq!(v_psum, v_anti, epsilon = 1e-12);
        assert!(v_sum * v_psum >= 1.0);
    }

    #[test]
    fn nopa_threshold_error() {
        let p = nopa(1.0, 0.9);
        assert_eq!(
            nopa_transfer(p, at(0.0)).unwrap_err(),
            Error::AboveThreshold(1.0)
        );
    }

    #[test]
    fn nopa_lower_blocks_mirror_negative_frequency() {
        let p = NopaParams {
            kappa_total: 1.0,
            escape_efficiency: 0.8,
            pump_parameter: 0.4,
            pump_phase: 1.1,
            excess_phase_noise: 0.0,
        };
        let plus = nopa_transfer(p, at(0.7)).unwrap();
        let minus = BogoliubovTransfer::new(
            nopa_matrix(&p, -0.7),
            Element::Nopa(p).input_ports(),
            Element::Nopa(p).output_ports(),
        )
        .unwrap();
        assert!(plus.conjugate_structure_error(&minus) < 1e-12);
        let dc = nopa_transfer(p, at(0.0)).unwrap();
        assert!(dc.conjugate_structure_error(&dc) < 1e-12);
    }

    #[test]
    fn random_dilations_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let el = random_element(&mut rng);
            let f = at(rng.gen_range(0.0..3.0));
            let t = el.bogoliubov(f).unwrap();
            assert!(t.symplectic_error() < 1e-9, "{el:?}");
        }
    }

    pub(crate) fn random_element(rng: &mut ChaCha8Rng) -> Element {
        let modes = rng.gen_range(1..=2);
        match rng.gen_range(0..5) {
            0 => Element::BeamSplitter {
                params: BeamSplitterParams::new(rng.gen()).unwrap(),
                modes,
            },
            1 => {
                let l = rng.gen_range(0.0..0.9);
                let r = rng.gen_range(0.0..(1.0 - l));
                Element::Sample {
                    params: ThreePortSample::new(1.0 - l - r, r, l).unwrap(),
                    modes,
                }
            }
            2 => Element::Nopa(NopaParams {
                kappa_total: rng.gen_range(0.1..10.0),
                escape_efficiency: rng.gen_range(0.05..=1.0),
                pump_parameter: rng.gen_range(0.0..0.99),
                pump_phase: rng.gen_range(-PI..PI),
                excess_phase_noise: 0.0,
            }),
            3 => Element::Detector {
                params: DetectionParams::new(rng.gen_range(0.01..=1.0)).unwrap(),
                modes,
            },
            _ => Element::PhaseShift {
                theta: rng.gen_range(-10.0..10.0),
                modes,
            },
        }
    }
}
