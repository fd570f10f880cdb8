//! Quadrature noise spectra, linear quadrature combinations and the
//! entanglement / physicality tests that consume them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bogoliubov::BogoliubovTransfer;
use crate::error::{Error, Result};

/// Symmetry tolerance on spectrum matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Lowest admissible eigenvalue of `S + iΣ`.
pub const PHYSICALITY_TOL: f64 = -1e-9;
/// Duan bound for two modes in shot-noise units.
pub const DUAN_BOUND: f64 = 2.0;

/// Real symmetric `2N × 2N` matrix of quadrature noise spectral densities in
/// the basis `(X_1 … X_N, Y_1 … Y_N)`. Vacuum is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpectrum {
    matrix: DMatrix<f64>,
}

impl NoiseSpectrum {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || !n.is_multiple_of(2) {
            return Err(Error::Contract(format!(
                "spectrum must be square with even dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = symmetry_error(&matrix);
        if asym > SYMMETRY_TOL {
            return Err(Error::Contract(format!(
                "spectrum is not symmetric (max |S - S^T| = {asym:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Single-mode spectrum `diag(vx, vy)`.
    pub fn single_mode(vx: f64, vy: f64) -> Self {
        Self {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![vx, vy])),
        }
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn x_index(&self, mode: usize) -> usize {
        mode
    }

    pub fn y_index(&self, mode: usize) -> usize {
        self.modes() + mode
    }

    /// Variance of a quadrature combination.
    pub fn variance(&self, combo: &QuadratureCombo) -> Result<f64> {
        let n = self.modes();
        let mut w = vec![0.0; 2 * n];
        for term in &combo.terms {
            if term.mode >= n {
                return Err(Error::Contract(format!(
                    "combo references mode {} but only {n} sink modes exist",
                    term.mode
                )));
            }
            w[term.mode] += term.x;
            w[n + term.mode] += term.y;
        }
        let mut acc = 0.0;
        for i in 0..2 * n {
            if w[i] == 0.0 {
                continue;
            }
            for j in 0..2 * n {
                acc += w[i] * self.matrix[(i, j)] * w[j];
            }
        }
        Ok(acc * combo.normalization * combo.normalization)
    }

    /// Propagate this spectrum through a transfer whose inputs are exactly
    /// the modes of `self`.
    pub fn through(&self, t: &BogoliubovTransfer) -> Result<NoiseSpectrum> {
        let n = self.modes();
        if t.modes_in() != n {
            return Err(Error::Contract(format!(
                "transfer expects {} input modes, spectrum has {n}",
                t.modes_in()
            )));
        }
        let q_inv = inverse_quadrature_matrix(n);
        let s = self.matrix.map(|v| Complex64::new(v, 0.0));
        let gamma = &q_inv * s * q_inv.adjoint();
        let q = quadrature_matrix(t.modes_out());
        let qt = q * t.matrix();
        Ok(hermitian_to_spectrum(&(&qt * gamma * qt.adjoint())))
    }

    /// Largest absolute deviation from the vacuum spectrum.
    pub fn distance_from_vacuum(&self) -> f64 {
        let n = self.matrix.nrows();
        (&self.matrix - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// Rows `X_j = a_j + a_j†`, `Y_j = −i(a_j − a_j†)` over the doubled basis.
pub(crate) fn quadrature_matrix(modes: usize) -> DMatrix<Complex64> {
    let mut q = DMatrix::zeros(2 * modes, 2 * modes);
    let i = Complex64::new(0.0, 1.0);
    for j in 0..modes {
        q[(j, j)] = Complex64::new(1.0, 0.0);
        q[(j, modes + j)] = Complex64::new(1.0, 0.0);
        q[(modes + j, j)] = -i;
        q[(modes + j, modes + j)] = i;
    }
    q
}

fn inverse_quadrature_matrix(modes: usize) -> DMatrix<Complex64> {
    let mut q = DMatrix::zeros(2 * modes, 2 * modes);
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, 0.5);
    for j in 0..modes {
        q[(j, j)] = half;
        q[(j, modes + j)] = half_i;
        q[(modes + j, j)] = half;
        q[(modes + j, modes + j)] = -half_i;
    }
    q
}

/// Symmetrized real part of a Hermitian quadrature spectral matrix; the
/// average of the `+Ω` and `−Ω` spectra.
pub(crate) fn hermitian_to_spectrum(g: &DMatrix<Complex64>) -> NoiseSpectrum {
    let re = g.map(|z| z.re);
    let sym = (&re + re.transpose()) * 0.5;
    NoiseSpectrum { matrix: sym }
}

fn symmetry_error(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComboTerm {
    pub mode: usize,
    pub x: f64,
    pub y: f64,
}

/// `normalization · Σ_j (x_j X_j + y_j Y_j)` over sink modes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureCombo {
    terms: Vec<ComboTerm>,
    normalization: f64,
}

impl QuadratureCombo {
    pub fn new(terms: Vec<ComboTerm>, normalization: f64) -> Result<Self> {
        if !normalization.is_finite() || normalization == 0.0 {
            return Err(Error::Contract(
                "combo normalization must be finite and nonzero".into(),
            ));
        }
        if !terms.iter().any(|t| t.x != 0.0 || t.y != 0.0) {
            return Err(Error::Contract(
                "combo needs at least one nonzero coefficient".into(),
            ));
        }
        if terms.iter().any(|t| !t.x.is_finite() || !t.y.is_finite()) {
            return Err(Error::Contract("combo coefficients must be finite".into()));
        }
        Ok(Self {
            terms,
            normalization,
        })
    }

    /// `(X_i + X_j)/√2`.
    pub fn amplitude_sum(i: usize, j: usize) -> Self {
        Self {
            terms: vec![
                ComboTerm {
                    mode: i,
                    x: 1.0,
                    y: 0.0,
                },
                ComboTerm {
                    mode: j,
                    x: 1.0,
                    y: 0.0,
                },
            ],
            normalization: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    /// `(X_i − X_j)/√2`.
    pub fn amplitude_difference(i: usize, j: usize) -> Self {
        Self {
            terms: vec![
                ComboTerm {
                    mode: i,
                    x: 1.0,
                    y: 0.0,
                },
                ComboTerm {
                    mode: j,
                    x: -1.0,
                    y: 0.0,
                },
            ],
            normalization: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    /// `(Y_i − Y_j)/√2`.
    pub fn phase_difference(i: usize, j: usize) -> Self {
        Self {
            terms: vec![
                ComboTerm {
                    mode: i,
                    x: 0.0,
                    y: 1.0,
                },
                ComboTerm {
                    mode: j,
                    x: 0.0,
                    y: -1.0,
                },
            ],
            normalization: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    /// `(Y_i + Y_j)/√2`.
    pub fn phase_sum(i: usize, j: usize) -> Self {
        Self {
            terms: vec![
                ComboTerm {
                    mode: i,
                    x: 0.0,
                    y: 1.0,
                },
                ComboTerm {
                    mode: j,
                    x: 0.0,
                    y: 1.0,
                },
            ],
            normalization: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn x(mode: usize) -> Self {
        Self {
            terms: vec![ComboTerm {
                mode,
                x: 1.0,
                y: 0.0,
            }],
            normalization: 1.0,
        }
    }

    pub fn y(mode: usize) -> Self {
        Self {
            terms: vec![ComboTerm {
                mode,
                x: 0.0,
                y: 1.0,
            }],
            normalization: 1.0,
        }
    }

    pub fn terms(&self) -> &[ComboTerm] {
        &self.terms
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn max_mode(&self) -> usize {
        self.terms.iter().map(|t| t.mode).max().unwrap_or(0)
    }
}

/// Duan inseparability sum of the `(X1+X2)/√2` and `(Y1−Y2)/√2` variances.
/// Values strictly below [`DUAN_BOUND`] certify entanglement.
pub fn duan_sum(v_sum: f64, v_diff: f64) -> Result<f64> {
    if v_sum.is_nan() || v_sum <= 0.0 || v_diff.is_nan() || v_diff <= 0.0 {
        return Err(Error::Domain(format!(
            "Duan variances must be > 0, got ({v_sum}, {v_diff})"
        )));
    }
    Ok(v_sum + v_diff)
}

pub fn is_entangled(duan: f64) -> bool {
    duan < DUAN_BOUND
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub passed: bool,
    pub min_eigenvalue: f64,
}

/// Canonical form Σ coupling `X_j` to `Y_j`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut sigma = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        sigma[(j, modes + j)] = 1.0;
        sigma[(modes + j, j)] = -1.0;
    }
    sigma
}

/// Uncertainty-principle test: all eigenvalues of the Hermitian matrix
/// `S + iΣ` must be at least [`PHYSICALITY_TOL`].
pub fn physicality_check(s: &NoiseSpectrum) -> Result<Physicality> {
    let asym = symmetry_error(&s.matrix);
    if asym > SYMMETRY_TOL {
        return Err(Error::Contract(format!(
            "spectrum is not symmetric (max |S - S^T| = {asym:.3e})"
        )));
    }
    let n = s.modes();
    let sigma = symplectic_form(n);
    let h = DMatrix::<Complex64>::from_fn(2 * n, 2 * n, |i, j| {
        Complex64::new(s.matrix[(i, j)], sigma[(i, j)])
    });
    let min_eigenvalue = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(Physicality {
        passed: min_eigenvalue >= PHYSICALITY_TOL,
        min_eigenvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn duan_examples() {
        let d = duan_sum(1.0, 1.0).unwrap();
        assert_eq!(d, 2.0);
        assert!(!is_entangled(d));

        let d = duan_sum(0.5370, 0.6166).unwrap();
        assert_abs_diff_eq!(d, 1.154, epsilon = 1e-3);
        assert!(is_entangled(d));

        let d = duan_sum(0.6026, 0.6918).unwrap();
        assert_abs_diff_eq!(d, 1.294, epsilon = 1e-3);
        assert!(is_entangled(d));

        assert!(duan_sum(0.0, 1.0).is_err());
    }

    #[test]
    fn physicality_examples() {
        let p = physicality_check(&NoiseSpectrum::vacuum(1)).unwrap();
        assert!(p.passed);
        assert_abs_diff_eq!(p.min_eigenvalue, 0.0, epsilon = 1e-12);

        assert!(
            physicality_check(&NoiseSpectrum::single_mode(0.5, 2.0))
                .unwrap()
                .passed
        );

        let bad = physicality_check(&NoiseSpectrum::single_mode(0.5, 0.5)).unwrap();
        assert!(!bad.passed);
        assert_abs_diff_eq!(bad.min_eigenvalue, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn asymmetric_spectrum_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(NoiseSpectrum::new(m), Err(Error::Contract(_))));
    }

    #[test]
    fn combo_variance_on_vacuum() {
        let s = NoiseSpectrum::vacuum(2);
        for c in [
            QuadratureCombo::amplitude_sum(0, 1),
            QuadratureCombo::phase_difference(0, 1),
            QuadratureCombo::x(1),
        ] {
            assert_abs_diff_eq!(s.variance(&c).unwrap(), 1.0, epsilon = 1e-15);
        }
        assert!(s.variance(&QuadratureCombo::x(2)).is_err());
    }

    #[test]
    fn empty_combo_rejected() {
        assert!(QuadratureCombo::new(
            vec![ComboTerm {
                mode: 0,
                x: 0.0,
                y: 0.0
            }],
            1.0
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn duan_symmetric_and_monotone(a in 0.01f64..5.0, b in 0.01f64..5.0, eps in 1e-6f64..1.0) {
            prop_assert_eq!(duan_sum(a, b).unwrap(), duan_sum(b, a).unwrap());
            prop_assert!(duan_sum(a + eps, b).unwrap() > duan_sum(a, b).unwrap());
            prop_assert!(duan_sum(a, b + eps).unwrap() > duan_sum(a, b).unwrap());
        }

        #[test]
        fn loss_composition_law(d in 0.2f64..2.0, split in 0.05f64..0.95, t in 1e-3f64..=1.0) {
            // identical loss T on both combos maps D -> 2 - T(2 - D)
            let v1 = d * split;
            let v2 = d - v1;
            let after = duan_sum(t * v1 + 1.0 - t, t * v2 + 1.0 - t).unwrap();
            prop_assert!((after - (2.0 - t * (2.0 - d))).abs() < 1e-12);
            if d < 2.0 {
                prop_assert!(is_entangled(after));
            }
        }
    }
}
