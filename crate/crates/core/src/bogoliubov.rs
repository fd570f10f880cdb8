//! Linear transfer matrices on the doubled operator basis.
//!
//! A transfer with `M_in` input modes and `M_out` output modes is a complex
//! `2M_out × 2M_in` matrix acting on `(a_1(Ω) … a_M(Ω), a_1†(−Ω) … a_M†(−Ω))`.
//! Its blocks are `[[A(Ω), B(Ω)], [B(−Ω)*, A(−Ω)*]]`; for frequency-flat
//! elements the lower blocks are plain conjugates of the upper ones.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for `T η T† = η` on complete dilations.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Port {
    pub name: &'static str,
    pub modes: usize,
}

impl Port {
    pub const fn new(name: &'static str, modes: usize) -> Self {
        Self { name, modes }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovTransfer {
    matrix: DMatrix<Complex64>,
    inputs: Vec<Port>,
    outputs: Vec<Port>,
}

impl BogoliubovTransfer {
    pub fn new(matrix: DMatrix<Complex64>, inputs: Vec<Port>, outputs: Vec<Port>) -> Result<Self> {
        let m_in: usize = inputs.iter().map(|p| p.modes).sum();
        let m_out: usize = outputs.iter().map(|p| p.modes).sum();
        if matrix.nrows() != 2 * m_out || matrix.ncols() != 2 * m_in {
            return Err(Error::Contract(format!(
                "transfer matrix is {}x{}, ports require {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                2 * m_out,
                2 * m_in
            )));
        }
        Ok(Self {
            matrix,
            inputs,
            outputs,
        })
    }

    /// Lift a passive mode matrix `U` (no annihilation/creation mixing) to
    /// `[[U, 0], [0, U*]]`.
    pub fn from_mode_matrix(
        u: &DMatrix<Complex64>,
        inputs: Vec<Port>,
        outputs: Vec<Port>,
    ) -> Result<Self> {
        let (r, c) = u.shape();
        let mut m = DMatrix::zeros(2 * r, 2 * c);
        m.view_mut((0, 0), (r, c)).copy_from(u);
        m.view_mut((r, c), (r, c)).copy_from(&u.map(|z| z.conj()));
        Self::new(m, inputs, outputs)
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * modes, 2 * modes),
            inputs: vec![Port::new("in", modes)],
            outputs: vec![Port::new("out", modes)],
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn inputs(&self) -> &[Port] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Port] {
        &self.outputs
    }

    pub fn modes_in(&self) -> usize {
        self.matrix.ncols() / 2
    }

    pub fn modes_out(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// Element `(out_mode, in_mode)` of the annihilation-to-annihilation block.
    pub fn a_block(&self, out_mode: usize, in_mode: usize) -> Complex64 {
        self.matrix[(out_mode, in_mode)]
    }

    /// Element `(out_mode, in_mode)` of the creation-to-annihilation block.
    pub fn b_block(&self, out_mode: usize, in_mode: usize) -> Complex64 {
        self.matrix[(out_mode, self.modes_in() + in_mode)]
    }

    /// `max |T η T† − η|` with `η = diag(I, −I)`. Zero for a complete
    /// unitary dilation.
    pub fn symplectic_error(&self) -> f64 {
        let mo = self.modes_out();
        let mi = self.modes_in();
        let eta_in = eta(mi);
        let eta_out = eta(mo);
        let lhs = &self.matrix * eta_in * self.matrix.adjoint();
        (lhs - eta_out).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_symplectic(&self) -> bool {
        self.modes_in() == self.modes_out() && self.symplectic_error() <= SYMPLECTIC_TOL
    }

    /// Deviation of the lower blocks from the conjugated upper blocks of
    /// `mirror`, the same element evaluated at `−Ω`. Pass `self` for
    /// frequency-flat elements.
    pub fn conjugate_structure_error(&self, mirror: &BogoliubovTransfer) -> f64 {
        let mo = self.modes_out();
        let mi = self.modes_in();
        let mut worst = 0.0f64;
        for r in 0..mo {
            for c in 0..mi {
                // lower-left vs conj(B(−Ω)), lower-right vs conj(A(−Ω))
                let ll = self.matrix[(mo + r, c)] - mirror.matrix[(r, mi + c)].conj();
                let lr = self.matrix[(mo + r, mi + c)] - mirror.matrix[(r, c)].conj();
                worst = worst.max(ll.norm()).max(lr.norm());
            }
        }
        worst
    }

    /// Series composition: `next ∘ self`.
    pub fn then(&self, next: &BogoliubovTransfer) -> Result<BogoliubovTransfer> {
        if next.modes_in() != self.modes_out() {
            return Err(Error::Contract(format!(
                "cannot chain {} output modes into {} input modes",
                self.modes_out(),
                next.modes_in()
            )));
        }
        Self::new(
            &next.matrix * &self.matrix,
            self.inputs.clone(),
            next.outputs.clone(),
        )
    }
}

pub(crate) fn eta(modes: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(2 * modes, 2 * modes, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else if i < modes {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    })
}
