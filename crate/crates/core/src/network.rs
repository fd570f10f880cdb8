//! Port-graph assembly and self-consistent loop closure.
//!
//! Every connected input port becomes an internal variable `x`; every
//! vacuum-driven input port contributes to `u`; additive classical noise
//! goes into `ξ`. The graph gives `x = A x + B_u u + B_ξ ξ`, which is
//! closed by one dense solve of `(I − A)`, summing every round trip of
//! every loop exactly.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bogoliubov::{BogoliubovTransfer, Port};
use crate::elements::{Element, ElementTransfer};
use crate::error::{Error, Result};
use crate::spectrum::{
    hermitian_to_spectrum, physicality_check, quadrature_matrix, NoiseSpectrum, QuadratureCombo,
};
use crate::units::AnalysisFrequency;

/// Above this condition number of `(I − A)` the loop is treated as having
/// reached oscillation threshold.
pub const MAX_LOOP_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn input(self, port: usize) -> PortRef {
        PortRef {
            element: self.0,
            port,
        }
    }

    pub fn output(self, port: usize) -> PortRef {
        PortRef {
            element: self.0,
            port,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PortRef {
    pub element: usize,
    pub port: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub from: PortRef,
    pub to: PortRef,
    /// Carrier phase θ accumulated along the connection.
    pub phase: f64,
    /// Sideband phase `Ω·ℓ/c` from the propagation delay.
    pub sideband_phase: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Network {
    elements: Vec<Element>,
    connections: Vec<Connection>,
    sources: Vec<PortRef>,
    sinks: Vec<PortRef>,
}

#[derive(Debug, Clone)]
pub struct LoopSolveResult {
    /// Map from all vacuum sources to all sinks.
    pub total_transfer: BogoliubovTransfer,
    /// Map from classical noise inputs to all sinks, with their variances.
    pub classical_transfer: DMatrix<Complex64>,
    pub classical_variances: Vec<f64>,
    /// Condition number of `(I − A)`; 1 when there are no internal edges.
    pub loop_condition: f64,
    pub spectrum: NoiseSpectrum,
}

impl LoopSolveResult {
    pub fn measure_combo(&self, combo: &QuadratureCombo) -> Result<f64> {
        self.spectrum.variance(combo)
    }
}

/// Index bookkeeping shared by `solve` and `loop_gain_margin`.
struct Layout {
    transfers: Vec<ElementTransfer>,
    /// Per element, per input mode: internal slot or source slot.
    input_slots: Vec<Vec<Slot>>,
    /// Offset of each element's classical inputs in ξ.
    classical_offset: Vec<usize>,
    n_internal: usize,
    n_source: usize,
    n_classical: usize,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Internal(usize),
    Source(usize),
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    /// One element with every input a vacuum source and every output a sink.
    pub fn single(element: Element) -> Self {
        let mut net = Self::new();
        let n_in = element.input_ports().len();
        let n_out = element.output_ports().len();
        let id = net.add(element);
        for p in 0..n_in {
            net.source(id.input(p));
        }
        for p in 0..n_out {
            net.sink(id.output(p));
        }
        net
    }

    pub fn add(&mut self, element: Element) -> ElementId {
        self.elements.push(element);
        ElementId(self.elements.len() - 1)
    }

    pub fn connect(&mut self, from: PortRef, to: PortRef, phase: f64) -> &mut Self {
        self.connect_delayed(from, to, phase, 0.0)
    }

    pub fn connect_delayed(
        &mut self,
        from: PortRef,
        to: PortRef,
        phase: f64,
        sideband_phase: f64,
    ) -> &mut Self {
        self.connections.push(Connection {
            from,
            to,
            phase,
            sideband_phase,
        });
        self
    }

    pub fn source(&mut self, port: PortRef) -> &mut Self {
        self.sources.push(port);
        self
    }

    pub fn sink(&mut self, port: PortRef) -> &mut Self {
        self.sinks.push(port);
        self
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn elements_mut(&mut self) -> &mut [Element] {
        &mut self.elements
    }

    pub fn connections(&self) -> &[Connection] {
        &self.connections
    }

    pub fn sinks(&self) -> &[PortRef] {
        &self.sinks
    }

    /// Total number of modes across all sinks.
    pub fn sink_modes(&self) -> usize {
        self.sinks
            .iter()
            .filter_map(|s| self.output_port(*s).ok())
            .map(|p| p.modes)
            .sum()
    }

    fn input_port(&self, r: PortRef) -> Result<Port> {
        let el = self
            .elements
            .get(r.element)
            .ok_or_else(|| Error::Structural(format!("no element {}", r.element)))?;
        el.input_ports().get(r.port).cloned().ok_or_else(|| {
            Error::Structural(format!(
                "element {} has no input port {}",
                r.element, r.port
            ))
        })
    }

    fn output_port(&self, r: PortRef) -> Result<Port> {
        let el = self
            .elements
            .get(r.element)
            .ok_or_else(|| Error::Structural(format!("no element {}", r.element)))?;
        el.output_ports().get(r.port).cloned().ok_or_else(|| {
            Error::Structural(format!(
                "element {} has no output port {}",
                r.element, r.port
            ))
        })
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let mut feeds: HashMap<PortRef, usize> = HashMap::new();
        let mut driven: HashMap<PortRef, usize> = HashMap::new();
        for c in &self.connections {
            let out = self.output_port(c.from)?;
            let inp = self.input_port(c.to)?;
            if out.modes != inp.modes {
                return Err(Error::Structural(format!(
                    "connection {:?} -> {:?} joins {} modes to {} modes",
                    c.from, c.to, out.modes, inp.modes
                )));
            }
            if !c.phase.is_finite() || !c.sideband_phase.is_finite() {
                return Err(Error::Structural("connection phase must be finite".into()));
            }
            *feeds.entry(c.from).or_default() += 1;
            *driven.entry(c.to).or_default() += 1;
        }
        for s in &self.sources {
            self.input_port(*s)?;
            *driven.entry(*s).or_default() += 1;
        }
        for (e, el) in self.elements.iter().enumerate() {
            for p in 0..el.input_ports().len() {
                let r = PortRef {
                    element: e,
                    port: p,
                };
                match driven.get(&r).copied().unwrap_or(0) {
                    1 => {}
                    0 => {
                        return Err(Error::Structural(format!(
                            "dangling input port {p} ({}) of element {e}",
                            el.input_ports()[p].name
                        )))
                    }
                    n => {
                        return Err(Error::Structural(format!(
                            "input port {p} of element {e} is driven {n} times"
                        )))
                    }
                }
            }
        }
        if let Some((r, _)) = feeds.iter().find(|(_, &n)| n > 1) {
            return Err(Error::Structural(format!(
                "output port {r:?} feeds more than one connection"
            )));
        }
        if self.sinks.is_empty() {
            return Err(Error::Structural("network has no sinks".into()));
        }
        let mut seen = Vec::new();
        for s in &self.sinks {
            self.output_port(*s)?;
            if feeds.contains_key(s) {
                return Err(Error::Structural(format!(
                    "sink {s:?} also feeds a connection"
                )));
            }
            if seen.contains(s) {
                return Err(Error::Structural(format!("sink {s:?} listed twice")));
            }
            seen.push(*s);
        }
        Ok(())
    }

    fn layout(&self, f: AnalysisFrequency) -> Result<Layout> {
        self.validate()?;
        let transfers = self
            .elements
            .iter()
            .map(|e| e.transfer(f))
            .collect::<Result<Vec<_>>>()?;

        let target_of: HashMap<PortRef, usize> = self
            .connections
            .iter()
            .enumerate()
            .map(|(i, c)| (c.to, i))
            .collect();

        let mut n_internal = 0;
        let mut n_source = 0;
        let mut input_slots = Vec::with_capacity(self.elements.len());
        // Sources are numbered in declaration order so the total transfer's
        // columns follow `self.sources`.
        let mut source_base: HashMap<PortRef, usize> = HashMap::new();
        for s in &self.sources {
            source_base.insert(*s, n_source);
            n_source += self.input_port(*s)?.modes;
        }
        for (e, el) in self.elements.iter().enumerate() {
            let mut slots = Vec::new();
            for (p, port) in el.input_ports().iter().enumerate() {
                let r = PortRef {
                    element: e,
                    port: p,
                };
                if target_of.contains_key(&r) {
                    for _ in 0..port.modes {
                        slots.push(Slot::Internal(n_internal));
                        n_internal += 1;
                    }
                } else {
                    let base = source_base[&r];
                    slots.extend((0..port.modes).map(|k| Slot::Source(base + k)));
                }
            }
            input_slots.push(slots);
        }

        let mut classical_offset = Vec::with_capacity(transfers.len());
        let mut n_classical = 0;
        for t in &transfers {
            classical_offset.push(n_classical);
            n_classical += t.classical_variances.len();
        }

        Ok(Layout {
            transfers,
            input_slots,
            classical_offset,
            n_internal,
            n_source,
            n_classical,
        })
    }

    /// First output-row index of port `port` within an element.
    fn output_mode_offset(&self, r: PortRef) -> usize {
        self.elements[r.element].output_ports()[..r.port]
            .iter()
            .map(|p| p.modes)
            .sum()
    }

    fn input_mode_offset(&self, r: PortRef) -> usize {
        self.elements[r.element].input_ports()[..r.port]
            .iter()
            .map(|p| p.modes)
            .sum()
    }

    /// Rows of an element output expressed over `[x_a, x_a†]` (internal),
    /// `[u_a, u_a†]` (sources) and ξ. Returns the a-row and a†-row triples.
    #[allow(clippy::type_complexity)]
    fn output_rows(
        &self,
        lay: &Layout,
        element: usize,
        out_mode: usize,
    ) -> [(Vec<Complex64>, Vec<Complex64>, Vec<Complex64>); 2] {
        let t = &lay.transfers[element];
        let m = t.bogoliubov.matrix();
        let mi = t.bogoliubov.modes_in();
        let mo = t.bogoliubov.modes_out();
        let zero = Complex64::new(0.0, 0.0);
        let mut rows = [
            (
                vec![zero; 2 * lay.n_internal],
                vec![zero; 2 * lay.n_source],
                vec![zero; lay.n_classical],
            ),
            (
                vec![zero; 2 * lay.n_internal],
                vec![zero; 2 * lay.n_source],
                vec![zero; lay.n_classical],
            ),
        ];
        for (half, row) in [out_mode, mo + out_mode].into_iter().enumerate() {
            let (xr, ur, cr) = &mut rows[half];
            for (j, slot) in lay.input_slots[element].iter().enumerate() {
                let ca = m[(row, j)];
                let cd = m[(row, mi + j)];
                match *slot {
                    Slot::Internal(s) => {
                        xr[s] += ca;
                        xr[lay.n_internal + s] += cd;
                    }
                    Slot::Source(s) => {
                        ur[s] += ca;
                        ur[lay.n_source + s] += cd;
                    }
                }
            }
            let off = lay.classical_offset[element];
            for k in 0..t.classical_variances.len() {
                cr[off + k] += t.classical[(row, k)];
            }
        }
        rows
    }

    /// Assemble `A`, `B_u`, `B_ξ` of the internal-edge system.
    fn loop_system(
        &self,
        lay: &Layout,
    ) -> (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
        let nx = lay.n_internal;
        let mut a = DMatrix::zeros(2 * nx, 2 * nx);
        let mut bu = DMatrix::zeros(2 * nx, 2 * lay.n_source);
        let mut bc = DMatrix::zeros(2 * nx, lay.n_classical);
        for c in &self.connections {
            let modes = self.elements[c.from.element].output_ports()[c.from.port].modes;
            let out_off = self.output_mode_offset(c.from);
            let in_off = self.input_mode_offset(c.to);
            // a(Ω) gains e^{i(θ+φ)}, a†(−Ω) gains e^{−i(θ−φ)}
            let ph = [
                Complex64::from_polar(1.0, c.phase + c.sideband_phase),
                Complex64::from_polar(1.0, -(c.phase - c.sideband_phase)),
            ];
            for k in 0..modes {
                let slot = match lay.input_slots[c.to.element][in_off + k] {
                    Slot::Internal(s) => s,
                    Slot::Source(_) => unreachable!("connection target is internal"),
                };
                let rows = self.output_rows(lay, c.from.element, out_off + k);
                for (half, (xr, ur, cr)) in rows.iter().enumerate() {
                    let r = half * nx + slot;
                    for (col, v) in xr.iter().enumerate() {
                        a[(r, col)] = ph[half] * v;
                    }
                    for (col, v) in ur.iter().enumerate() {
                        bu[(r, col)] = ph[half] * v;
                    }
                    for (col, v) in cr.iter().enumerate() {
                        bc[(r, col)] = ph[half] * v;
                    }
                }
            }
        }
        (a, bu, bc)
    }

    /// Solve the network at one analysis frequency.
    pub fn solve(&self, f: AnalysisFrequency) -> Result<LoopSolveResult> {
        let lay = self.layout(f)?;
        let nx = lay.n_internal;
        let (a, bu, bc) = self.loop_system(&lay);

        let (x_u, x_c, loop_condition) = if nx == 0 {
            (bu, bc, 1.0)
        } else {
            let m = DMatrix::<Complex64>::identity(2 * nx, 2 * nx) - a;
            let sv = m.clone().singular_values();
            let smax = sv.max();
            let smin = sv.min();
            let cond = if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            };
            if cond.is_nan() || cond > MAX_LOOP_CONDITION {
                return Err(Error::Instability { condition: cond });
            }
            let lu = m.lu();
            let x_u = lu.solve(&bu).ok_or(Error::Instability {
                condition: f64::INFINITY,
            })?;
            let x_c = lu.solve(&bc).ok_or(Error::Instability {
                condition: f64::INFINITY,
            })?;
            (x_u, x_c, cond)
        };

        let ny = self.sink_modes();
        let mut tot_u = DMatrix::zeros(2 * ny, 2 * lay.n_source);
        let mut tot_c = DMatrix::zeros(2 * ny, lay.n_classical);
        let mut y = 0;
        for s in &self.sinks {
            let modes = self.output_port(*s)?.modes;
            let off = self.output_mode_offset(*s);
            for k in 0..modes {
                let rows = self.output_rows(&lay, s.element, off + k);
                for (half, (xr, ur, cr)) in rows.iter().enumerate() {
                    let r = half * ny + y;
                    for col in 0..2 * lay.n_source {
                        let mut v = ur[col];
                        for (i, xv) in xr.iter().enumerate() {
                            v += xv * x_u[(i, col)];
                        }
                        tot_u[(r, col)] = v;
                    }
                    for col in 0..lay.n_classical {
                        let mut v = cr[col];
                        for (i, xv) in xr.iter().enumerate() {
                            v += xv * x_c[(i, col)];
                        }
                        tot_c[(r, col)] = v;
                    }
                }
                y += 1;
            }
        }

        let classical_variances: Vec<f64> = lay
            .transfers
            .iter()
            .flat_map(|t| t.classical_variances.iter().copied())
            .collect();

        let q = quadrature_matrix(ny);
        let qt = &q * &tot_u;
        let mut g = &qt * qt.adjoint() * Complex64::new(0.5, 0.0);
        if lay.n_classical > 0 {
            let qc = &q * &tot_c;
            let v = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                classical_variances.len(),
                classical_variances.iter().map(|&v| Complex64::new(v, 0.0)),
            ));
            g += &qc * v * qc.adjoint();
        }
        let spectrum = hermitian_to_spectrum(&g);
        let phys = physicality_check(&spectrum)?;
        if !phys.passed {
            return Err(Error::Unphysical {
                min_eigenvalue: phys.min_eigenvalue,
            });
        }

        let in_ports = self
            .sources
            .iter()
            .map(|s| self.input_port(*s).map(|p| Port::new(p.name, p.modes)))
            .collect::<Result<Vec<_>>>()?;
        let out_ports = self
            .sinks
            .iter()
            .map(|s| self.output_port(*s))
            .collect::<Result<Vec<_>>>()?;
        let total_transfer = BogoliubovTransfer::new(tot_u, in_ports, out_ports)?;

        Ok(LoopSolveResult {
            total_transfer,
            classical_transfer: tot_c,
            classical_variances,
            loop_condition,
            spectrum,
        })
    }

    /// Spectral radius of the loop matrix `A`; 0 without internal edges.
    pub fn loop_gain_margin(&self, f: AnalysisFrequency) -> Result<f64> {
        let lay = self.layout(f)?;
        if lay.n_internal == 0 {
            return Ok(0.0);
        }
        let (a, _, _) = self.loop_system(&lay);
        Ok(spectral_radius(a))
    }
}

pub(crate) fn spectral_radius(m: DMatrix<Complex64>) -> f64 {
    let (_, t) = m.schur().unpack();
    t.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max)
}
