//! Gate-list circuit IR.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::state::{self, QubitSpan, StateVector};
use crate::units::{canonical_turns, turns_to_radians};

/// Largest circuit whose dense unitary [`Circuit::unitary`] will build.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Gate payload. Angles are in turns, canonicalized to (−0.5, 0.5].
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    /// `diag(1, e^{2πi t})`.
    Rz(f64),
    /// `[[cos 2πt, −sin 2πt], [sin 2πt, cos 2πt]]`.
    Ry(f64),
    Cnot,
    Toffoli,
    /// Controlled `Rz`; equal as a matrix to [`GateKind::Cphase`] but kept
    /// distinct for census and export.
    Crz(f64),
    Cphase(f64),
    Swap,
    Cry(f64),
    /// `diag(e^{2πi·phases[k]})` where `k` is the value on the operands.
    Diagonal(Vec<f64>),
    /// Dense unitary on the trailing `log2(dim)` operands, controlled by the
    /// leading ones.
    Unitary(DMatrix<Complex64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateClass {
    H,
    X,
    Rz,
    Ry,
    Cnot,
    Toffoli,
    Crz,
    Cphase,
    Swap,
    Cry,
    Composite,
}

impl GateClass {
    pub const ALL: [GateClass; 11] = [
        GateClass::H,
        GateClass::X,
        GateClass::Rz,
        GateClass::Ry,
        GateClass::Cnot,
        GateClass::Toffoli,
        GateClass::Crz,
        GateClass::Cphase,
        GateClass::Swap,
        GateClass::Cry,
        GateClass::Composite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateClass::H => "h",
            GateClass::X => "x",
            GateClass::Rz => "rz",
            GateClass::Ry => "ry",
            GateClass::Cnot => "cnot",
            GateClass::Toffoli => "toffoli",
            GateClass::Crz => "crz",
            GateClass::Cphase => "cphase",
            GateClass::Swap => "swap",
            GateClass::Cry => "cry",
            GateClass::Composite => "composite",
        }
    }
}

impl fmt::Display for GateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for GateClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A gate kind applied to ordered operands (controls precede targets).
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    fn raw(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self { kind, qubits }
    }

    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::H, vec![q])
    }
    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::X, vec![q])
    }
    pub fn rz(q: usize, turns: f64) -> Self {
        Self::raw(GateKind::Rz(canonical_turns(turns)), vec![q])
    }
    pub fn ry(q: usize, turns: f64) -> Self {
        Self::raw(GateKind::Ry(canonical_turns(turns)), vec![q])
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::raw(GateKind::Cnot, vec![control, target])
    }
    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Self::raw(GateKind::Toffoli, vec![c0, c1, target])
    }
    pub fn crz(control: usize, target: usize, turns: f64) -> Self {
        Self::raw(GateKind::Crz(canonical_turns(turns)), vec![control, target])
    }
    pub fn cphase(a: usize, b: usize, turns: f64) -> Self {
        Self::raw(GateKind::Cphase(canonical_turns(turns)), vec![a, b])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self::raw(GateKind::Swap, vec![a, b])
    }
    pub fn cry(control: usize, target: usize, turns: f64) -> Self {
        Self::raw(GateKind::Cry(canonical_turns(turns)), vec![control, target])
    }

    /// Diagonal phase gate; `phases.len()` must equal `2^qubits.len()`.
    pub fn diagonal(qubits: Vec<usize>, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != 1usize << qubits.len() {
            return Err(domain!(
                "diagonal on {} qubits needs {} phases, got {}",
                qubits.len(),
                1usize << qubits.len(),
                phases.len()
            ));
        }
        let phases = phases.into_iter().map(canonical_turns).collect();
        Ok(Self::raw(GateKind::Diagonal(phases), qubits))
    }

    /// Opaque (optionally controlled) unitary. The matrix acts on the last
    /// `log2(dim)` operands; any operands before them are controls.
    pub fn unitary(qubits: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if !matrix.is_square() || !dim.is_power_of_two() || dim < 2 {
            return Err(domain!("opaque unitary must be a square power-of-two matrix"));
        }
        let width = dim.trailing_zeros() as usize;
        if width > qubits.len() {
            return Err(domain!("{}-qubit matrix given only {} operands", width, qubits.len()));
        }
        if !state::is_unitary(&matrix, state::UNITARY_TOL) {
            return Err(Error::Validation("opaque matrix is not unitary within 1e-10".into()));
        }
        Ok(Self::raw(GateKind::Unitary(matrix), qubits))
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn arity(&self) -> Option<usize> {
        match self.kind {
            GateKind::H | GateKind::X | GateKind::Rz(_) | GateKind::Ry(_) => Some(1),
            GateKind::Cnot | GateKind::Crz(_) | GateKind::Cphase(_) | GateKind::Swap | GateKind::Cry(_) => Some(2),
            GateKind::Toffoli => Some(3),
            GateKind::Diagonal(_) | GateKind::Unitary(_) => None,
        }
    }

    pub fn class(&self) -> GateClass {
        match self.kind {
            GateKind::H => GateClass::H,
            GateKind::X => GateClass::X,
            GateKind::Rz(_) => GateClass::Rz,
            GateKind::Ry(_) => GateClass::Ry,
            GateKind::Cnot => GateClass::Cnot,
            GateKind::Toffoli => GateClass::Toffoli,
            GateKind::Crz(_) => GateClass::Crz,
            GateKind::Cphase(_) => GateClass::Cphase,
            GateKind::Swap => GateClass::Swap,
            GateKind::Cry(_) => GateClass::Cry,
            GateKind::Diagonal(_) | GateKind::Unitary(_) => GateClass::Composite,
        }
    }

    pub fn is_composite(&self) -> bool {
        self.class() == GateClass::Composite
    }

    pub fn adjoint(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::Rz(t) => GateKind::Rz(canonical_turns(-t)),
            GateKind::Ry(t) => GateKind::Ry(canonical_turns(-t)),
            GateKind::Crz(t) => GateKind::Crz(canonical_turns(-t)),
            GateKind::Cphase(t) => GateKind::Cphase(canonical_turns(-t)),
            GateKind::Cry(t) => GateKind::Cry(canonical_turns(-t)),
            GateKind::Diagonal(p) => GateKind::Diagonal(p.iter().map(|t| canonical_turns(-t)).collect()),
            GateKind::Unitary(m) => GateKind::Unitary(m.adjoint()),
            other => other.clone(),
        };
        Gate::raw(kind, self.qubits.clone())
    }

    /// Relabels operands: qubit `q` becomes `map[q]`.
    pub fn remap(&self, map: &[usize]) -> Gate {
        Gate::raw(self.kind.clone(), self.qubits.iter().map(|&q| map[q]).collect())
    }

    fn mask(qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |m, &q| m | 1 << q)
    }

    /// Applies the gate; operands must already be validated.
    pub(crate) fn apply(&self, s: &mut StateVector) {
        let q = &self.qubits;
        match &self.kind {
            GateKind::H => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                s.apply_single([[h, h], [h, -h]], q[0], 0);
            }
            GateKind::X => s.apply_flip(q[0], 0),
            GateKind::Rz(t) => s.apply_phase_mask(1 << q[0], *t),
            GateKind::Ry(t) => s.apply_single(ry_matrix(*t), q[0], 0),
            GateKind::Cnot => s.apply_flip(q[1], 1 << q[0]),
            GateKind::Toffoli => s.apply_flip(q[2], Self::mask(&q[..2])),
            GateKind::Crz(t) | GateKind::Cphase(t) => s.apply_phase_mask(Self::mask(q), *t),
            GateKind::Swap => s.apply_swap(q[0], q[1], 0),
            GateKind::Cry(t) => s.apply_single(ry_matrix(*t), q[1], 1 << q[0]),
            GateKind::Diagonal(p) => s.apply_diagonal_unchecked(p, q, &[]),
            GateKind::Unitary(m) => {
                let width = m.nrows().trailing_zeros() as usize;
                let split = q.len() - width;
                s.apply_matrix_unchecked(m, &q[..split], &q[split..]);
            }
        }
    }
}

fn ry_matrix(t: f64) -> [[Complex64; 2]; 2] {
    let (sin, cos) = turns_to_radians(t).sin_cos();
    let (c, s) = (Complex64::new(cos, 0.0), Complex64::new(sin, 0.0));
    [[c, -s], [s, c]]
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GateKind::Rz(t) | GateKind::Ry(t) | GateKind::Crz(t) | GateKind::Cphase(t) | GateKind::Cry(t) => {
                write!(f, "{}({t}) {:?}", self.class(), self.qubits)
            }
            GateKind::Diagonal(_) => write!(f, "diagonal {:?}", self.qubits),
            GateKind::Unitary(_) => write!(f, "unitary {:?}", self.qubits),
            _ => write!(f, "{} {:?}", self.class(), self.qubits),
        }
    }
}

/// Per-class gate counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateCensus {
    counts: BTreeMap<GateClass, usize>,
}

impl GateCensus {
    pub fn get(&self, class: GateClass) -> usize {
        self.counts.get(&class).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Sum over several classes.
    pub fn sum(&self, classes: &[GateClass]) -> usize {
        classes.iter().map(|&c| self.get(c)).sum()
    }

    /// Non-zero entries in class order.
    pub fn iter(&self) -> impl Iterator<Item = (GateClass, usize)> + '_ {
        self.counts.iter().filter(|(_, &n)| n > 0).map(|(&c, &n)| (c, n))
    }

    pub fn to_map(&self) -> BTreeMap<String, usize> {
        self.iter().map(|(c, n)| (c.name().to_string(), n)).collect()
    }
}

impl fmt::Display for GateCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(c, n)| format!("{c}={n}")).collect();
        write!(f, "{{{}}} total={}", parts.join(", "), self.total())
    }
}

/// Ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    spans: Vec<QubitSpan>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new(), spans: Vec::new() }
    }

    /// Attaches register labels; they must partition the qubits.
    pub fn with_spans(mut self, spans: Vec<QubitSpan>) -> Result<Self> {
        QubitSpan::validate_layout(&spans, self.num_qubits)?;
        self.spans = spans;
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn spans(&self) -> &[QubitSpan] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn check(&self, gate: &Gate) -> Result<()> {
        let q = gate.qubits();
        if let Some(n) = gate.arity() {
            if q.len() != n {
                return Err(domain!("{} expects {n} operands, got {}", gate.class(), q.len()));
            }
        }
        for (i, &a) in q.iter().enumerate() {
            if a >= self.num_qubits {
                return Err(domain!("operand {a} out of range for {} qubits", self.num_qubits));
            }
            if q[..i].contains(&a) {
                return Err(domain!("operand {a} repeated in {gate}"));
            }
        }
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        self.check(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Push for internally generated gates whose operands are known valid.
    pub(crate) fn add(&mut self, gate: Gate) {
        debug_assert!(self.check(&gate).is_ok(), "invalid generated gate {gate}");
        self.gates.push(gate);
    }

    /// Appends `other` with its qubit `q` relabelled to `map[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        if map.len() < other.num_qubits {
            return Err(domain!("qubit map covers {} of {} qubits", map.len(), other.num_qubits));
        }
        for g in &other.gates {
            self.push(g.remap(map))?;
        }
        Ok(())
    }

    /// Appends `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(domain!("cannot append a {}-qubit circuit to a {}-qubit one", other.num_qubits, self.num_qubits));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Reversed gate list with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
            spans: self.spans.clone(),
        }
    }

    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(domain!(
                "{}-qubit circuit applied to a {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            ));
        }
        for g in &self.gates {
            g.apply(state);
        }
        Ok(())
    }

    pub fn simulate(&self, input: &StateVector) -> Result<StateVector> {
        let mut out = input.clone();
        self.run(&mut out)?;
        Ok(out)
    }

    pub fn census(&self) -> GateCensus {
        let mut census = GateCensus::default();
        for g in &self.gates {
            *census.counts.entry(g.class()).or_default() += 1;
        }
        census
    }

    pub fn is_elementary(&self) -> bool {
        self.gates.iter().all(|g| !g.is_composite())
    }

    /// Dense unitary, column `j` being the image of basis state `j`.
    pub fn unitary(&self) -> Result<DMatrix<Complex64>> {
        if self.num_qubits > MAX_DENSE_QUBITS {
            return Err(domain!("dense unitary limited to {MAX_DENSE_QUBITS} qubits"));
        }
        let dim = 1usize << self.num_qubits;
        let mut u = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let out = self.simulate(&StateVector::new_basis_state(self.num_qubits, j)?)?;
            for (i, a) in out.amplitudes().iter().enumerate() {
                u[(i, j)] = *a;
            }
        }
        Ok(u)
    }
}

/// Max entrywise distance between `a` and `e^{iφ}·b`, with the global phase
/// φ chosen from the largest entry of `b`.
pub fn distance_up_to_global_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty matrix");
    let ratio = a.as_slice()[idx] / b.as_slice()[idx];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b.iter()).map(|(x, y)| (x - y * phase).norm()).fold(0.0, f64::max)
}

/// Max entrywise distance without phase freedom.
pub fn max_entry_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
