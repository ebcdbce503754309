//! Gate-level circuits over named registers, compilation identities and metrics.

pub(crate) mod compile;
mod metrics;
mod text;

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use compile::{
    cat_fanout, controlled_pauli_exp, givens, inverse_qft, pauli_exp, EvolutionStep,
};
pub use metrics::{count, depth, gate_weight, CostSummary, GateClass};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    S,
    Sdg,
    /// `exp(-i θ Z / 2)`, radians.
    Rz(f64),
    /// `exp(-i θ Y / 2)`, radians.
    Ry(f64),
    /// `diag(1, e^{2πiθ})`, turns.
    Phase(f64),
    CX,
    CSwap,
    Measure,
    Reset,
    Barrier,
}

impl GateKind {
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::S
            | GateKind::Sdg
            | GateKind::Rz(_)
            | GateKind::Ry(_)
            | GateKind::Phase(_)
            | GateKind::Measure
            | GateKind::Reset => Some(1),
            GateKind::CX => Some(2),
            GateKind::CSwap => Some(3),
            GateKind::Barrier => None,
        }
    }

    pub fn is_single_qubit_unitary(self) -> bool {
        matches!(
            self,
            GateKind::H
                | GateKind::X
                | GateKind::S
                | GateKind::Sdg
                | GateKind::Rz(_)
                | GateKind::Ry(_)
                | GateKind::Phase(_)
        )
    }

    pub fn angle(self) -> Option<f64> {
        match self {
            GateKind::Rz(a) | GateKind::Ry(a) | GateKind::Phase(a) => Some(a),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::Rz(_) => "RZ",
            GateKind::Ry(_) => "RY",
            GateKind::Phase(_) => "P",
            GateKind::CX => "CX",
            GateKind::CSwap => "CSWAP",
            GateKind::Measure => "MEASURE",
            GateKind::Reset => "RESET",
            GateKind::Barrier => "BARRIER",
        }
    }

    fn inverse(self) -> Option<GateKind> {
        Some(match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::Rz(a) => GateKind::Rz(-a),
            GateKind::Ry(a) => GateKind::Ry(-a),
            GateKind::Phase(a) => GateKind::Phase(-a),
            GateKind::Measure | GateKind::Reset => return None,
            k => k,
        })
    }
}

/// One operation. For `CX` the operands are `[control, target]`; for `CSwap`
/// `[control, a, b]`. `control` adds an extra control qubit to unitary gates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub control: Option<usize>,
    pub cbit: Option<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Self {
        Self {
            kind,
            qubits: qubits.to_vec(),
            control: None,
            cbit: None,
        }
    }

    pub fn controlled_by(mut self, control: usize) -> Self {
        self.control = Some(control);
        self
    }

    /// All qubits touched, control first.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.control.into_iter().chain(self.qubits.iter().copied())
    }

    pub fn touched(&self) -> usize {
        self.qubits.len() + usize::from(self.control.is_some())
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(
            self.kind,
            GateKind::Measure | GateKind::Reset | GateKind::Barrier
        )
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self.kind, GateKind::Measure | GateKind::Reset)
    }

    fn validate(&self, n_qubits: usize, n_cbits: usize) -> Result<()> {
        if let Some(a) = self.kind.arity() {
            if self.qubits.len() != a {
                return Err(Error::InvalidArgument(format!(
                    "{} expects {a} operands, got {}",
                    self.kind.name(),
                    self.qubits.len()
                )));
            }
        }
        if let Some(a) = self.kind.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite angle {a}")));
            }
        }
        for q in self.support() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n: n_qubits,
                });
            }
        }
        let mut seen: Vec<usize> = self.support().collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "repeated operand in {} {:?}",
                self.kind.name(),
                self.qubits
            )));
        }
        if self.control.is_some()
            && !(self.kind.is_single_qubit_unitary() || self.kind == GateKind::CX)
        {
            return Err(Error::InvalidArgument(format!(
                "{} cannot carry an extra control",
                self.kind.name()
            )));
        }
        match (self.kind, self.cbit) {
            (GateKind::Measure, Some(c)) if c >= n_cbits => Err(Error::InvalidArgument(format!(
                "classical bit {c} out of range for {n_cbits}"
            ))),
            (GateKind::Measure, None) => Err(Error::InvalidArgument("measure without cbit".into())),
            (GateKind::Measure, Some(_)) | (_, None) => Ok(()),
            (k, Some(_)) => Err(Error::InvalidArgument(format!(
                "{} cannot write a cbit",
                k.name()
            ))),
        }
    }
}

/// Named contiguous index range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.len
    }

    pub fn get(&self, i: usize) -> usize {
        assert!(i < self.len, "index {i} outside register {}", self.name);
        self.start + i
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    n_cbits: usize,
    qregs: Vec<Register>,
    cregs: Vec<Register>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Circuit with one anonymous register `q` of `n` qubits.
    pub fn new(n_qubits: usize) -> Self {
        let mut c = Self::default();
        if n_qubits > 0 {
            c.add_qreg("q", n_qubits);
        }
        c
    }

    /// Empty circuit with no registers; add them with `add_qreg`/`add_creg`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn add_qreg(&mut self, name: &str, len: usize) -> Register {
        let r = Register {
            name: name.to_string(),
            start: self.n_qubits,
            len,
        };
        self.n_qubits += len;
        self.qregs.push(r.clone());
        r
    }

    pub fn add_creg(&mut self, name: &str, len: usize) -> Register {
        let r = Register {
            name: name.to_string(),
            start: self.n_cbits,
            len,
        };
        self.n_cbits += len;
        self.cregs.push(r.clone());
        r
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_cbits(&self) -> usize {
        self.n_cbits
    }

    pub fn qregs(&self) -> &[Register] {
        &self.qregs
    }

    pub fn cregs(&self) -> &[Register] {
        &self.cregs
    }

    pub fn qreg(&self, name: &str) -> Option<&Register> {
        self.qregs.iter().find(|r| r.name == name)
    }

    pub fn creg(&self, name: &str) -> Option<&Register> {
        self.cregs.iter().find(|r| r.name == name)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn has_measurements(&self) -> bool {
        self.gates.iter().any(Gate::is_measurement)
    }

    pub fn try_push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits, self.n_cbits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate, panicking on invalid operands (builder use).
    pub fn push(&mut self, gate: Gate) -> &mut Self {
        if let Err(e) = self.try_push(gate) {
            panic!("invalid gate: {e}");
        }
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push(Gate::new(GateKind::H, &[q]))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push(Gate::new(GateKind::X, &[q]))
    }

    pub fn s(&mut self, q: usize) -> &mut Self {
        self.push(Gate::new(GateKind::S, &[q]))
    }

    pub fn sdg(&mut self, q: usize) -> &mut Self {
        self.push(Gate::new(GateKind::Sdg, &[q]))
    }

    pub fn rz(&mut self, q: usize, theta: f64) -> &mut Self {
        self.push(Gate::new(GateKind::Rz(theta), &[q]))
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> &mut Self {
        self.push(Gate::new(GateKind::Ry(theta), &[q]))
    }

    pub fn phase(&mut self, q: usize, turns: f64) -> &mut Self {
        self.push(Gate::new(GateKind::Phase(turns), &[q]))
    }

    pub fn cx(&mut self, c: usize, t: usize) -> &mut Self {
        self.push(Gate::new(GateKind::CX, &[c, t]))
    }

    pub fn cswap(&mut self, c: usize, a: usize, b: usize) -> &mut Self {
        self.push(Gate::new(GateKind::CSwap, &[c, a, b]))
    }

    pub fn measure(&mut self, q: usize, cbit: usize) -> &mut Self {
        let mut g = Gate::new(GateKind::Measure, &[q]);
        g.cbit = Some(cbit);
        self.push(g)
    }

    pub fn reset(&mut self, q: usize) -> &mut Self {
        self.push(Gate::new(GateKind::Reset, &[q]))
    }

    pub fn barrier(&mut self, qubits: &[usize]) -> &mut Self {
        self.push(Gate::new(GateKind::Barrier, qubits))
    }

    /// Concatenation `a` then `b`; layouts must agree.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits || self.n_cbits != other.n_cbits {
            return Err(Error::LayoutMismatch(format!(
                "{}q/{}c vs {}q/{}c",
                self.n_qubits, self.n_cbits, other.n_qubits, other.n_cbits
            )));
        }
        if self.qregs != other.qregs && !self.gates.is_empty() && !other.gates.is_empty() {
            return Err(Error::LayoutMismatch(
                "register names or ranges differ".into(),
            ));
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    /// Appends `other` with its qubit `i` relabelled to `qubits[i]` and its
    /// classical bit `k` to `cbits[k]`.
    pub fn append_mapped(
        &mut self,
        other: &Circuit,
        qubits: &[usize],
        cbits: &[usize],
    ) -> Result<()> {
        if qubits.len() != other.n_qubits || cbits.len() < other.n_cbits {
            return Err(Error::LayoutMismatch(format!(
                "map covers {} qubits / {} cbits, circuit has {} / {}",
                qubits.len(),
                cbits.len(),
                other.n_qubits,
                other.n_cbits
            )));
        }
        for g in &other.gates {
            let mapped = Gate {
                kind: g.kind,
                qubits: g.qubits.iter().map(|&q| qubits[q]).collect(),
                control: g.control.map(|q| qubits[q]),
                cbit: g.cbit.map(|c| cbits[c]),
            };
            self.try_push(mapped)?;
        }
        Ok(())
    }

    /// Appends `other` onto the qubits of register `reg` of `self`.
    pub fn append_on(&mut self, other: &Circuit, reg: &Register) -> Result<()> {
        let map: Vec<usize> = reg.range().collect();
        self.append_mapped(other, &map, &[])
    }

    pub fn inverse(&self) -> Result<Circuit> {
        let mut out = Circuit {
            gates: Vec::with_capacity(self.gates.len()),
            ..self.clone()
        };
        for g in self.gates.iter().rev() {
            let kind = g.kind.inverse().ok_or(Error::InvalidArgument(format!(
                "{} is not invertible",
                g.kind.name()
            )))?;
            out.gates.push(Gate { kind, ..g.clone() });
        }
        Ok(out)
    }

    /// Same circuit on `n_qubits + 1` qubits with every unitary gate
    /// controlled by the new last qubit.
    pub fn controlled(&self) -> Result<Circuit> {
        let mut out = self.clone();
        let ctrl = out.add_qreg("ctrl", 1).start;
        out.gates.clear();
        for g in &self.gates {
            if !g.is_unitary() {
                if g.kind == GateKind::Barrier {
                    out.gates.push(g.clone());
                    continue;
                }
                return Err(Error::InvalidArgument(format!(
                    "cannot control {}",
                    g.kind.name()
                )));
            }
            if g.control.is_some() || g.kind == GateKind::CSwap {
                return Err(Error::InvalidArgument(format!(
                    "doubly controlled {} unsupported",
                    g.kind.name()
                )));
            }
            let cg = if g.kind == GateKind::X {
                Gate::new(GateKind::CX, &[ctrl, g.qubits[0]])
            } else {
                g.clone().controlled_by(ctrl)
            };
            out.try_push(cg)?;
        }
        Ok(out)
    }

    /// Gate census keyed by display name (a `C-` prefix marks extra controls).
    pub fn census(&self) -> std::collections::BTreeMap<String, usize> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.gates {
            let name = if g.control.is_some() {
                format!("C-{}", g.kind.name())
            } else {
                g.kind.name().to_string()
            };
            *m.entry(name).or_insert(0) += 1;
        }
        m
    }
}
