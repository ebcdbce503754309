use std::f64::consts::PI;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum, PauliWord};

/// Basis change taking each letter of `word` to Z, and its mirror.
fn basis_change(c: &mut Circuit, word: &PauliWord, qmap: &dyn Fn(usize) -> usize, undo: bool) {
    for (q, p) in word.letters() {
        let q = qmap(q);
        match (p, undo) {
            (Pauli::X, _) => {
                c.h(q);
            }
            (Pauli::Y, false) => {
                c.sdg(q).h(q);
            }
            (Pauli::Y, true) => {
                c.h(q).s(q);
            }
            (Pauli::Z, _) => {}
        }
    }
}

fn parity_ladder(c: &mut Circuit, qs: &[usize], undo: bool) {
    let pairs: Vec<(usize, usize)> = qs.windows(2).map(|w| (w[0], w[1])).collect();
    if undo {
        for &(a, b) in pairs.iter().rev() {
            c.cx(a, b);
        }
    } else {
        for &(a, b) in &pairs {
            c.cx(a, b);
        }
    }
}

/// Emits `exp(-i angle P)` with qubits relabelled by `qmap`.
pub(crate) fn emit_pauli_exp(
    c: &mut Circuit,
    word: &PauliWord,
    angle: f64,
    qmap: &dyn Fn(usize) -> usize,
) -> Result<()> {
    if word.is_identity() {
        return Err(Error::EmptyPauli);
    }
    let qs: Vec<usize> = word.qubits().map(qmap).collect();
    let last = *qs.last().expect("non-empty");
    basis_change(c, word, qmap, false);
    parity_ladder(c, &qs, false);
    c.rz(last, 2.0 * angle);
    parity_ladder(c, &qs, true);
    basis_change(c, word, qmap, true);
    Ok(())
}

/// Emits `|0><0| ⊗ I + |1><1| ⊗ exp(-i angle P)`.
pub(crate) fn emit_controlled_pauli_exp(
    c: &mut Circuit,
    word: &PauliWord,
    angle: f64,
    control: usize,
    qmap: &dyn Fn(usize) -> usize,
) -> Result<()> {
    if word.is_identity() {
        c.phase(control, -angle / (2.0 * PI));
        return Ok(());
    }
    let qs: Vec<usize> = word.qubits().map(qmap).collect();
    if qs.contains(&control) {
        return Err(Error::ControlOverlap(control));
    }
    let last = *qs.last().expect("non-empty");
    basis_change(c, word, qmap, false);
    parity_ladder(c, &qs, false);
    c.cx(control, last);
    c.rz(last, -angle);
    c.cx(control, last);
    c.rz(last, angle);
    parity_ladder(c, &qs, true);
    basis_change(c, word, qmap, true);
    Ok(())
}

fn word_width(word: &PauliWord) -> usize {
    word.max_qubit().map_or(0, |q| q + 1)
}

/// Circuit for `exp(-i angle P)` on `max_qubit + 1` qubits.
pub fn pauli_exp(word: &PauliWord, angle: f64) -> Result<Circuit> {
    let mut c = Circuit::new(word_width(word));
    emit_pauli_exp(&mut c, word, angle, &|q| q)?;
    Ok(c)
}

/// Controlled `exp(-i angle P)`; the control is the given qubit index, the
/// register spans `max(max_qubit, control) + 1` qubits.
pub fn controlled_pauli_exp(word: &PauliWord, angle: f64, control: usize) -> Result<Circuit> {
    if word.qubits().any(|q| q == control) {
        return Err(Error::ControlOverlap(control));
    }
    let mut c = Circuit::new(word_width(word).max(control + 1));
    emit_controlled_pauli_exp(&mut c, word, angle, control, &|q| q)?;
    Ok(c)
}

/// Nearest-neighbour Givens rotation on `(p, p+1)`.
pub fn givens(p: usize, theta: f64) -> Circuit {
    let mut c = Circuit::new(p + 2);
    emit_givens(&mut c, p, p + 1, theta);
    c
}

pub(crate) fn emit_givens(c: &mut Circuit, p: usize, q: usize, theta: f64) {
    c.h(p).cx(p, q).ry(p, -theta).ry(q, -theta).cx(p, q).h(p);
}

/// Inverse QFT on `m` qubits without the final swap network.
///
/// After the circuit, qubit `m - 1 - k` carries bit `k` of the phase index,
/// so readout into classical bit `k` restores the little-endian order.
pub fn inverse_qft(m: usize) -> Circuit {
    let mut c = Circuit::new(m);
    emit_inverse_qft(&mut c, &(0..m).collect::<Vec<_>>());
    c
}

pub(crate) fn emit_inverse_qft(c: &mut Circuit, reg: &[usize]) {
    let m = reg.len();
    for k in 0..m {
        let target = reg[m - 1 - k];
        for j in 0..k {
            let ctrl = reg[m - 1 - j];
            let turns = -1.0 / (1u64 << (k - j + 1)) as f64;
            c.push(Gate::new(GateKind::Phase(turns), &[target]).controlled_by(ctrl));
        }
        c.h(target);
    }
}

/// Fan-out CX tree copying `control` onto `targets`, depth `ceil(log2(len + 1))`.
pub fn cat_fanout(control: usize, targets: &[usize]) -> Vec<(usize, usize)> {
    let mut holders = vec![control];
    let mut pending = targets.iter().copied();
    let mut pairs = Vec::with_capacity(targets.len());
    loop {
        let mut fresh = Vec::new();
        for &h in &holders {
            match pending.next() {
                Some(t) => {
                    pairs.push((h, t));
                    fresh.push(t);
                }
                None => break,
            }
        }
        if fresh.is_empty() {
            return pairs;
        }
        holders.extend(fresh);
    }
}

/// Ordered product of Pauli exponentials `exp(-i a_k P_k)`, first factor applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionStep {
    n_qubits: usize,
    factors: Vec<(PauliWord, f64)>,
}

impl EvolutionStep {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            factors: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn factors(&self) -> &[(PauliWord, f64)] {
        &self.factors
    }

    pub fn push(&mut self, word: PauliWord, angle: f64) -> Result<&mut Self> {
        if let Some(q) = word.max_qubit().filter(|&q| q >= self.n_qubits) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n: self.n_qubits,
            });
        }
        self.factors.push((word, angle));
        Ok(self)
    }

    /// Appends `exp(-i t c_k P_k)` for each term of a Hermitian sum, in term order.
    pub fn push_sum(&mut self, h: &PauliSum<f64>, t: f64) -> Result<&mut Self> {
        h.check_hermitian()?;
        for term in h.terms() {
            self.push(term.word.clone(), t * term.coeff.re)?;
        }
        Ok(self)
    }

    pub fn then(&self, other: &EvolutionStep) -> Result<EvolutionStep> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        let mut out = self.clone();
        out.factors.extend(other.factors.iter().cloned());
        Ok(out)
    }

    pub fn inverse(&self) -> EvolutionStep {
        EvolutionStep {
            n_qubits: self.n_qubits,
            factors: self
                .factors
                .iter()
                .rev()
                .map(|(w, a)| (w.clone(), -a))
                .collect(),
        }
    }

    pub(crate) fn emit(&self, c: &mut Circuit, qubits: &[usize]) -> Result<()> {
        for (w, a) in &self.factors {
            if w.is_identity() {
                continue;
            }
            emit_pauli_exp(c, w, *a, &|q| qubits[q])?;
        }
        Ok(())
    }

    pub(crate) fn emit_controlled(
        &self,
        c: &mut Circuit,
        qubits: &[usize],
        control: usize,
    ) -> Result<()> {
        for (w, a) in &self.factors {
            emit_controlled_pauli_exp(c, w, *a, control, &|q| qubits[q])?;
        }
        Ok(())
    }

    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits);
        let qs: Vec<usize> = (0..self.n_qubits).collect();
        self.emit(&mut c, &qs).expect("validated factors");
        c
    }

    /// Controlled step on `n_qubits + 1` qubits, control last.
    pub fn controlled_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits + 1);
        let qs: Vec<usize> = (0..self.n_qubits).collect();
        self.emit_controlled(&mut c, &qs, self.n_qubits)
            .expect("validated factors");
        c
    }
}
