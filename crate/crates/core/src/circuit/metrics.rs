use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, GateKind};

/// Gate class for counts and depths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateClass {
    Cx,
    Rz,
    /// T gates, with `t_eps` T gates per arbitrary-angle rotation.
    T {
        t_eps: u64,
    },
    /// Any gate acting on two or more qubits, unit weight.
    TwoQubit,
}

const CSWAP_CX: u64 = 7;
const CSWAP_T: u64 = 7;
const CSWAP_T_DEPTH: u64 = 4;
const TOFFOLI_CX: u64 = 6;
const TOFFOLI_T: u64 = 7;
const TOFFOLI_T_DEPTH: u64 = 3;

/// `(count, depth)` contribution of one gate to a class.
pub fn gate_weight(g: &Gate, class: GateClass) -> (u64, u64) {
    use GateKind::*;
    if !g.is_unitary() {
        return (0, 0);
    }
    let controlled = g.control.is_some();
    match class {
        GateClass::TwoQubit => {
            if g.touched() >= 2 {
                (1, 1)
            } else {
                (0, 0)
            }
        }
        GateClass::Cx => match (g.kind, controlled) {
            (CX, false) => (1, 1),
            (CX, true) => (TOFFOLI_CX, TOFFOLI_CX),
            (CSwap, _) => (CSWAP_CX, CSWAP_CX),
            (H, true) => (1, 1),
            (X, true) => (1, 1),
            (_, true) => (2, 2),
            _ => (0, 0),
        },
        GateClass::Rz => match (g.kind, controlled) {
            (Rz(_) | Ry(_) | Phase(_), false) => (1, 1),
            (Rz(_) | Ry(_) | H, true) => (2, 2),
            (Phase(_) | S | Sdg, true) => (3, 2),
            _ => (0, 0),
        },
        GateClass::T { t_eps } => {
            let (rc, rd) = gate_weight(g, GateClass::Rz);
            let (fc, fd) = match (g.kind, controlled) {
                (CSwap, _) => (CSWAP_T, CSWAP_T_DEPTH),
                (CX, true) => (TOFFOLI_T, TOFFOLI_T_DEPTH),
                _ => (0, 0),
            };
            (rc * t_eps + fc, rd * t_eps + fd)
        }
    }
}

pub fn count(c: &Circuit, class: GateClass) -> u64 {
    c.gates().iter().map(|g| gate_weight(g, class).0).sum()
}

/// Class-restricted greedy layering: each gate of nonzero weight `w` lands at
/// `w + max(last layer of its qubits)`.
pub fn depth(c: &Circuit, class: GateClass) -> u64 {
    let mut last = vec![0u64; c.n_qubits()];
    let mut best = 0;
    for g in c.gates() {
        let (_, w) = gate_weight(g, class);
        if w == 0 {
            continue;
        }
        let layer = w + g.support().map(|q| last[q]).max().unwrap_or(0);
        for q in g.support() {
            last[q] = layer;
        }
        best = best.max(layer);
    }
    best
}

/// Counts and depths for every class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostSummary {
    pub qubits: usize,
    pub cx_count: u64,
    pub cx_depth: u64,
    pub rz_count: u64,
    pub rz_depth: u64,
    pub t_eps: u64,
    pub t_count: u64,
    pub t_depth: u64,
    pub two_qubit_count: u64,
    pub two_qubit_depth: u64,
}

impl CostSummary {
    pub fn of(c: &Circuit, t_eps: u64) -> Self {
        let t = GateClass::T { t_eps };
        Self {
            qubits: c.n_qubits(),
            cx_count: count(c, GateClass::Cx),
            cx_depth: depth(c, GateClass::Cx),
            rz_count: count(c, GateClass::Rz),
            rz_depth: depth(c, GateClass::Rz),
            t_eps,
            t_count: count(c, t),
            t_depth: depth(c, t),
            two_qubit_count: count(c, GateClass::TwoQubit),
            two_qubit_depth: depth(c, GateClass::TwoQubit),
        }
    }
}
