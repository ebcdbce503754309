use std::ops::Range;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::kernels::{self, C};
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{DenseState, Pauli, STATE_CAP};
use crate::scalar::Real;

/// Widest register a fused block may span.
pub const MAX_FUSE: usize = 5;

#[derive(Clone, Debug)]
pub(crate) enum Kernel<T: Real> {
    OneQ {
        q: usize,
        m: [C<T>; 4],
        ctrl: Option<usize>,
    },
    Mcx {
        cmask: usize,
        t: usize,
    },
    CSwap {
        c: usize,
        a: usize,
        b: usize,
    },
    Diag {
        qubits: Vec<usize>,
        d: Vec<C<T>>,
    },
    Sparse(kernels::SparseBlock<T>),
    Seq(Vec<Kernel<T>>),
}

impl<T: Real> Kernel<T> {
    pub(crate) fn apply(&self, amps: &mut [C<T>]) {
        match self {
            Kernel::OneQ { q, m, ctrl } => kernels::apply_1q(amps, *q, m, *ctrl),
            Kernel::Mcx { cmask, t } => kernels::apply_mcx(amps, *cmask, *t),
            Kernel::CSwap { c, a, b } => kernels::apply_cswap(amps, *c, *a, *b),
            Kernel::Diag { qubits, d } => kernels::apply_diag(amps, qubits, d),
            Kernel::Sparse(b) => b.apply(amps),
            Kernel::Seq(ks) => ks.iter().for_each(|k| k.apply(amps)),
        }
    }

    fn single(g: &Gate) -> Option<Kernel<T>> {
        match g.kind {
            GateKind::Barrier | GateKind::Measure | GateKind::Reset => None,
            GateKind::CX => Some(Kernel::Mcx {
                cmask: (1 << g.qubits[0]) | g.control.map_or(0, |c| 1 << c),
                t: g.qubits[1],
            }),
            GateKind::CSwap => Some(Kernel::CSwap {
                c: g.qubits[0],
                a: g.qubits[1],
                b: g.qubits[2],
            }),
            k => Some(Kernel::OneQ {
                q: g.qubits[0],
                m: kernels::matrix_1q(k),
                ctrl: g.control,
            }),
        }
    }

    fn cost(&self) -> f64 {
        match self {
            Kernel::OneQ { m, .. } if kernels::is_diagonal_1q(m) => 1.0,
            Kernel::OneQ { .. } => 2.0,
            Kernel::Mcx { .. } | Kernel::CSwap { .. } => 0.5,
            Kernel::Diag { .. } => 1.5,
            Kernel::Sparse(b) => 0.5 + b.nnz() as f64 / b.dim() as f64,
            Kernel::Seq(ks) => ks.iter().map(Kernel::cost).sum(),
        }
    }

    fn remap(&self, map: &impl Fn(usize) -> usize) -> Kernel<T> {
        let mask = |m: usize| {
            (0..usize::BITS as usize)
                .filter(|b| m >> b & 1 == 1)
                .fold(0, |acc, b| acc | 1 << map(b))
        };
        match self {
            Kernel::OneQ { q, m, ctrl } => Kernel::OneQ {
                q: map(*q),
                m: *m,
                ctrl: ctrl.map(map),
            },
            Kernel::Mcx { cmask, t } => Kernel::Mcx {
                cmask: mask(*cmask),
                t: map(*t),
            },
            Kernel::CSwap { c, a, b } => Kernel::CSwap {
                c: map(*c),
                a: map(*a),
                b: map(*b),
            },
            _ => unreachable!("only single-gate kernels are remapped"),
        }
    }
}

/// Fuses `gates` into one kernel over their joint support, choosing between a
/// sparse matrix, a diagonal, or the plain gate sequence by estimated cost.
pub(crate) fn fuse<T: Real>(gates: &[Gate]) -> Option<Kernel<T>> {
    let singles: Vec<Kernel<T>> = gates.iter().filter_map(Kernel::single).collect();
    if singles.len() <= 1 {
        return singles.into_iter().next();
    }
    let mut qubits: Vec<usize> = gates
        .iter()
        .filter(|g| g.is_unitary())
        .flat_map(|g| g.support().collect::<Vec<_>>())
        .collect();
    qubits.sort_unstable();
    qubits.dedup();
    let k = qubits.len();
    let seq = Kernel::Seq(singles);
    if k > MAX_FUSE {
        return Some(seq);
    }
    let local = |q: usize| qubits.binary_search(&q).expect("qubit in block");
    let local_seq: Vec<Kernel<T>> = match &seq {
        Kernel::Seq(ks) => ks.iter().map(|s| s.remap(&local)).collect(),
        _ => unreachable!(),
    };
    let d = 1usize << k;
    let mut m = vec![C::<T>::zero(); d * d];
    let mut col = vec![C::<T>::zero(); d];
    for j in 0..d {
        col.iter_mut().for_each(|a| *a = C::zero());
        col[j] = C::one();
        for s in &local_seq {
            s.apply(&mut col);
        }
        for (i, a) in col.iter().enumerate() {
            m[i * d + j] = *a;
        }
    }
    let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || m[i * d + j].is_zero()));
    let fused = if diagonal {
        Kernel::Diag {
            qubits,
            d: (0..d).map(|i| m[i * d + i]).collect(),
        }
    } else {
        Kernel::Sparse(kernels::SparseBlock::from_dense(qubits, &m))
    };
    if fused.cost() < seq.cost() {
        Some(fused)
    } else {
        Some(seq)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Block<T: Real> {
    pub gates: Range<usize>,
    pub kernel: Kernel<T>,
}

#[derive(Clone, Debug)]
pub(crate) enum Op<T: Real> {
    Unitary(Block<T>),
    /// `draw` is the per-shot index of the uniform variate consumed.
    Measure {
        gate: usize,
        q: usize,
        cbit: usize,
        draw: usize,
    },
    Reset {
        gate: usize,
        q: usize,
        draw: usize,
    },
}

/// A circuit lowered to fused kernels, with terminal measurements split off.
#[derive(Clone, Debug)]
pub struct Program<T: Real> {
    pub(crate) n_qubits: usize,
    pub(crate) n_cbits: usize,
    pub(crate) gates: Vec<Gate>,
    pub(crate) ops: Vec<Op<T>>,
    /// `(qubit, cbit)` pairs measured after every gate acting on the qubit.
    pub(crate) terminal: Vec<(usize, usize)>,
    pub(crate) n_draws: usize,
}

impl<T: Real> Program<T> {
    pub fn compile(c: &Circuit) -> Result<Self> {
        if c.n_qubits() > STATE_CAP {
            return Err(Error::SizeCap {
                n: c.n_qubits(),
                cap: STATE_CAP,
            });
        }
        let gates = c.gates().to_vec();
        let mut touched_later = vec![false; c.n_qubits()];
        let mut terminal_flag = vec![false; gates.len()];
        for (i, g) in gates.iter().enumerate().rev() {
            match g.kind {
                GateKind::Barrier => {}
                GateKind::Measure if !touched_later[g.qubits[0]] => {
                    terminal_flag[i] = true;
                    touched_later[g.qubits[0]] = true;
                }
                _ => g.support().for_each(|q| touched_later[q] = true),
            }
        }
        let mut ops = Vec::new();
        let mut terminal = Vec::new();
        let mut draws = 0;
        let mut start = 0;
        let mut support: Vec<usize> = Vec::new();
        let flush = |ops: &mut Vec<Op<T>>, range: Range<usize>| {
            if let Some(kernel) = fuse(&gates[range.clone()]) {
                ops.push(Op::Unitary(Block {
                    gates: range,
                    kernel,
                }));
            }
        };
        for (i, g) in gates.iter().enumerate() {
            if g.kind == GateKind::Barrier {
                continue;
            }
            if !g.is_unitary() {
                flush(&mut ops, start..i);
                start = i + 1;
                support.clear();
                let q = g.qubits[0];
                match g.kind {
                    GateKind::Measure if terminal_flag[i] => {
                        terminal.push((q, g.cbit.expect("validated")))
                    }
                    GateKind::Measure => {
                        ops.push(Op::Measure {
                            gate: i,
                            q,
                            cbit: g.cbit.expect("validated"),
                            draw: draws,
                        });
                        draws += 1;
                    }
                    _ => {
                        ops.push(Op::Reset {
                            gate: i,
                            q,
                            draw: draws,
                        });
                        draws += 1;
                    }
                }
                continue;
            }
            let mut merged = support.clone();
            merged.extend(g.support());
            merged.sort_unstable();
            merged.dedup();
            if merged.len() > MAX_FUSE && !support.is_empty() {
                flush(&mut ops, start..i);
                start = i;
                merged = g.support().collect();
                merged.sort_unstable();
            }
            support = merged;
        }
        flush(&mut ops, start..gates.len());
        Ok(Self {
            n_qubits: c.n_qubits(),
            n_cbits: c.n_cbits(),
            gates,
            ops,
            terminal,
            n_draws: draws,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn has_mid_circuit_ops(&self) -> bool {
        self.ops.iter().any(|o| !matches!(o, Op::Unitary(_)))
    }

    pub fn kernel_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|o| matches!(o, Op::Unitary(_)))
            .count()
    }
}

pub(crate) fn pauli_matrix<T: Real>(p: Pauli) -> [C<T>; 4] {
    let o = Complex::one();
    let z = Complex::zero();
    let i = Complex::i();
    match p {
        Pauli::X => [z, o, o, z],
        Pauli::Y => [z, -i, i, z],
        Pauli::Z => [o, z, z, -o],
    }
}

/// Exact unitary evolution of a measurement-free circuit.
pub fn evolve<T: Real>(c: &Circuit, initial: DenseState<T>) -> Result<DenseState<T>> {
    if c.has_measurements() {
        return Err(Error::MeasurementInEvolve);
    }
    if initial.n_qubits() != c.n_qubits() {
        return Err(Error::LayoutMismatch(format!(
            "state has {} qubits, circuit {}",
            initial.n_qubits(),
            c.n_qubits()
        )));
    }
    let p = Program::<T>::compile(c)?;
    Ok(p.evolve(initial))
}

impl<T: Real> Program<T> {
    pub(crate) fn evolve(&self, mut state: DenseState<T>) -> DenseState<T> {
        for op in &self.ops {
            if let Op::Unitary(b) = op {
                b.kernel.apply(state.amplitudes_mut());
            }
        }
        state
    }
}
