use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernels::{self, C};
use super::program::{fuse, pauli_matrix, Op, Program};
use crate::circuit::{gate_weight, Circuit, GateClass};
use crate::error::{Error, Result};
use crate::pauli::{DenseState, Pauli};
use crate::scalar::{lit, to_f64, Real};

/// Outcome probability below which a mid-circuit measurement counts as
/// deterministic in exact marginals.
pub const DETERMINISTIC_TOL: f64 = 1e-9;

const TRUNK_TOL: f64 = 1e-12;
const MAX_CHECKPOINTS: usize = 32;
const CHECKPOINT_BYTES: usize = 1 << 29;

/// Two-parameter noise: depolarizing trials on multi-qubit gates and readout flips.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub p2: f64,
    pub pm: f64,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p2", self.p2), ("pm", self.pm)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p2 == 0.0 && self.pm == 0.0
    }
}

/// One sampled shot: phase register value and error-detection bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot: usize,
    /// `sum_k m_k 2^k` over the phase bits.
    pub phase: usize,
    pub n_phase: usize,
    /// Error-detection bits in classical-bit order.
    pub ed: Vec<bool>,
}

impl ShotRecord {
    /// Phase bits written most significant first.
    pub fn phase_bitstring(&self) -> String {
        (0..self.n_phase)
            .rev()
            .map(|k| if self.phase >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn ed_bitstring(&self) -> String {
        self.ed.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn flagged(&self) -> bool {
        self.ed.iter().any(|&b| b)
    }
}

/// Classical bits split into the phase register and the remaining ED bits.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub phase: Vec<usize>,
    pub ed: Vec<usize>,
}

impl Layout {
    pub(crate) fn of(c: &Circuit) -> Self {
        let phase: Vec<usize> = match c.creg("phase") {
            Some(r) => r.range().collect(),
            None => (0..c.n_cbits()).collect(),
        };
        let ed = (0..c.n_cbits()).filter(|b| !phase.contains(b)).collect();
        Self { phase, ed }
    }

    fn record(&self, shot: usize, cbits: &[bool]) -> ShotRecord {
        let phase = self
            .phase
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &b)| acc | (usize::from(cbits[b]) << k));
        ShotRecord {
            shot,
            phase,
            n_phase: self.phase.len(),
            ed: self.ed.iter().map(|&b| cbits[b]).collect(),
        }
    }
}

#[derive(Clone)]
struct Checkpoint<T: Real> {
    op: usize,
    state: DenseState<T>,
    cbits: Vec<bool>,
}

/// Result of a single mid-circuit measurement decision.
fn measure_outcome<T: Real>(
    amps: &[C<T>],
    q: usize,
    u: Option<f64>,
    tol: f64,
) -> std::result::Result<(bool, T), f64> {
    let p1 = to_f64(kernels::prob_one(amps, q));
    let outcome = match u {
        Some(u) => u < p1,
        None if p1 <= tol => false,
        None if p1 >= 1.0 - tol => true,
        None => return Err(p1),
    };
    let p = if outcome { p1 } else { 1.0 - p1 };
    Ok((outcome, lit(p)))
}

impl<T: Real> Program<T> {
    /// Runs ops `from..` without randomness, collapsing deterministic
    /// measurements; stops before the first nondeterministic one.
    fn run_deterministic(
        &self,
        from: usize,
        state: &mut DenseState<T>,
        cbits: &mut [bool],
        tol: f64,
        mut on_op: impl FnMut(usize, &DenseState<T>, &[bool]),
    ) -> std::result::Result<(), (usize, usize, f64)> {
        for (i, op) in self.ops.iter().enumerate().skip(from) {
            on_op(i, state, cbits);
            match op {
                Op::Unitary(b) => b.kernel.apply(state.amplitudes_mut()),
                Op::Measure { q, cbit, .. } => {
                    let (o, p) = measure_outcome(state.amplitudes(), *q, None, tol)
                        .map_err(|p1| (i, *q, p1))?;
                    kernels::collapse(state.amplitudes_mut(), *q, o, p);
                    cbits[*cbit] = o;
                }
                Op::Reset { q, .. } => {
                    let (o, p) = measure_outcome(state.amplitudes(), *q, None, tol)
                        .map_err(|p1| (i, *q, p1))?;
                    kernels::collapse(state.amplitudes_mut(), *q, o, p);
                    if o {
                        kernels::flip_to_zero(state.amplitudes_mut(), *q);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Error-detection-aware shot sampler with a shared noiseless trunk.
pub struct Sampler<T: Real> {
    program: Program<T>,
    layout: Layout,
    checkpoints: Vec<Checkpoint<T>>,
    /// Op index where the noiseless trunk stopped (`ops.len()` if it finished).
    trunk_end: usize,
    /// Cumulative terminal-outcome distribution of the finished trunk.
    trunk_cdf: Option<(Vec<f64>, Vec<bool>)>,
    /// `(gate, cumulative trial count)` for every noisy gate.
    sites: Vec<(usize, u64)>,
    op_of_gate: Vec<usize>,
}

impl<T: Real> Sampler<T> {
    pub fn new(c: &Circuit) -> Result<Self> {
        let program = Program::<T>::compile(c)?;
        let layout = Layout::of(c);
        let state_bytes = (1usize << program.n_qubits) * std::mem::size_of::<C<T>>();
        let max_cp = (CHECKPOINT_BYTES / state_bytes).clamp(1, MAX_CHECKPOINTS);
        let stride = program.ops.len().div_ceil(max_cp).max(1);

        let mut state = DenseState::zero(program.n_qubits)?;
        let mut cbits = vec![false; program.n_cbits];
        let mut checkpoints = Vec::new();
        let run = program.run_deterministic(0, &mut state, &mut cbits, TRUNK_TOL, |i, s, cb| {
            if i % stride == 0 {
                checkpoints.push(Checkpoint {
                    op: i,
                    state: s.clone(),
                    cbits: cb.to_vec(),
                });
            }
        });
        let (trunk_end, trunk_cdf) = match run {
            Ok(()) => {
                let cdf = terminal_cdf(&program, &state);
                (program.ops.len(), Some((cdf, cbits)))
            }
            Err((i, _, _)) => {
                if checkpoints.last().map(|c| c.op) != Some(i) {
                    checkpoints.push(Checkpoint {
                        op: i,
                        state,
                        cbits,
                    });
                }
                (i, None)
            }
        };
        if checkpoints.is_empty() {
            checkpoints.push(Checkpoint {
                op: 0,
                state: DenseState::zero(program.n_qubits)?,
                cbits: vec![false; program.n_cbits],
            });
        }

        let mut sites = Vec::new();
        let mut total = 0u64;
        for (i, g) in program.gates.iter().enumerate() {
            if g.is_unitary() && g.touched() >= 2 {
                let w = gate_weight(g, GateClass::Cx).0.max(1);
                total += w;
                sites.push((i, total));
            }
        }
        let mut op_of_gate = vec![usize::MAX; program.gates.len()];
        for (k, op) in program.ops.iter().enumerate() {
            match op {
                Op::Unitary(b) => b.gates.clone().for_each(|g| op_of_gate[g] = k),
                Op::Measure { gate, .. } | Op::Reset { gate, .. } => op_of_gate[*gate] = k,
            }
        }
        Ok(Self {
            program,
            layout,
            checkpoints,
            trunk_end,
            trunk_cdf,
            sites,
            op_of_gate,
        })
    }

    pub fn total_noise_trials(&self) -> u64 {
        self.sites.last().map_or(0, |s| s.1)
    }

    pub fn sample(
        &self,
        shots: usize,
        noise: Option<&NoiseConfig>,
        seed: u64,
    ) -> Result<Vec<ShotRecord>> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        if let Some(n) = noise {
            n.validate()?;
        }
        let noise = noise.copied().unwrap_or_default();
        Ok((0..shots)
            .into_par_iter()
            .map(|s| self.shot(s, &noise, seed))
            .collect())
    }

    fn shot(&self, shot: usize, noise: &NoiseConfig, seed: u64) -> ShotRecord {
        let mut nrng = ChaCha8Rng::seed_from_u64(seed);
        nrng.set_stream(2 * shot as u64);
        let events = self.noise_events(&mut nrng, noise.p2);
        let flips: Vec<bool> = (0..self.program.n_cbits)
            .map(|_| noise.pm > 0.0 && nrng.gen::<f64>() < noise.pm)
            .collect();

        let mut mrng = ChaCha8Rng::seed_from_u64(seed);
        mrng.set_stream(2 * shot as u64 + 1);
        let mut draw = |k: usize| {
            mrng.set_word_pos(2 * k as u128);
            mrng.gen::<f64>()
        };

        let first_event_op = events.first().map_or(usize::MAX, |e| self.op_of_gate[e.0]);
        let mut cbits = match &self.trunk_cdf {
            Some((cdf, cbits)) if first_event_op == usize::MAX => {
                let mut cb = cbits.clone();
                self.assign_terminal(sample_cdf(cdf, draw(self.program.n_draws)), &mut cb);
                cb
            }
            _ => {
                let start = first_event_op.min(self.trunk_end);
                let cp = self
                    .checkpoints
                    .iter()
                    .rev()
                    .find(|c| c.op <= start)
                    .expect("checkpoint at op 0");
                let mut state = cp.state.clone();
                let mut cb = cp.cbits.clone();
                self.run_trajectory(cp.op, &mut state, &mut cb, &events, &mut draw);
                let cdf = terminal_cdf(&self.program, &state);
                self.assign_terminal(sample_cdf(&cdf, draw(self.program.n_draws)), &mut cb);
                cb
            }
        };
        for (b, f) in cbits.iter_mut().zip(&flips) {
            *b ^= *f;
        }
        self.layout.record(shot, &cbits)
    }

    fn assign_terminal(&self, outcome: usize, cbits: &mut [bool]) {
        for (k, &(_, cbit)) in self.program.terminal.iter().enumerate() {
            cbits[cbit] = outcome >> k & 1 == 1;
        }
    }

    /// Sorted `(gate, paulis)` error events drawn by geometric skipping.
    fn noise_events(&self, rng: &mut ChaCha8Rng, p2: f64) -> Vec<(usize, Vec<(usize, Pauli)>)> {
        let total = self.total_noise_trials();
        if p2 <= 0.0 || total == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut pos = 0u64;
        let log_q = (1.0 - p2).ln();
        loop {
            if p2 < 1.0 {
                let u: f64 = rng.gen();
                let skip = ((1.0 - u).ln() / log_q).floor();
                if !skip.is_finite() || skip >= (total - pos) as f64 {
                    break;
                }
                pos += skip as u64;
            }
            if pos >= total {
                break;
            }
            let site = self.sites.partition_point(|s| s.1 <= pos);
            let gate = self.sites[site].0;
            let support: Vec<usize> = self.program.gates[gate].support().collect();
            let k = support.len() as u32;
            let code = rng.gen_range(1..4usize.pow(k));
            let paulis = support
                .iter()
                .enumerate()
                .filter_map(|(r, &q)| match code >> (2 * r) & 3 {
                    1 => Some((q, Pauli::X)),
                    2 => Some((q, Pauli::Y)),
                    3 => Some((q, Pauli::Z)),
                    _ => None,
                })
                .collect();
            out.push((gate, paulis));
            pos += 1;
        }
        out
    }

    fn run_trajectory(
        &self,
        from: usize,
        state: &mut DenseState<T>,
        cbits: &mut [bool],
        events: &[(usize, Vec<(usize, Pauli)>)],
        draw: &mut impl FnMut(usize) -> f64,
    ) {
        let mut ev = events.iter().peekable();
        while ev.peek().is_some_and(|e| self.op_of_gate[e.0] < from) {
            ev.next();
        }
        for op in &self.program.ops[from..] {
            match op {
                Op::Unitary(b) => {
                    let mut cursor = b.gates.start;
                    let mut hit = false;
                    while let Some((g, paulis)) = ev.next_if(|e| e.0 < b.gates.end) {
                        hit = true;
                        if let Some(k) = fuse::<T>(&self.program.gates[cursor..=*g]) {
                            k.apply(state.amplitudes_mut());
                        }
                        for &(q, p) in paulis {
                            kernels::apply_1q(state.amplitudes_mut(), q, &pauli_matrix(p), None);
                        }
                        cursor = g + 1;
                    }
                    if !hit {
                        b.kernel.apply(state.amplitudes_mut());
                    } else if let Some(k) = fuse::<T>(&self.program.gates[cursor..b.gates.end]) {
                        k.apply(state.amplitudes_mut());
                    }
                }
                Op::Measure {
                    q, cbit, draw: d, ..
                } => {
                    let (o, p) = measure_outcome(state.amplitudes(), *q, Some(draw(*d)), 0.0)
                        .expect("random draw");
                    kernels::collapse(state.amplitudes_mut(), *q, o, p);
                    cbits[*cbit] = o;
                }
                Op::Reset { q, draw: d, .. } => {
                    let (o, p) = measure_outcome(state.amplitudes(), *q, Some(draw(*d)), 0.0)
                        .expect("random draw");
                    kernels::collapse(state.amplitudes_mut(), *q, o, p);
                    if o {
                        kernels::flip_to_zero(state.amplitudes_mut(), *q);
                    }
                }
            }
        }
    }
}

fn terminal_cdf<T: Real>(p: &Program<T>, state: &DenseState<T>) -> Vec<f64> {
    let qs: Vec<usize> = p.terminal.iter().map(|t| t.0).collect();
    let mut probs = vec![0.0f64; 1 << qs.len()];
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let x = qs
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &q)| acc | ((i >> q & 1) << k));
        probs[x] += to_f64(a.norm_sqr());
    }
    let mut acc = 0.0;
    for v in &mut probs {
        acc += *v;
        *v = acc;
    }
    probs
}

fn sample_cdf(cdf: &[f64], u: f64) -> usize {
    let total = *cdf.last().expect("non-empty cdf");
    cdf.partition_point(|&c| c <= u * total).min(cdf.len() - 1)
}

/// Samples `shots` trajectories of `c`; see [`Sampler`].
pub fn sample(
    c: &Circuit,
    shots: usize,
    noise: Option<&NoiseConfig>,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    Sampler::<f64>::new(c)?.sample(shots, noise, seed)
}

/// Exact Born distribution of the phase register, indexed by `sum_k m_k 2^k`.
///
/// Mid-circuit measurements must be deterministic (outcome probability within
/// [`DETERMINISTIC_TOL`] of 0 or 1); they are collapsed onto that outcome.
pub fn phase_marginal<T: Real>(c: &Circuit) -> Result<Vec<T>> {
    let program = Program::<T>::compile(c)?;
    let layout = Layout::of(c);
    let mut state = DenseState::zero(program.n_qubits)?;
    let mut cbits = vec![false; program.n_cbits];
    program
        .run_deterministic(0, &mut state, &mut cbits, DETERMINISTIC_TOL, |_, _, _| {})
        .map_err(|(_, qubit, p1)| Error::NondeterministicMeasurement { qubit, p1 })?;
    let qubit_of: Vec<usize> = layout
        .phase
        .iter()
        .map(|b| {
            program
                .terminal
                .iter()
                .find(|t| t.1 == *b)
                .map(|t| t.0)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("phase bit {b} is not a final measurement"))
                })
        })
        .collect::<Result<_>>()?;
    let mut probs = vec![T::zero(); 1 << qubit_of.len()];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let x = qubit_of
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &q)| acc | ((i >> q & 1) << k));
        probs[x] += a.norm_sqr();
    }
    Ok(probs)
}
