//! Phase-estimation circuit builders: canonical QPE, split-evolution QPE with
//! CSWAP gadgets (plain, cat fan-out, measure/reset, mixed) and the
//! compute-uncompute baseline.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{cat_fanout, Circuit, EvolutionStep, Register};
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, STATE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockChoice {
    Controlled,
    Gadget,
}

/// Per-bit block choice plus the cat and measure/reset flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantPolicy {
    pub choices: Vec<BlockChoice>,
    pub cat: bool,
    pub measure_reset: bool,
}

impl VariantPolicy {
    pub fn all_gadget(m: usize, cat: bool, measure_reset: bool) -> Self {
        Self {
            choices: vec![BlockChoice::Gadget; m],
            cat,
            measure_reset,
        }
    }

    pub fn all_controlled(m: usize) -> Self {
        Self {
            choices: vec![BlockChoice::Controlled; m],
            cat: false,
            measure_reset: false,
        }
    }

    /// Parses `c`/`g` per ascending bit, e.g. `ccggg`.
    pub fn parse(s: &str, cat: bool, measure_reset: bool) -> Result<Self> {
        let choices: Vec<BlockChoice> = s.parse::<PolicyString>()?.0;
        Ok(Self {
            choices,
            cat,
            measure_reset,
        })
    }

    pub fn m(&self) -> usize {
        self.choices.len()
    }

    pub fn gadget_rounds(&self) -> usize {
        self.choices
            .iter()
            .filter(|c| **c == BlockChoice::Gadget)
            .count()
    }

    pub fn policy_string(&self) -> String {
        PolicyString(self.choices.clone()).to_string()
    }
}

struct PolicyString(Vec<BlockChoice>);

impl FromStr for PolicyString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty policy string".into()));
        }
        s.chars()
            .map(|c| match c.to_ascii_lowercase() {
                'c' => Ok(BlockChoice::Controlled),
                'g' => Ok(BlockChoice::Gadget),
                _ => Err(Error::InvalidArgument(format!(
                    "policy character {c:?} is not c or g"
                ))),
            })
            .collect::<Result<_>>()
            .map(PolicyString)
    }
}

impl fmt::Display for PolicyString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(match c {
                BlockChoice::Controlled => "c",
                BlockChoice::Gadget => "g",
            })?;
        }
        Ok(())
    }
}

/// Vacuum phase `Θ(τ) = (-τ E_vac / 2π) mod 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferencePhase {
    pub theta: f64,
    pub e_vac: f64,
    pub tau: f64,
}

impl ReferencePhase {
    pub fn from_energy(e_vac: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tau must be positive, got {tau}"
            )));
        }
        Ok(Self {
            theta: (-tau * e_vac / std::f64::consts::TAU).rem_euclid(1.0),
            e_vac,
            tau,
        })
    }

    /// Gadget phase for bit `j`: `(2^j Θ) mod 1`.
    pub fn bit_theta(&self, j: usize) -> f64 {
        let mut t = self.theta;
        for _ in 0..j {
            t = (2.0 * t).rem_euclid(1.0);
        }
        t
    }
}

pub fn reference_theta(h: &PauliSum<f64>, tau: f64) -> Result<ReferencePhase> {
    ReferencePhase::from_energy(h.vacuum_energy(), tau)
}

/// Inputs of an interference gadget `S_U`.
#[derive(Clone, Debug)]
pub struct GadgetSpec {
    pub ua: Circuit,
    pub ub: Circuit,
    /// Control phase, turns.
    pub theta: f64,
    pub use_cat: bool,
    pub measure_reset: bool,
}

/// Qubit and classical-bit placement of one gadget.
#[derive(Clone, Debug)]
pub struct GadgetLayout {
    pub control: usize,
    pub sys_a: Vec<usize>,
    pub sys_b: Vec<usize>,
    pub fanout: Vec<usize>,
    /// Classical bits receiving the reference (then fan-out) measurements.
    pub ed_cbits: Vec<usize>,
    /// Re-prepared on the reference lane after a reset.
    pub ref_prep: Option<Circuit>,
    pub reset: bool,
}

fn check_lane(c: &Circuit, n: usize, what: &str) -> Result<()> {
    if c.n_qubits() != n {
        return Err(Error::LayoutMismatch(format!(
            "{what} acts on {} qubits, lanes have {n}",
            c.n_qubits()
        )));
    }
    Ok(())
}

/// Appends `S_U`: CSWAP cascade, `U_A†` on lane A with `U_B` on lane B,
/// `P(θ)` on the control, mirrored cascade.
pub fn emit_gadget(c: &mut Circuit, spec: &GadgetSpec, l: &GadgetLayout) -> Result<()> {
    let n = l.sys_a.len();
    if l.sys_b.len() != n {
        return Err(Error::LayoutMismatch("lanes differ in width".into()));
    }
    check_lane(&spec.ua, n, "U_A")?;
    check_lane(&spec.ub, n, "U_B")?;
    if l.sys_a.contains(&l.control) || l.sys_b.contains(&l.control) {
        return Err(Error::ControlOverlap(l.control));
    }
    let controls: Vec<usize> = if spec.use_cat {
        if l.fanout.len() + 1 < n {
            return Err(Error::LayoutMismatch(format!(
                "cat variant needs {} fan-out qubits, got {}",
                n.saturating_sub(1),
                l.fanout.len()
            )));
        }
        std::iter::once(l.control)
            .chain(l.fanout.iter().copied().take(n - 1))
            .collect()
    } else {
        vec![l.control; n]
    };
    let tree = if spec.use_cat {
        cat_fanout(l.control, &controls[1..])
    } else {
        Vec::new()
    };
    let fan: &[usize] = if spec.use_cat { &controls[1..] } else { &[] };
    let all: Vec<usize> = std::iter::once(l.control)
        .chain(l.sys_a.iter().copied())
        .chain(l.sys_b.iter().copied())
        .chain(fan.iter().copied())
        .collect();
    c.barrier(&all);
    for &(a, b) in &tree {
        c.cx(a, b);
    }
    for i in 0..n {
        c.cswap(controls[i], l.sys_a[i], l.sys_b[i]);
    }
    c.append_mapped(&spec.ua.inverse()?, &l.sys_a, &[])?;
    c.append_mapped(&spec.ub, &l.sys_b, &[])?;
    c.phase(l.control, spec.theta);
    for i in 0..n {
        c.cswap(controls[i], l.sys_a[i], l.sys_b[i]);
    }
    for &(a, b) in tree.iter().rev() {
        c.cx(a, b);
    }
    c.barrier(&all);
    if spec.measure_reset {
        let checked: Vec<usize> = l.sys_b.iter().chain(fan).copied().collect();
        if l.ed_cbits.len() != checked.len() {
            return Err(Error::LayoutMismatch(format!(
                "{} ED bits for {} checked qubits",
                l.ed_cbits.len(),
                checked.len()
            )));
        }
        for (&q, &b) in checked.iter().zip(&l.ed_cbits) {
            c.measure(q, b);
        }
        if l.reset {
            for &q in &checked {
                c.reset(q);
            }
            if let Some(prep) = &l.ref_prep {
                c.append_mapped(prep, &l.sys_b, &[])?;
            }
        }
    }
    Ok(())
}

/// Standalone gadget on registers `ctrl`, `sysA`, `sysB` (and `fanout`,
/// plus an `ed` classical register for measure/reset).
pub fn cswap_gadget(spec: &GadgetSpec) -> Result<Circuit> {
    let n = spec.ua.n_qubits();
    let mut c = Circuit::empty();
    let ctrl = c.add_qreg("ctrl", 1);
    let a = c.add_qreg("sysA", n);
    let b = c.add_qreg("sysB", n);
    let f = if spec.use_cat {
        Some(c.add_qreg("fanout", n.saturating_sub(1)))
    } else {
        None
    };
    let f_len = f.as_ref().map_or(0, |r| r.len);
    let ed = if spec.measure_reset {
        Some(c.add_creg("ed", n + f_len))
    } else {
        None
    };
    let layout = GadgetLayout {
        control: ctrl.start,
        sys_a: a.range().collect(),
        sys_b: b.range().collect(),
        fanout: f.map(|r| r.range().collect()).unwrap_or_default(),
        ed_cbits: ed.map(|r| r.range().collect()).unwrap_or_default(),
        ref_prep: None,
        reset: true,
    };
    emit_gadget(&mut c, spec, &layout)?;
    Ok(c)
}

/// Everything a phase-estimation builder needs.
#[derive(Clone, Debug)]
pub struct QpeProblem {
    pub m: usize,
    /// Base evolution step `U(τ)`.
    pub step: EvolutionStep,
    /// Prepares the system input from all-zeros.
    pub psi_prep: Circuit,
    /// Prepares the reference lane from all-zeros.
    pub ref_prep: Circuit,
    pub reference: ReferencePhase,
    /// Hadamards on the phase register (disable to test the idle control).
    pub hadamards: bool,
}

impl QpeProblem {
    pub fn new(
        m: usize,
        step: EvolutionStep,
        psi_prep: Circuit,
        reference: ReferencePhase,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("M must be at least 1".into()));
        }
        let n = step.n_qubits();
        if m + n > STATE_CAP {
            return Err(Error::SizeCap {
                n: m + n,
                cap: STATE_CAP,
            });
        }
        check_lane(&psi_prep, n, "state preparation")?;
        Ok(Self {
            m,
            step,
            psi_prep,
            ref_prep: Circuit::new(n),
            reference,
            hadamards: true,
        })
    }

    pub fn n(&self) -> usize {
        self.step.n_qubits()
    }

    /// `U(τ)^reps` as one circuit on the system lane.
    pub fn power(&self, reps: usize) -> Circuit {
        let base = self.step.circuit();
        let mut c = Circuit::new(self.n());
        let qs: Vec<usize> = (0..self.n()).collect();
        for _ in 0..reps {
            c.append_mapped(&base, &qs, &[]).expect("same width");
        }
        c
    }
}

fn start(p: &QpeProblem, c: &mut Circuit, phase: &Register) {
    if p.hadamards {
        for q in phase.range() {
            c.h(q);
        }
    }
}

fn finish(c: &mut Circuit, phase: &Register, phase_bits: &Register) {
    let reg: Vec<usize> = phase.range().collect();
    crate::circuit::compile::emit_inverse_qft(c, &reg);
    for k in 0..phase.len {
        c.measure(phase.get(phase.len - 1 - k), phase_bits.get(k));
    }
}

fn emit_controlled_power(
    p: &QpeProblem,
    c: &mut Circuit,
    sys: &[usize],
    control: usize,
    reps: usize,
) -> Result<()> {
    for _ in 0..reps {
        p.step.emit_controlled(c, sys, control)?;
    }
    Ok(())
}

/// Canonical QPE: controlled `U(τ)^{2^j}` on bit `j`, registers `phase`, `sys`.
pub fn canonical_qpe(p: &QpeProblem) -> Result<Circuit> {
    se_qpe(p, &VariantPolicy::all_controlled(p.m))
}

/// Split-evolution QPE under `policy`.
///
/// Registers: `phase` (M), `sysA` (N, input state), `sysB` (N, reference),
/// `fanout` (N-1, cat only). Classical: `phase` (M) and `ed`. Without any
/// gadget the reference lane is omitted and the system register is `sys`.
pub fn se_qpe(p: &QpeProblem, policy: &VariantPolicy) -> Result<Circuit> {
    if policy.m() != p.m {
        return Err(Error::InvalidArgument(format!(
            "policy covers {} bits, M = {}",
            policy.m(),
            p.m
        )));
    }
    let n = p.n();
    let rounds = policy.gadget_rounds();
    let mut c = Circuit::empty();
    let phase = c.add_qreg("phase", p.m);
    let (sys_a, sys_b, fan) = if rounds == 0 {
        (c.add_qreg("sys", n), None, None)
    } else {
        let a = c.add_qreg("sysA", n);
        let b = c.add_qreg("sysB", n);
        let f = if policy.cat && n > 1 {
            Some(c.add_qreg("fanout", n - 1))
        } else {
            None
        };
        (a, Some(b), f)
    };
    let f_len = fan.as_ref().map_or(0, |r| r.len);
    let phase_bits = c.add_creg("phase", p.m);
    let ed_len = match (rounds, policy.measure_reset) {
        (0, _) => 0,
        (r, true) => r * (n + f_len),
        (_, false) => n + f_len,
    };
    let ed = if ed_len > 0 {
        Some(c.add_creg("ed", ed_len))
    } else {
        None
    };

    let sys: Vec<usize> = sys_a.range().collect();
    c.append_mapped(&p.psi_prep, &sys, &[])?;
    let lane_b: Vec<usize> = sys_b
        .as_ref()
        .map(|r| r.range().collect())
        .unwrap_or_default();
    if sys_b.is_some() {
        c.append_mapped(&p.ref_prep, &lane_b, &[])?;
    }
    start(p, &mut c, &phase);

    let last_gadget = policy
        .choices
        .iter()
        .rposition(|b| *b == BlockChoice::Gadget);
    let mut round = 0;
    for (j, choice) in policy.choices.iter().enumerate() {
        let control = phase.get(j);
        match choice {
            BlockChoice::Controlled => emit_controlled_power(p, &mut c, &sys, control, 1 << j)?,
            BlockChoice::Gadget => {
                let (ua, ub) = if j == 0 {
                    (Circuit::new(n), p.power(1))
                } else {
                    let half = p.power(1 << (j - 1));
                    (half.clone(), half)
                };
                let spec = GadgetSpec {
                    ua,
                    ub,
                    theta: p.reference.bit_theta(j),
                    use_cat: fan.is_some(),
                    measure_reset: policy.measure_reset,
                };
                let ed_cbits = if policy.measure_reset {
                    let ed = ed.as_ref().expect("allocated");
                    (round * (n + f_len)..(round + 1) * (n + f_len))
                        .map(|k| ed.get(k))
                        .collect()
                } else {
                    Vec::new()
                };
                let layout = GadgetLayout {
                    control,
                    sys_a: sys.clone(),
                    sys_b: lane_b.clone(),
                    fanout: fan
                        .as_ref()
                        .map(|r| r.range().collect())
                        .unwrap_or_default(),
                    ed_cbits,
                    ref_prep: Some(p.ref_prep.clone()),
                    reset: Some(j) != last_gadget,
                };
                emit_gadget(&mut c, &spec, &layout)?;
                round += 1;
            }
        }
    }
    if rounds > 0 && !policy.measure_reset {
        let ed = ed.as_ref().expect("allocated");
        let checked: Vec<usize> = lane_b
            .iter()
            .copied()
            .chain(fan.iter().flat_map(|r| r.range()))
            .collect();
        for (k, q) in checked.into_iter().enumerate() {
            c.measure(q, ed.get(k));
        }
    }
    finish(&mut c, &phase, &phase_bits);
    Ok(c)
}

/// Compute-uncompute QPE: per bit, controlled `U_ψ`, uncontrolled `U(τ)^{2^j}`,
/// controlled `U_ψ†`, then `P(2^j Θ)` on the control. The system starts in
/// all-zeros and the vacuum serves as the reference.
pub fn cu_qpe(p: &QpeProblem) -> Result<Circuit> {
    let n = p.n();
    let mut c = Circuit::empty();
    let phase = c.add_qreg("phase", p.m);
    let sys = c.add_qreg("sys", n);
    let phase_bits = c.add_creg("phase", p.m);
    start(p, &mut c, &phase);
    let prep = p.psi_prep.controlled()?;
    let unprep = p.psi_prep.inverse()?.controlled()?;
    let sys_q: Vec<usize> = sys.range().collect();
    for j in 0..p.m {
        let control = phase.get(j);
        let mut map = sys_q.clone();
        map.push(control);
        c.append_mapped(&prep, &map, &[])?;
        c.append_mapped(&p.power(1 << j), &sys_q, &[])?;
        c.append_mapped(&unprep, &map, &[])?;
        c.phase(control, p.reference.bit_theta(j));
    }
    finish(&mut c, &phase, &phase_bits);
    Ok(c)
}
