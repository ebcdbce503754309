//! Pariser-Parr-Pople model of ethylene on four spin-orbitals
//! `(1↑, 2↑, 1↓, 2↓)` mapped to qubits 0..3.

use nalgebra::RealField;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, EvolutionStep};
use crate::error::{Error, Result};
use crate::pauli::{eigensystem_in_subspace, DenseState, Pauli, PauliSum, PauliWord};
use crate::scalar::{lit, to_f64, Real};
use crate::sim;

pub const N_QUBITS: usize = 4;

/// Basis indices of the `(N↑, N↓) = (1, 1)` sector: `|1010>, |0101>, |0110>, |1001>`
/// in site labels.
pub const SINGLET_SECTOR: [usize; 4] = [5, 10, 6, 9];

/// Ansatz angle maximizing the overlap with the exact singlet ground state.
pub const THETA_STAR: f64 = 0.94648805;

pub const THETA_MEAN_FIELD: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PppParams {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Constant energy shift, reported but never simulated.
    pub c_tot: f64,
}

impl Default for PppParams {
    fn default() -> Self {
        Self {
            alpha: -0.055557,
            beta1: 0.067525,
            beta2: 0.104616,
            c_tot: -0.347936,
        }
    }
}

/// Hopping part `H1` and density-density part `H2`.
pub fn build_ppp<T: Real>(p: &PppParams) -> (PauliSum<T>, PauliSum<T>) {
    let xx = |i, j| PauliWord::new([(i, Pauli::X), (j, Pauli::X)]);
    let yy = |i, j| PauliWord::new([(i, Pauli::Y), (j, Pauli::Y)]);
    let a = lit::<T>(p.alpha);
    let h1 = PauliSum::from_real([(xx(0, 1), a), (yy(0, 1), a), (xx(2, 3), a), (yy(2, 3), a)]);
    let (b1, b2) = (lit::<T>(p.beta1), lit::<T>(p.beta2));
    let h2 = PauliSum::from_real([
        (PauliWord::zz(0, 3), b1),
        (PauliWord::zz(1, 2), b1),
        (PauliWord::zz(0, 2), b2),
        (PauliWord::zz(1, 3), b2),
    ]);
    (h1, h2)
}

pub fn hamiltonian<T: Real>(p: &PppParams) -> PauliSum<T> {
    let (h1, h2) = build_ppp(p);
    h1 + h2
}

/// Ansatz `H_0, Ry_2(2θ), CX(0,2), CX(0,1), CX(2,3), X_1, X_3`.
pub fn ansatz_circuit(theta: f64) -> Circuit {
    let mut c = Circuit::new(N_QUBITS);
    c.h(0)
        .ry(2, 2.0 * theta)
        .cx(0, 2)
        .cx(0, 1)
        .cx(2, 3)
        .x(1)
        .x(3);
    c
}

/// `cos θ (|5> + |10>)/√2 + sin θ (|6> + |9>)/√2`.
pub fn ansatz_state<T: Real>(theta: f64) -> DenseState<T> {
    let r = T::FRAC_1_SQRT_2();
    let (s, c) = (lit::<T>(theta.sin()) * r, lit::<T>(theta.cos()) * r);
    let mut amps = vec![num_complex::Complex::new(T::zero(), T::zero()); 16];
    amps[5].re = c;
    amps[10].re = c;
    amps[6].re = s;
    amps[9].re = s;
    DenseState::from_amplitudes(N_QUBITS, amps).expect("four qubits")
}

/// Eigenpairs of `h` inside the singlet-carrying two-electron sector.
pub fn sector_eigensystem<T: Real + RealField>(h: &PauliSum<T>) -> Result<Vec<(T, DenseState<T>)>> {
    eigensystem_in_subspace(h, N_QUBITS, &SINGLET_SECTOR)
}

/// Reference energies of the model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEnergies {
    pub ground: f64,
    pub triplet: f64,
    pub vacuum: f64,
    pub gap: f64,
    pub mean_field: f64,
    pub mean_field_overlap_sq: f64,
}

pub fn reference_energies(p: &PppParams) -> Result<ReferenceEnergies> {
    let h = hamiltonian::<f64>(p);
    let sector = sector_eigensystem(&h)?;
    let (ground, gs) = &sector[0];
    let mf = ansatz_state::<f64>(THETA_MEAN_FIELD);
    let triplet = triplet_energy(&h)?;
    Ok(ReferenceEnergies {
        ground: *ground,
        triplet,
        vacuum: h.vacuum_energy(),
        gap: triplet - ground,
        mean_field: h.expectation(&mf)?,
        mean_field_overlap_sq: gs.fidelity(&mf),
    })
}

/// Energy of the `M_s = 0` triplet `(|6> - |9>)/√2`.
fn triplet_energy(h: &PauliSum<f64>) -> Result<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![num_complex::Complex::new(0.0, 0.0); 16];
    amps[6].re = r;
    amps[9].re = -r;
    let t = DenseState::from_amplitudes(N_QUBITS, amps)?;
    let ht = h.apply(&t)?;
    let e = t.inner(&ht).re;
    let resid: f64 = ht
        .amplitudes()
        .iter()
        .zip(t.amplitudes())
        .map(|(a, b)| (a - b * e).norm_sqr())
        .sum();
    if resid.sqrt() > 1e-10 {
        return Err(Error::InvalidArgument(
            "triplet combination is not an eigenstate".into(),
        ));
    }
    Ok(e)
}

/// `ΔH2 = [H1,[H1,H2]]/24 - [H2,[H2,H1]]/12`.
pub fn delta_h2<T: Real>(h1: &PauliSum<T>, h2: &PauliSum<T>) -> PauliSum<T> {
    let a = h1
        .commutator(&h1.commutator(h2))
        .scale_real(T::one() / lit(24.0));
    let b = h2
        .commutator(&h2.commutator(h1))
        .scale_real(T::one() / lit(12.0));
    &a - &b
}

/// `λ = -<ΔH2> / (2 <H1>)`.
pub fn lambda_correction<T: Real>(
    h1: &PauliSum<T>,
    h2: &PauliSum<T>,
    psi: &DenseState<T>,
) -> Result<T> {
    let den = h1.expectation(psi)?;
    if den.abs() <= lit(1e-12) {
        return Err(Error::VanishingDenominator(to_f64(den)));
    }
    let num = delta_h2(h1, h2).expectation(psi)?;
    Ok(-num / (den + den))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterSchedule {
    pub tau: f64,
    pub s1: f64,
    pub s2: f64,
    pub lambda: f64,
    pub m: usize,
}

impl TrotterSchedule {
    pub fn new(tau: f64, m: usize, lambda: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("M must be at least 1".into()));
        }
        Ok(Self {
            tau,
            s1: tau / 2.0 + lambda * tau.powi(3),
            s2: tau,
            lambda,
            m,
        })
    }

    /// Grid resolution `π / (2^M τ)`.
    pub fn resolution(&self) -> f64 {
        std::f64::consts::PI / ((1u64 << self.m) as f64 * self.tau)
    }
}

pub fn schedule(tau: f64, m: usize, lambda: f64) -> Result<TrotterSchedule> {
    TrotterSchedule::new(tau, m, lambda)
}

/// `exp(-i s1 H1) exp(-i s2 H2) exp(-i s1 H1)` as an ordered product of Pauli exponentials.
pub fn trotter_step(
    h1: &PauliSum<f64>,
    h2: &PauliSum<f64>,
    s: &TrotterSchedule,
) -> Result<EvolutionStep> {
    let mut step = EvolutionStep::new(N_QUBITS);
    step.push_sum(h1, s.s1)?
        .push_sum(h2, s.s2)?
        .push_sum(h1, s.s1)?;
    Ok(step)
}

pub fn trotter_step_circuit(
    h1: &PauliSum<f64>,
    h2: &PauliSum<f64>,
    s: &TrotterSchedule,
) -> Result<Circuit> {
    Ok(trotter_step(h1, h2, s)?.circuit())
}

/// Ansatz angle whose state is an exact eigenvector of `step`, choosing the
/// eigenvector nearest `near` (both angles modulo π).
///
/// The step restricted to `span{ψ(0), ψ(π/2)}` is a complex-symmetric unitary,
/// hence diagonalized by a real rotation.
pub fn step_eigen_theta(step: &EvolutionStep, near: f64) -> Result<f64> {
    let c = step.circuit();
    let a = ansatz_state::<f64>(0.0);
    let b = ansatz_state::<f64>(std::f64::consts::FRAC_PI_2);
    let ua = sim::evolve(&c, a.clone())?;
    let ub = sim::evolve(&c, b.clone())?;
    let u = [[a.inner(&ua), a.inner(&ub)], [b.inner(&ua), b.inner(&ub)]];
    let leak = 1.0 - (u[0][0].norm_sqr() + u[1][0].norm_sqr());
    if leak.abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "step leaks out of the ansatz plane ({leak:e})"
        )));
    }
    let mix = 0.5 * (5f64.sqrt() - 1.0);
    let m = |r: usize, s: usize| u[r][s].re + mix * u[r][s].im;
    let phi = 0.5 * (2.0 * m(0, 1)).atan2(m(0, 0) - m(1, 1));
    let candidates = [phi, phi + std::f64::consts::FRAC_PI_2];
    let dist = |t: f64| {
        let d = (t - near).rem_euclid(std::f64::consts::PI);
        d.min(std::f64::consts::PI - d)
    };
    Ok(candidates
        .into_iter()
        .min_by(|x, y| dist(*x).total_cmp(&dist(*y)))
        .expect("two candidates")
        .rem_euclid(std::f64::consts::PI))
}
