//! End-to-end ethylene phase-estimation runs: problem setup, circuit variants,
//! exact marginals, sampling and summary statistics.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{count, depth, Circuit, CostSummary, GateClass};
use crate::error::{Error, Result};
use crate::ethylene::{
    ansatz_circuit, ansatz_state, build_ppp, hamiltonian, lambda_correction, reference_energies,
    schedule, step_eigen_theta, trotter_step, PppParams, ReferenceEnergies, TrotterSchedule,
    THETA_MEAN_FIELD, THETA_STAR,
};
use crate::post::RunStats;
use crate::qpe::{
    canonical_qpe, cswap_gadget, cu_qpe, reference_theta, se_qpe, BlockChoice, GadgetSpec,
    QpeProblem, VariantPolicy,
};
use crate::sim::{self, NoiseConfig, ShotRecord};

/// System input of the phase register.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputState {
    MeanField,
    /// Ansatz angle with maximal ground-state overlap.
    Optimal,
    /// Ansatz angle whose state is an eigenvector of the Trotter step.
    StepEigenstate,
    Angle(f64),
}

impl FromStr for InputState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean-field" => Ok(InputState::MeanField),
            "optimal" => Ok(InputState::Optimal),
            "eigenstate" => Ok(InputState::StepEigenstate),
            _ => s
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(InputState::Angle)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "input {s:?} is not mean-field, optimal, eigenstate or an angle"
                    ))
                }),
        }
    }
}

impl fmt::Display for InputState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputState::MeanField => f.write_str("mean-field"),
            InputState::Optimal => f.write_str("optimal"),
            InputState::StepEigenstate => f.write_str("eigenstate"),
            InputState::Angle(t) => write!(f, "{t}"),
        }
    }
}

/// Phase-estimation construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    Qpe,
    CuQpe,
    SeQpe,
    CatSeQpe,
    CatSeQpeMr,
    /// Controlled block on bit 0, gadgets on the rest.
    Mixed,
    /// Explicit per-bit policy such as `ccggg`.
    Policy(VariantPolicy),
}

impl Variant {
    pub const NAMED: [&'static str; 6] = [
        "qpe",
        "cu-qpe",
        "se-qpe",
        "cat-se-qpe",
        "cat-se-qpe-mr",
        "mixed-se-qpe",
    ];

    pub fn policy(&self, m: usize) -> Option<VariantPolicy> {
        match self {
            Variant::Qpe => Some(VariantPolicy::all_controlled(m)),
            Variant::CuQpe => None,
            Variant::SeQpe => Some(VariantPolicy::all_gadget(m, false, false)),
            Variant::CatSeQpe => Some(VariantPolicy::all_gadget(m, true, false)),
            Variant::CatSeQpeMr => Some(VariantPolicy::all_gadget(m, true, true)),
            Variant::Mixed => {
                let mut p = VariantPolicy::all_gadget(m, false, false);
                p.choices[0] = BlockChoice::Controlled;
                Some(p)
            }
            Variant::Policy(p) => Some(p.clone()),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    /// Named variants, or `policy:<c|g...>[+cat][+mr]`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qpe" => Ok(Variant::Qpe),
            "cu-qpe" => Ok(Variant::CuQpe),
            "se-qpe" => Ok(Variant::SeQpe),
            "cat-se-qpe" => Ok(Variant::CatSeQpe),
            "cat-se-qpe-mr" => Ok(Variant::CatSeQpeMr),
            "mixed-se-qpe" => Ok(Variant::Mixed),
            _ => {
                let rest = s.strip_prefix("policy:").ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown variant {s:?}; expected one of {} or policy:<c|g...>[+cat][+mr]",
                        Variant::NAMED.join(", ")
                    ))
                })?;
                let mut parts = rest.split('+');
                let choices = parts.next().unwrap_or_default();
                let (mut cat, mut mr) = (false, false);
                for flag in parts {
                    match flag {
                        "cat" => cat = true,
                        "mr" => mr = true,
                        _ => {
                            return Err(Error::InvalidArgument(format!(
                                "unknown policy flag {flag:?}"
                            )))
                        }
                    }
                }
                Ok(Variant::Policy(VariantPolicy::parse(choices, cat, mr)?))
            }
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Policy(p) => {
                write!(f, "policy:{}", p.policy_string())?;
                if p.cat {
                    f.write_str("+cat")?;
                }
                if p.measure_reset {
                    f.write_str("+mr")?;
                }
                Ok(())
            }
            named => {
                let i = [
                    Variant::Qpe,
                    Variant::CuQpe,
                    Variant::SeQpe,
                    Variant::CatSeQpe,
                    Variant::CatSeQpeMr,
                    Variant::Mixed,
                ]
                .iter()
                .position(|v| v == named)
                .expect("named variant");
                f.write_str(Variant::NAMED[i])
            }
        }
    }
}

/// Ethylene phase-estimation experiment at fixed `(M, τ)`.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub params: PppParams,
    pub schedule: TrotterSchedule,
    pub input_theta: f64,
    pub energies: ReferenceEnergies,
    pub problem: QpeProblem,
}

impl Experiment {
    /// The bias correction is always evaluated on the mean-field state.
    pub fn new(params: PppParams, m: usize, tau: f64, input: InputState) -> Result<Self> {
        let (h1, h2) = build_ppp::<f64>(&params);
        let h = hamiltonian::<f64>(&params);
        let lambda = lambda_correction(&h1, &h2, &ansatz_state::<f64>(THETA_MEAN_FIELD))?;
        let schedule = schedule(tau, m, lambda)?;
        let step = trotter_step(&h1, &h2, &schedule)?;
        let input_theta = match input {
            InputState::MeanField => THETA_MEAN_FIELD,
            InputState::Optimal => THETA_STAR,
            InputState::StepEigenstate => step_eigen_theta(&step, THETA_STAR)?,
            InputState::Angle(t) => t,
        };
        let reference = reference_theta(&h, tau)?;
        let problem = QpeProblem::new(m, step, ansatz_circuit(input_theta), reference)?;
        Ok(Self {
            params,
            schedule,
            input_theta,
            energies: reference_energies(&params)?,
            problem,
        })
    }

    pub fn m(&self) -> usize {
        self.problem.m
    }

    pub fn tau(&self) -> f64 {
        self.schedule.tau
    }

    pub fn circuit(&self, variant: &Variant) -> Result<Circuit> {
        match variant.policy(self.m()) {
            None => cu_qpe(&self.problem),
            Some(p) if p.gadget_rounds() == 0 => canonical_qpe(&self.problem),
            Some(p) => se_qpe(&self.problem, &p),
        }
    }

    pub fn exact_distribution(&self, variant: &Variant) -> Result<Vec<f64>> {
        sim::phase_marginal::<f64>(&self.circuit(variant)?)
    }

    pub fn exact_stats(&self, variant: &Variant) -> Result<RunStats> {
        RunStats::from_distribution(
            &self.exact_distribution(variant)?,
            self.m(),
            self.tau(),
            Some(self.energies.ground),
        )
    }

    pub fn sample(
        &self,
        variant: &Variant,
        shots: usize,
        noise: Option<&NoiseConfig>,
        seed: u64,
    ) -> Result<Vec<ShotRecord>> {
        sim::sample(&self.circuit(variant)?, shots, noise, seed)
    }

    pub fn sampled_stats(&self, records: &[ShotRecord]) -> Result<RunStats> {
        RunStats::from_filter(
            &sim::filter_stats(records)?,
            self.m(),
            self.tau(),
            Some(self.energies.ground),
        )
    }

    pub fn costs(&self, variant: &Variant) -> Result<CostSummary> {
        Ok(CostSummary::of(&self.circuit(variant)?, 1))
    }
}

/// CX-equivalent count and depth of one phase bit's evolution block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitBlockCosts {
    pub j: usize,
    pub controlled: (u64, u64),
    pub gadget: (u64, u64),
    pub cat_gadget: (u64, u64),
}

impl Experiment {
    /// Controlled `U^{2^j}` against the plain and cat gadgets for bit `j`.
    pub fn bit_block_costs(&self, j: usize) -> Result<BitBlockCosts> {
        let n = self.problem.n();
        let cu = self.problem.step.controlled_circuit();
        let mut controlled = Circuit::new(n + 1);
        let map: Vec<usize> = (0..=n).collect();
        for _ in 0..1usize << j {
            controlled.append_mapped(&cu, &map, &[])?;
        }
        let (ua, ub) = if j == 0 {
            (Circuit::new(n), self.problem.power(1))
        } else {
            let half = self.problem.power(1 << (j - 1));
            (half.clone(), half)
        };
        let gadget = |use_cat| {
            cswap_gadget(&GadgetSpec {
                ua: ua.clone(),
                ub: ub.clone(),
                theta: self.problem.reference.bit_theta(j),
                use_cat,
                measure_reset: false,
            })
        };
        let cd = |c: &Circuit| (count(c, GateClass::Cx), depth(c, GateClass::Cx));
        Ok(BitBlockCosts {
            j,
            controlled: cd(&controlled),
            gadget: cd(&gadget(false)?),
            cat_gadget: cd(&gadget(true)?),
        })
    }
}
