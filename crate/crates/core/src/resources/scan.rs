use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::blocks::{totals_and_gains, StepCosts, Totals};
use super::closed_form::{step_cost, Order};
use super::cost::{CostVector, Metric};
use super::primitives::{check_n, primitive_costs};
use crate::error::{Error, Result};

/// Double-factorized coefficients: one-body `alphas` and `L` two-body factors.
///
/// Only the strictly lower triangle `i > j` of each factor enters the cost model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfSpec {
    pub n: usize,
    pub alphas: Vec<f64>,
    pub betas: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub spin_block: bool,
}

impl DfSpec {
    pub fn l(&self) -> usize {
        self.betas.len()
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n)?;
        if self.spin_block && self.n < 4 {
            return Err(Error::InvalidArgument("spin-block W needs N >= 4".into()));
        }
        if self.alphas.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} alphas, got {}",
                self.n,
                self.alphas.len()
            )));
        }
        if self.betas.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one factor required".into(),
            ));
        }
        for (l, b) in self.betas.iter().enumerate() {
            if b.len() != self.n || b.iter().any(|row| row.len() != self.n) {
                return Err(Error::InvalidArgument(format!(
                    "factor {l} is not {0}x{0}",
                    self.n
                )));
            }
        }
        let finite = self
            .alphas
            .iter()
            .chain(self.betas.iter().flatten().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DfSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Seeded random coefficients with factor magnitudes decaying geometrically in `l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n: usize,
    pub l: usize,
    pub seed: u64,
    pub alpha_scale: f64,
    pub beta_scale: f64,
    pub decay: f64,
    pub spin_block: bool,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n: 12,
            l: 40,
            seed: 7,
            alpha_scale: 1.0,
            beta_scale: 0.5,
            decay: 0.9,
            spin_block: false,
        }
    }
}

impl SyntheticSpec {
    pub fn generate(&self) -> Result<DfSpec> {
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "decay must be in (0, 1], got {}",
                self.decay
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let n = self.n;
        let alphas = (0..n)
            .map(|_| self.alpha_scale * rng.gen_range(-1.0..1.0))
            .collect();
        let betas = (0..self.l)
            .map(|l| {
                let scale = self.beta_scale * self.decay.powi(l as i32);
                let mut b = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in 0..i {
                        let v = scale * rng.gen_range(-1.0..1.0);
                        b[i][j] = v;
                        b[j][i] = v;
                    }
                }
                b
            })
            .collect();
        let spec = DfSpec {
            n,
            alphas,
            betas,
            spin_block: self.spin_block,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `sum |alpha_i| + sum_{l < retained} sum_{i > j} |beta_ij^(l)|`.
pub fn lambda_norm(spec: &DfSpec, retained: usize) -> Result<f64> {
    if retained > spec.l() {
        return Err(Error::InvalidArgument(format!(
            "cannot retain {retained} of {} factors",
            spec.l()
        )));
    }
    let one: f64 = spec.alphas.iter().map(|a| a.abs()).sum();
    let two: f64 = spec.betas[..retained]
        .iter()
        .map(|b| {
            (0..spec.n)
                .map(|i| (0..i).map(|j| b[i][j].abs()).sum::<f64>())
                .sum::<f64>()
        })
        .sum();
    Ok(one + two)
}

/// Error budget and Trotter heuristic calibration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub eps_chem: f64,
    pub xi: f64,
    pub delta_ref: f64,
    pub n_ref: f64,
    pub tau_ref: f64,
    pub trotter_order: u32,
    pub cat: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            eps_chem: 1.6e-3,
            xi: 1.7,
            delta_ref: 0.01630,
            n_ref: 12.0,
            tau_ref: 1.0,
            trotter_order: 2,
            cat: true,
        }
    }
}

impl ScanConfig {
    /// Equal share of the chemical-accuracy budget for each error source.
    pub fn eps_share(&self) -> f64 {
        self.eps_chem / 4.0
    }

    pub fn c_ts(&self) -> f64 {
        (self.delta_ref / self.tau_ref.powi(3)).sqrt() / self.n_ref.powf(self.xi)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.eps_chem, self.delta_ref, self.n_ref, self.tau_ref]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive || !self.xi.is_finite() {
            return Err(Error::InvalidArgument(
                "scan parameters must be finite and positive".into(),
            ));
        }
        Order::from_int(self.trotter_order)?;
        Ok(())
    }
}

/// T gates per synthesized rotation at per-rotation error `eps_rot`.
pub fn t_per_rotation(eps_rot: f64) -> Result<u64> {
    if !(eps_rot > 0.0 && eps_rot.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rotation error must be positive, got {eps_rot}"
        )));
    }
    Ok((3.0 * (1.0 / eps_rot).log2() + 10.0).ceil().max(0.0) as u64)
}

/// Phase bits from the grid condition, at least one.
pub fn grid_bits(eps_grid: f64, tau: f64) -> u32 {
    let m = (PI / (eps_grid * tau)).log2().ceil() + 1.0;
    m.max(1.0) as u32
}

/// Rotation synthesis settings of one method.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Synthesis {
    pub rz_total: f64,
    pub eps_rot: f64,
    pub t_eps: u64,
}

/// Output of the scan pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n: usize,
    pub l_full: usize,
    pub l_retained: usize,
    pub lambda_full: f64,
    pub lambda_l: f64,
    pub tau: f64,
    pub m: u32,
    pub k: u64,
    pub c_ts: f64,
    pub n_trot: u64,
    pub qpe_synthesis: Synthesis,
    pub se_qpe_synthesis: Synthesis,
    pub qpe: CostVector<f64>,
    pub se_qpe: CostVector<f64>,
    pub gains: CostVector<f64>,
    pub gains_closed_form: CostVector<f64>,
}

fn unit_costs(
    order: Order,
    spec: &DfSpec,
    l: usize,
    n_trot: u64,
    t_eps: f64,
) -> Result<StepCosts<f64>> {
    let plain = step_cost(order, spec.n, l, false, spec.spin_block, t_eps)?;
    let controlled = step_cost(order, spec.n, l, true, spec.spin_block, t_eps)?;
    Ok(StepCosts { plain, controlled }.scale(n_trot as f64))
}

fn synthesis(rz_total: f64, tau: f64, eps_synth: f64) -> Result<Synthesis> {
    let eps_rot = tau * eps_synth / rz_total;
    Ok(Synthesis {
        rz_total,
        eps_rot,
        t_eps: t_per_rotation(eps_rot)?,
    })
}

/// Truncation, evolution time, grid bits, Trotter count, synthesis cost and
/// totals of both methods.
pub fn scan(spec: &DfSpec, cfg: &ScanConfig) -> Result<ResourceReport> {
    spec.validate()?;
    cfg.validate()?;
    let order = Order::from_int(cfg.trotter_order)?;
    let eps = cfg.eps_share();
    let lambda_full = lambda_norm(spec, spec.l())?;
    let mut l_retained = None;
    for l in 1..=spec.l() {
        if lambda_full - lambda_norm(spec, l)? <= eps {
            l_retained = Some(l);
            break;
        }
    }
    let l = l_retained
        .ok_or_else(|| Error::InvalidArgument("truncation budget cannot be met".into()))?;
    let lambda_l = lambda_norm(spec, l)?;
    if lambda_l <= 0.0 {
        return Err(Error::VanishingDenominator(lambda_l));
    }
    let tau = PI / lambda_l;
    let m = grid_bits(eps, tau);
    if m > 62 {
        return Err(Error::InvalidArgument(format!(
            "{m} phase bits exceed the supported range"
        )));
    }
    let c_ts = cfg.c_ts();
    let n_trot = (c_ts * tau * (spec.n as f64).powf(cfg.xi) / eps.sqrt())
        .ceil()
        .max(1.0) as u64;

    let swap_of = |t_eps: f64| -> Result<CostVector<f64>> {
        let p = primitive_costs(spec.n, false, t_eps)?;
        Ok(if cfg.cat {
            p.swap_pair_cat
        } else {
            p.swap_pair_serial
        })
    };
    let rz_only = totals_and_gains(m, &unit_costs(order, spec, l, n_trot, 0.0)?, &swap_of(0.0)?)?;
    let qpe_syn = synthesis(rz_only.qpe.rz_count, tau, eps)?;
    let se_syn = synthesis(rz_only.se_qpe.rz_count, tau, eps)?;

    let run = |t_eps: u64| -> Result<Totals> {
        let t = t_eps as f64;
        totals_and_gains(m, &unit_costs(order, spec, l, n_trot, t)?, &swap_of(t)?)
    };
    let qpe_totals = run(qpe_syn.t_eps)?;
    let se_totals = run(se_syn.t_eps)?;
    let qpe = qpe_totals.qpe;
    let se_qpe = se_totals.se_qpe;
    let gains = CostVector {
        cx_count: se_qpe.cx_count / qpe.cx_count,
        rz_count: se_qpe.rz_count / qpe.rz_count,
        t_count: se_qpe.t_count / qpe.t_count,
        cx_depth: se_qpe.cx_depth / qpe.cx_depth,
        rz_depth: se_qpe.rz_depth / qpe.rz_depth,
        t_depth: se_qpe.t_depth / qpe.t_depth,
    };
    Ok(ResourceReport {
        n: spec.n,
        l_full: spec.l(),
        l_retained: l,
        lambda_full,
        lambda_l,
        tau,
        m,
        k: rz_only.k,
        c_ts,
        n_trot,
        qpe_synthesis: qpe_syn,
        se_qpe_synthesis: se_syn,
        qpe,
        se_qpe,
        gains,
        gains_closed_form: se_totals.gains_closed_form,
    })
}

/// Scans synthetic specs for each `n`, with `l = l_per_n * n` factors.
pub fn scan_synthetic_grid(
    ns: &[usize],
    l_per_n: usize,
    base: &SyntheticSpec,
    cfg: &ScanConfig,
) -> Result<Vec<ResourceReport>> {
    ns.par_iter()
        .map(|&n| {
            let spec = SyntheticSpec {
                n,
                l: (l_per_n * n).max(1),
                ..base.clone()
            }
            .generate()?;
            scan(&spec, cfg)
        })
        .collect()
}

impl ResourceReport {
    /// One row per method and metric.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,method,metric,total,gain_vs_qpe\n");
        for (name, totals) in [("QPE", &self.qpe), ("SE-QPE", &self.se_qpe)] {
            for metric in Metric::ALL {
                let gain = totals.get(metric) / self.qpe.get(metric);
                let _ = writeln!(
                    s,
                    "{},{name},{},{:.6e},{gain:.6}",
                    self.n,
                    metric.name(),
                    totals.get(metric)
                );
            }
        }
        s
    }
}

/// Concatenated rows of several reports under a single header.
pub fn reports_csv(reports: &[ResourceReport]) -> String {
    let mut out = String::from("n,method,metric,total,gain_vs_qpe\n");
    for r in reports {
        out.extend(r.to_csv().lines().skip(1).map(|l| format!("{l}\n")));
    }
    out
}
