//! Phase-to-energy conversion, branch selection and distribution statistics.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{FilterStats, ShotRecord};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    pub phi: f64,
    pub branch: i64,
    pub energy: f64,
    pub resolution: f64,
}

/// `π / (2^M τ)`.
pub fn resolution(m: usize, tau: f64) -> f64 {
    PI / ((1u64 << m) as f64 * tau)
}

/// `E = -(2π/τ)(x/2^M + b)`.
pub fn phase_to_energy(x: usize, m: usize, tau: f64, branch: i64) -> Result<EnergyEstimate> {
    if x >= 1 << m {
        return Err(Error::InvalidArgument(format!(
            "phase value {x} outside {m} bits"
        )));
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let phi = x as f64 / (1u64 << m) as f64;
    Ok(EnergyEstimate {
        phi,
        branch,
        energy: -(TAU / tau) * (phi + branch as f64),
        resolution: resolution(m, tau),
    })
}

/// `b = floor(-E_ref τ / 2π - φ + 1/2)`.
pub fn select_branch(e_ref: f64, tau: f64, phi: f64) -> Result<i64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau must be positive, got {tau}"
        )));
    }
    Ok((-e_ref * tau / TAU - phi + 0.5).floor() as i64)
}

/// Grid index nearest the phase of `energy`, i.e. `round(-E τ 2^M / 2π) mod 2^M`.
pub fn energy_to_phase(energy: f64, m: usize, tau: f64) -> usize {
    let k = 1u64 << m;
    ((-energy * tau / TAU * k as f64).round() as i64).rem_euclid(k as i64) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakStats {
    pub modal: usize,
    pub modal_share: f64,
    /// Mass within one bin either side of the target (cyclic), if a target was given.
    pub window_share: Option<f64>,
}

/// Modal outcome (lowest index on ties), its share and the ±1-bin window share.
pub fn peak_stats(dist: &[f64], target: Option<usize>) -> Result<PeakStats> {
    if dist.is_empty() {
        return Err(Error::EmptyInput);
    }
    let total: f64 = dist.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("distribution has no mass".into()));
    }
    let (modal, best) =
        dist.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc },
        );
    let n = dist.len();
    let window_share =
        target.map(|t| [n - 1, 0, 1].iter().map(|d| dist[(t + d) % n]).sum::<f64>() / total);
    Ok(PeakStats {
        modal,
        modal_share: best / total,
        window_share,
    })
}

pub fn peak_stats_records(records: &[ShotRecord], target: Option<usize>) -> Result<PeakStats> {
    peak_stats(&crate::sim::histogram(records)?, target)
}

/// Total-variation distance `½ Σ |p - q|`.
pub fn distribution_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::InvalidArgument(format!(
            "support sizes differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    for (name, d) in [("p", p), ("q", q)] {
        let s: f64 = d.iter().sum();
        if (s - 1.0).abs() > 1e-8 || d.iter().any(|&v| v < -1e-12) {
            return Err(Error::InvalidArgument(format!(
                "{name} is not normalized (sum {s})"
            )));
        }
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Summary mirroring the columns of a run table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    /// Modal phase bitstring, most significant bit first.
    pub modal: String,
    pub modal_share_raw: f64,
    pub modal_share_filtered: Option<f64>,
    pub retention: f64,
    pub energy: f64,
    pub resolution: f64,
}

impl RunStats {
    /// Stats of an exact distribution (no ED bits, full retention).
    pub fn from_distribution(dist: &[f64], m: usize, tau: f64, e_ref: Option<f64>) -> Result<Self> {
        let peak = peak_stats(dist, None)?;
        let est = estimate(peak.modal, m, tau, e_ref)?;
        Ok(Self {
            modal: bitstring(peak.modal, m),
            modal_share_raw: peak.modal_share,
            modal_share_filtered: Some(peak.modal_share),
            retention: 1.0,
            energy: est.energy,
            resolution: est.resolution,
        })
    }

    /// Stats of sampled shots; the energy is read from the filtered mode when
    /// any shot survives, else from the raw mode.
    pub fn from_filter(
        stats: &FilterStats,
        m: usize,
        tau: f64,
        e_ref: Option<f64>,
    ) -> Result<Self> {
        let x = stats.modal_filtered.unwrap_or(stats.modal_raw);
        let est = estimate(x, m, tau, e_ref)?;
        Ok(Self {
            modal: bitstring(x, m),
            modal_share_raw: stats.modal_share_raw,
            modal_share_filtered: stats.modal_share_filtered,
            retention: stats.retention,
            energy: est.energy,
            resolution: est.resolution,
        })
    }
}

fn estimate(x: usize, m: usize, tau: f64, e_ref: Option<f64>) -> Result<EnergyEstimate> {
    let phi = x as f64 / (1u64 << m) as f64;
    let b = match e_ref {
        Some(e) => select_branch(e, tau, phi)?,
        None => 0,
    };
    phase_to_energy(x, m, tau, b)
}

/// Fraction of shots whose ED bits of round `k` are not all zero, for
/// `rounds` equal consecutive slices of the ED register.
pub fn ed_failure_by_round(records: &[ShotRecord], rounds: usize) -> Result<Vec<f64>> {
    let first = records.first().ok_or(Error::EmptyInput)?;
    if rounds == 0 || first.ed.len() % rounds != 0 {
        return Err(Error::InvalidArgument(format!(
            "{} ED bits do not split into {rounds} rounds",
            first.ed.len()
        )));
    }
    let per = first.ed.len() / rounds;
    Ok((0..rounds)
        .map(|k| {
            let bad = records
                .iter()
                .filter(|r| r.ed[k * per..(k + 1) * per].iter().any(|b| *b))
                .count();
            bad as f64 / records.len() as f64
        })
        .collect())
}

pub fn bitstring(x: usize, m: usize) -> String {
    format!("{x:0m$b}")
}
