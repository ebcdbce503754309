//! Dense state-vector execution, exact phase marginals and shot sampling.

mod kernels;
mod program;
mod sample;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::{check_cap, DenseState, Matrix, DENSE_CAP};
use crate::scalar::Real;

pub use program::{evolve, Program, MAX_FUSE};
pub use sample::{phase_marginal, sample, NoiseConfig, Sampler, ShotRecord, DETERMINISTIC_TOL};

/// Dense unitary of a measurement-free circuit, column `j` = image of `|j>`.
pub fn unitary<T: Real>(c: &Circuit) -> Result<Matrix<T>> {
    check_cap(c.n_qubits(), DENSE_CAP)?;
    if c.has_measurements() {
        return Err(Error::MeasurementInEvolve);
    }
    let p = Program::<T>::compile(c)?;
    let dim = 1usize << c.n_qubits();
    let mut m = Matrix::<T>::zeros(dim, dim);
    for j in 0..dim {
        let out = p.evolve(DenseState::basis(c.n_qubits(), j)?);
        for (i, a) in out.amplitudes().iter().enumerate() {
            m[(i, j)] = *a;
        }
    }
    Ok(m)
}

/// Shot-level filtering summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterStats {
    pub total: usize,
    pub retained: usize,
    pub retention: f64,
    /// Modal phase value and its share before filtering.
    pub modal_raw: usize,
    pub modal_share_raw: f64,
    /// Modal phase value and its share among retained shots.
    pub modal_filtered: Option<usize>,
    pub modal_share_filtered: Option<f64>,
}

/// Modal phase value (lowest on ties) and its share.
pub fn modal(records: &[ShotRecord]) -> Option<(usize, f64)> {
    let m = records.first()?.n_phase;
    let mut counts = vec![0usize; 1 << m];
    for r in records {
        counts[r.phase] += 1;
    }
    let (best, n) = counts
        .iter()
        .enumerate()
        .fold((0, 0), |acc, (x, &c)| if c > acc.1 { (x, c) } else { acc });
    Some((best, n as f64 / records.len() as f64))
}

/// Keeps shots whose ED bits are all zero.
///
/// Returns [`Error::EmptyFilter`] alongside nothing when every shot is flagged;
/// use [`filter_stats`] for a non-failing summary.
pub fn filter(records: &[ShotRecord]) -> Result<(Vec<ShotRecord>, FilterStats)> {
    let stats = filter_stats(records)?;
    if stats.retained == 0 {
        return Err(Error::EmptyFilter);
    }
    let kept = records.iter().filter(|r| !r.flagged()).cloned().collect();
    Ok((kept, stats))
}

pub fn filter_stats(records: &[ShotRecord]) -> Result<FilterStats> {
    let (modal_raw, modal_share_raw) = modal(records).ok_or(Error::EmptyInput)?;
    let kept: Vec<ShotRecord> = records.iter().filter(|r| !r.flagged()).cloned().collect();
    let filtered = modal(&kept);
    Ok(FilterStats {
        total: records.len(),
        retained: kept.len(),
        retention: kept.len() as f64 / records.len() as f64,
        modal_raw,
        modal_share_raw,
        modal_filtered: filtered.map(|f| f.0),
        modal_share_filtered: filtered.map(|f| f.1),
    })
}

/// Empirical phase distribution of the records.
pub fn histogram(records: &[ShotRecord]) -> Result<Vec<f64>> {
    let m = records.first().ok_or(Error::EmptyInput)?.n_phase;
    let mut p = vec![0.0; 1 << m];
    for r in records {
        p[r.phase] += 1.0;
    }
    let n = records.len() as f64;
    p.iter_mut().for_each(|v| *v /= n);
    Ok(p)
}

pub fn records_csv(records: &[ShotRecord]) -> String {
    let mut s = String::from("shot,phase_bits,ed_bits\n");
    for r in records {
        writeln!(s, "{},{},{}", r.shot, r.phase_bitstring(), r.ed_bitstring()).unwrap();
    }
    s
}

/// `bitstring,probability` rows, bitstrings most significant bit first.
pub fn distribution_csv(probs: &[f64]) -> String {
    let m = probs.len().trailing_zeros() as usize;
    let mut s = String::from("bitstring,probability\n");
    for (x, p) in probs.iter().enumerate() {
        writeln!(s, "{:0m$b},{p:.12}", x).unwrap();
    }
    s
}
