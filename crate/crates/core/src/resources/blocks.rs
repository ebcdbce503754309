use serde::{Deserialize, Serialize};

use super::cost::{CostScalar, CostVector, Metric};
use crate::error::{Error, Result};

/// Phase-estimation construction being costed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Qpe,
    SeQpe,
    CatSeQpe,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Qpe => "QPE",
            Method::SeQpe => "SE-QPE",
            Method::CatSeQpe => "cat-SE-QPE",
        }
    }
}

/// Cost of one evolution unit `U` and of its controlled version.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepCosts<T> {
    pub plain: CostVector<T>,
    pub controlled: CostVector<T>,
}

impl<T: CostScalar> StepCosts<T> {
    pub fn scale(&self, k: T) -> Self {
        StepCosts {
            plain: self.plain * k,
            controlled: self.controlled * k,
        }
    }
}

fn pow2<T: CostScalar>(j: u32) -> T {
    T::from_u64(1u64 << j).expect("representable power of two")
}

/// Cost of phase bit `j`. Both gadget methods take the swap pair as given.
pub fn block_cost<T: CostScalar>(
    j: u32,
    method: Method,
    step: &StepCosts<T>,
    swap: &CostVector<T>,
) -> CostVector<T> {
    if method == Method::Qpe {
        return step.controlled * pow2(j);
    }
    let c = step.plain;
    let count = pow2::<T>(j);
    let depth = if j == 0 { T::one() } else { pow2(j - 1) };
    CostVector {
        cx_count: count * c.cx_count + swap.cx_count,
        rz_count: count * c.rz_count + swap.rz_count,
        t_count: count * c.t_count + swap.t_count,
        cx_depth: depth * c.cx_depth + swap.cx_depth,
        rz_depth: depth * c.rz_depth + swap.rz_depth,
        t_depth: depth * c.t_depth + swap.t_depth,
    }
}

/// Smallest bit index from which the gadget is cheaper in `metric`, by the
/// per-bit inequality. `None` when the control overhead ratio is at most one
/// or no `j <= 62` qualifies.
pub fn breakeven_bit<T: CostScalar>(
    step: &StepCosts<T>,
    swap: &CostVector<T>,
    metric: Metric,
) -> Option<u32> {
    let c = step.plain.get(metric).to_f64()?;
    let cc = step.controlled.get(metric).to_f64()?;
    let s = swap.get(metric).to_f64()?;
    if c <= 0.0 || cc <= c {
        return None;
    }
    (0..=62u32).find(|&j| {
        if metric.is_depth() {
            2f64.powi(j as i32 - 1) * (2.0 * cc - c) > s
        } else {
            2f64.powi(j as i32) * (cc - c) > s
        }
    })
}

/// Summed and closed-form totals with gain ratios `SE-QPE / QPE`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub m: u32,
    pub k: u64,
    pub qpe: CostVector<f64>,
    pub se_qpe: CostVector<f64>,
    pub qpe_closed_form: CostVector<f64>,
    pub se_qpe_closed_form: CostVector<f64>,
    pub gains: CostVector<f64>,
    pub gains_closed_form: CostVector<f64>,
}

pub fn totals_and_gains<T: CostScalar>(
    m: u32,
    step: &StepCosts<T>,
    swap: &CostVector<T>,
) -> Result<Totals> {
    if m == 0 || m > 62 {
        return Err(Error::InvalidArgument(format!(
            "M must be in 1..=62, got {m}"
        )));
    }
    let mut qpe = CostVector::<T>::zero();
    let mut se = CostVector::<T>::zero();
    for j in 0..m {
        qpe = qpe + block_cost(j, Method::Qpe, step, swap);
        se = se + block_cost(j, Method::SeQpe, step, swap);
    }
    let k = (1u64 << m) - 1;
    let kf = k as f64;
    let mf = m as f64;
    let c = step.plain.to_f64();
    let cc = step.controlled.to_f64();
    let s = swap.to_f64();
    let qpe_cf = cc * kf;
    let se_cf = CostVector {
        cx_count: kf * c.cx_count + mf * s.cx_count,
        rz_count: kf * c.rz_count + mf * s.rz_count,
        t_count: kf * c.t_count + mf * s.t_count,
        cx_depth: (kf + 1.0) / 2.0 * c.cx_depth + mf * s.cx_depth,
        rz_depth: (kf + 1.0) / 2.0 * c.rz_depth + mf * s.rz_depth,
        t_depth: (kf + 1.0) / 2.0 * c.t_depth + mf * s.t_depth,
    };
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { f64::NAN };
    let count_gain = |metric: Metric| {
        let (c, cc, s) = (c.get(metric), cc.get(metric), s.get(metric));
        ratio(c, cc) * (1.0 + mf / kf * ratio(s, c))
    };
    let depth_gain = |metric: Metric| {
        let (d, dc, s) = (c.get(metric), cc.get(metric), s.get(metric));
        ratio(d, 2.0 * dc) * (1.0 + 1.0 / kf + 2.0 * mf / kf * ratio(s, d))
    };
    let qpe = qpe.to_f64();
    let se = se.to_f64();
    Ok(Totals {
        m,
        k,
        gains: CostVector {
            cx_count: ratio(se.cx_count, qpe.cx_count),
            rz_count: ratio(se.rz_count, qpe.rz_count),
            t_count: ratio(se.t_count, qpe.t_count),
            cx_depth: ratio(se.cx_depth, qpe.cx_depth),
            rz_depth: ratio(se.rz_depth, qpe.rz_depth),
            t_depth: ratio(se.t_depth, qpe.t_depth),
        },
        gains_closed_form: CostVector {
            cx_count: count_gain(Metric::CxCount),
            rz_count: count_gain(Metric::RzCount),
            t_count: count_gain(Metric::TCount),
            cx_depth: depth_gain(Metric::CxDepth),
            rz_depth: depth_gain(Metric::RzDepth),
            t_depth: depth_gain(Metric::TDepth),
        },
        qpe,
        se_qpe: se,
        qpe_closed_form: qpe_cf,
        se_qpe_closed_form: se_cf,
    })
}
