use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::cost::{CostScalar, CostVector};
use super::primitives::{check_n, primitive_costs};
use crate::error::{Error, Result};

/// Trotter order of the per-step product formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    First,
    Second,
}

impl Order {
    pub fn from_int(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::InvalidArgument(format!(
                "Trotter order must be 1 or 2, got {k}"
            ))),
        }
    }
}

/// Per-step cost by composing primitive rows; controlled steps control only the
/// diagonal kernels.
pub fn step_cost<T: CostScalar>(
    order: Order,
    n: usize,
    l: usize,
    controlled: bool,
    spin_block: bool,
    t_eps: T,
) -> Result<CostVector<T>> {
    if l == 0 {
        return Err(Error::InvalidArgument("L must be at least 1".into()));
    }
    let p = primitive_costs(n, spin_block, t_eps)?;
    let (u0, ul) = if controlled {
        (p.cu0, p.cul)
    } else {
        (p.u0, p.ul)
    };
    let li = T::int(l as i64);
    let one = T::one();
    let two = T::int(2);
    Ok(match order {
        Order::First => p.w * (li + two) + u0 + ul * li,
        Order::Second => p.w * (two * (li + one)) + u0 * two + ul * (two * li - one),
    })
}

/// Per-step polynomial closed forms for a dense basis rotation, exact in rationals.
pub fn closed_form_step_cost(
    order: Order,
    n: usize,
    l: usize,
    controlled: bool,
    t_eps: Ratio<i64>,
) -> Result<CostVector<Ratio<i64>>> {
    check_n(n)?;
    if l == 0 {
        return Err(Error::InvalidArgument("L must be at least 1".into()));
    }
    let nn = Ratio::from_integer(n as i64);
    let ll = Ratio::from_integer(l as i64);
    let q = |k: i64| Ratio::from_integer(k);
    let h = |a: i64, b: i64| Ratio::new(a, b);
    let n2 = nn * nn;
    let (cx, cxd, rz, rzd) = match (order, controlled) {
        (Order::First, false) => (
            q(2) * ll * n2 + q(2) * n2 - q(2) * ll * nn - q(2) * nn,
            q(6) * ll * nn + q(8) * nn - q(8) * ll - q(12),
            h(3, 2) * ll * n2 + q(2) * n2 - h(3, 2) * ll * nn - nn,
            q(3) * ll * nn + q(4) * nn - q(4) * ll - q(5),
        ),
        (Order::First, true) => (
            q(3) * ll * n2 + q(2) * n2 - q(3) * ll * nn,
            ll * n2 + q(5) * ll * nn + q(10) * nn - q(8) * ll - q(12),
            q(2) * ll * n2 + q(2) * n2 - q(2) * ll * nn,
            q(4) * ll * nn + q(4) * nn - q(5) * ll - q(4),
        ),
        (Order::Second, false) => (
            q(4) * ll * n2 + n2 - q(4) * ll * nn - nn,
            q(12) * ll * nn + q(6) * nn - q(16) * ll - q(10),
            q(3) * ll * n2 + h(3, 2) * n2 - q(3) * ll * nn + h(1, 2) * nn,
            q(6) * ll * nn + q(3) * nn - q(8) * ll - q(3),
        ),
        (Order::Second, true) => (
            q(6) * ll * n2 - q(6) * ll * nn + q(4) * nn,
            q(2) * ll * n2 - n2 + q(10) * ll * nn + q(11) * nn - q(16) * ll - q(10),
            q(4) * ll * n2 + n2 - q(4) * ll * nn + q(3) * nn,
            q(8) * ll * nn - q(10) * ll + q(2) * nn,
        ),
    };
    Ok(CostVector::rotations(cx, cxd, rz, rzd, t_eps))
}

/// Control overhead ratios `controlled / plain` of the per-step closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverheadRatios<T> {
    pub r_cx_count: T,
    pub r_rz_count: T,
    pub r_cx_depth: T,
    pub r_rz_depth: T,
}

pub fn overhead_ratios(order: Order, n: usize, l: usize) -> Result<OverheadRatios<Ratio<i64>>> {
    let one = Ratio::from_integer(1);
    let p = closed_form_step_cost(order, n, l, false, one)?;
    let c = closed_form_step_cost(order, n, l, true, one)?;
    let div = |a: Ratio<i64>, b: Ratio<i64>| {
        if b == Ratio::from_integer(0) {
            Err(Error::VanishingDenominator(0.0))
        } else {
            Ok(a / b)
        }
    };
    Ok(OverheadRatios {
        r_cx_count: div(c.cx_count, p.cx_count)?,
        r_rz_count: div(c.rz_count, p.rz_count)?,
        r_cx_depth: div(c.cx_depth, p.cx_depth)?,
        r_rz_depth: div(c.rz_depth, p.rz_depth)?,
    })
}

impl OverheadRatios<Ratio<i64>> {
    pub fn to_f64(&self) -> OverheadRatios<f64> {
        let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        OverheadRatios {
            r_cx_count: f(self.r_cx_count),
            r_rz_count: f(self.r_rz_count),
            r_cx_depth: f(self.r_cx_depth),
            r_rz_depth: f(self.r_rz_depth),
        }
    }
}
