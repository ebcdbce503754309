use std::fmt::Debug;
use std::ops::{Add, Mul};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Number type for cost arithmetic: `f64` for reports, `Ratio<i64>` for exact checks.
pub trait CostScalar:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("representable integer")
    }
}

impl CostScalar for f64 {}
impl CostScalar for i64 {}
impl CostScalar for Ratio<i64> {}

/// Counts and depths of CX, arbitrary-angle Rz and T gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostVector<T> {
    pub cx_count: T,
    pub rz_count: T,
    pub t_count: T,
    pub cx_depth: T,
    pub rz_depth: T,
    pub t_depth: T,
}

/// Which entry of a cost vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    CxCount,
    CxDepth,
    RzCount,
    RzDepth,
    TCount,
    TDepth,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::CxCount,
        Metric::CxDepth,
        Metric::RzCount,
        Metric::RzDepth,
        Metric::TCount,
        Metric::TDepth,
    ];

    pub fn is_depth(self) -> bool {
        matches!(self, Metric::CxDepth | Metric::RzDepth | Metric::TDepth)
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::CxCount => "cx_count",
            Metric::CxDepth => "cx_depth",
            Metric::RzCount => "rz_count",
            Metric::RzDepth => "rz_depth",
            Metric::TCount => "t_count",
            Metric::TDepth => "t_depth",
        }
    }
}

impl<T: CostScalar> CostVector<T> {
    pub fn zero() -> Self {
        Self {
            cx_count: T::zero(),
            rz_count: T::zero(),
            t_count: T::zero(),
            cx_depth: T::zero(),
            rz_depth: T::zero(),
            t_depth: T::zero(),
        }
    }

    /// Rotation primitive: T entries follow from Rz entries at `t_eps` T per rotation.
    pub fn rotations(cx_count: T, cx_depth: T, rz_count: T, rz_depth: T, t_eps: T) -> Self {
        Self {
            cx_count,
            rz_count,
            t_count: rz_count * t_eps,
            cx_depth,
            rz_depth,
            t_depth: rz_depth * t_eps,
        }
    }

    pub fn get(&self, m: Metric) -> T {
        match m {
            Metric::CxCount => self.cx_count,
            Metric::CxDepth => self.cx_depth,
            Metric::RzCount => self.rz_count,
            Metric::RzDepth => self.rz_depth,
            Metric::TCount => self.t_count,
            Metric::TDepth => self.t_depth,
        }
    }

    pub fn map<U>(&self, f: impl Fn(T) -> U) -> CostVector<U> {
        CostVector {
            cx_count: f(self.cx_count),
            rz_count: f(self.rz_count),
            t_count: f(self.t_count),
            cx_depth: f(self.cx_depth),
            rz_depth: f(self.rz_depth),
            t_depth: f(self.t_depth),
        }
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|v| v * k)
    }

    pub fn to_f64(&self) -> CostVector<f64> {
        self.map(|v| v.to_f64().expect("finite cost"))
    }

    pub fn is_nonnegative(&self) -> bool {
        Metric::ALL.iter().all(|&m| self.get(m) >= T::zero())
    }
}

impl<T: CostScalar> Add for CostVector<T> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            cx_count: self.cx_count + o.cx_count,
            rz_count: self.rz_count + o.rz_count,
            t_count: self.t_count + o.t_count,
            cx_depth: self.cx_depth + o.cx_depth,
            rz_depth: self.rz_depth + o.rz_depth,
            t_depth: self.t_depth + o.t_depth,
        }
    }
}

impl<T: CostScalar> Mul<T> for CostVector<T> {
    type Output = Self;

    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}
