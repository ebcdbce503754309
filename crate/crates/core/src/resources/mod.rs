//! Analytic gate-count and depth model for QPE and SE-QPE on double-factorized
//! Hamiltonians.

mod blocks;
mod closed_form;
mod cost;
mod primitives;
mod scan;

pub use blocks::{block_cost, breakeven_bit, totals_and_gains, Method, StepCosts, Totals};
pub use closed_form::{closed_form_step_cost, overhead_ratios, step_cost, Order, OverheadRatios};
pub use cost::{CostScalar, CostVector, Metric};
pub use primitives::{
    primitive_costs, round_robin, swap_pair_circuit, u0_circuit, ul_circuit, w_circuit,
    PrimitiveTable,
};
pub use scan::{
    grid_bits, lambda_norm, reports_csv, scan, scan_synthetic_grid, t_per_rotation, DfSpec,
    ResourceReport, ScanConfig, Synthesis, SyntheticSpec,
};
