use serde::{Deserialize, Serialize};

use super::cost::{CostScalar, CostVector};
use crate::circuit::compile::{emit_controlled_pauli_exp, emit_givens, emit_pauli_exp};
use crate::circuit::{cat_fanout, Circuit};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliWord};

/// Analytic costs of the double-factorized building blocks and CSWAP layer pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveTable<T> {
    pub w: CostVector<T>,
    pub u0: CostVector<T>,
    pub ul: CostVector<T>,
    pub cu0: CostVector<T>,
    pub cul: CostVector<T>,
    pub swap_pair_serial: CostVector<T>,
    pub swap_pair_cat: CostVector<T>,
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "N must be even and at least 2, got {n}"
        )));
    }
    Ok(())
}

pub(crate) fn ceil_log2(n: usize) -> i64 {
    (usize::BITS - (n.max(1) - 1).leading_zeros()) as i64
}

/// Closed-form primitive costs for `n` spin-orbitals at `t_eps` T gates per rotation.
pub fn primitive_costs<T: CostScalar>(
    n: usize,
    spin_block: bool,
    t_eps: T,
) -> Result<PrimitiveTable<T>> {
    check_n(n)?;
    if spin_block && n < 4 {
        return Err(Error::InvalidArgument("spin-block W needs N >= 4".into()));
    }
    let i = |v: i64| T::int(v);
    let nn = n as i64;
    let w = if spin_block {
        let c = nn * (nn - 2) / 2;
        CostVector::rotations(i(c), i(2 * nn - 6), i(c), i(nn - 3), t_eps)
    } else {
        CostVector::rotations(
            i(nn * (nn - 1)),
            i(4 * nn - 6),
            i(nn * (nn - 1)),
            i(2 * nn - 3),
            t_eps,
        )
    };
    let u0 = CostVector::rotations(i(0), i(0), i(nn), i(1), t_eps);
    let ul = CostVector::rotations(
        i(nn * (nn - 1)),
        i(2 * (nn - 1)),
        i(nn * (nn - 1) / 2),
        i(nn - 1),
        t_eps,
    );
    let cu0 = CostVector::rotations(i(2 * nn), i(2 * nn), i(2 * nn), i(2), t_eps);
    let cul = CostVector::rotations(
        i(2 * nn * (nn - 1)),
        i((nn + 2) * (nn - 1)),
        i(nn * (nn - 1)),
        i(2 * (nn - 1)),
        t_eps,
    );
    let swap_pair_serial = CostVector {
        cx_count: i(14 * nn),
        rz_count: i(0),
        t_count: i(14 * nn),
        cx_depth: i(14 * nn),
        rz_depth: i(0),
        t_depth: i(8 * nn),
    };
    let swap_pair_cat = CostVector {
        cx_count: i(14 * nn + 2 * (nn - 1)),
        rz_count: i(0),
        t_count: i(14 * nn),
        cx_depth: i(14 + 2 * ceil_log2(n)),
        rz_depth: i(0),
        t_depth: i(8),
    };
    Ok(PrimitiveTable {
        w,
        u0,
        ul,
        cu0,
        cul,
        swap_pair_serial,
        swap_pair_cat,
    })
}

/// Perfect matchings of `0..n` (n even) by the circle method, `n - 1` rounds.
pub fn round_robin(n: usize) -> Vec<Vec<(usize, usize)>> {
    let r = n - 1;
    (0..r)
        .map(|round| {
            let mut pairs = vec![(round.min(r), r.max(round))];
            for k in 1..n / 2 {
                let a = (round + k) % r;
                let b = (round + r - k) % r;
                pairs.push((a.min(b), a.max(b)));
            }
            pairs
        })
        .collect()
}

fn angle(angles: &[f64], k: usize) -> f64 {
    if angles.is_empty() {
        0.1 + 0.01 * k as f64
    } else {
        angles[k % angles.len()]
    }
}

/// Triangular Givens network on `qubits`, `len (len-1)/2` rotations.
fn givens_triangle(c: &mut Circuit, qubits: &[usize], angles: &[f64], offset: &mut usize) {
    let n = qubits.len();
    for k in 0..n.saturating_sub(1) {
        for p in (n - 2 - k)..=(n - 2) {
            emit_givens(c, qubits[p], qubits[p + 1], angle(angles, *offset));
            *offset += 1;
        }
    }
}

/// Basis rotation `W`: a full Givens triangle, or one per spin block.
pub fn w_circuit(n: usize, spin_block: bool, angles: &[f64]) -> Result<Circuit> {
    check_n(n)?;
    let mut c = Circuit::new(n);
    let mut k = 0;
    if spin_block {
        let (lo, hi): (Vec<usize>, Vec<usize>) = ((0..n / 2).collect(), (n / 2..n).collect());
        givens_triangle(&mut c, &lo, angles, &mut k);
        givens_triangle(&mut c, &hi, angles, &mut k);
    } else {
        givens_triangle(&mut c, &(0..n).collect::<Vec<_>>(), angles, &mut k);
    }
    Ok(c)
}

/// One-body diagonal kernel `prod_i exp(-i a_i Z_i)`; with `controlled` the
/// control is qubit `n`.
pub fn u0_circuit(n: usize, angles: &[f64], controlled: bool) -> Result<Circuit> {
    check_n(n)?;
    let mut c = Circuit::new(n + usize::from(controlled));
    for q in 0..n {
        let w = PauliWord::single(q, Pauli::Z);
        if controlled {
            emit_controlled_pauli_exp(&mut c, &w, angle(angles, q), n, &|x| x)?;
        } else {
            emit_pauli_exp(&mut c, &w, angle(angles, q), &|x| x)?;
        }
    }
    Ok(c)
}

/// Two-body diagonal kernel `prod_{i<j} exp(-i b_ij Z_i Z_j)` scheduled by
/// perfect matchings; with `controlled` the control is qubit `n`.
pub fn ul_circuit(n: usize, angles: &[f64], controlled: bool) -> Result<Circuit> {
    check_n(n)?;
    let mut c = Circuit::new(n + usize::from(controlled));
    let mut k = 0;
    for round in round_robin(n) {
        for (i, j) in round {
            let w = PauliWord::zz(i, j);
            if controlled {
                emit_controlled_pauli_exp(&mut c, &w, angle(angles, k), n, &|x| x)?;
            } else {
                emit_pauli_exp(&mut c, &w, angle(angles, k), &|x| x)?;
            }
            k += 1;
        }
    }
    Ok(c)
}

/// The two CSWAP layers of one gadget on `ctrl (0), A (1..=n), B (n+1..=2n)`,
/// plus fan-out qubits `2n+1..` with `cat`.
pub fn swap_pair_circuit(n: usize, cat: bool) -> Result<Circuit> {
    check_n(n)?;
    let mut c = Circuit::new(2 * n + 1 + if cat { n - 1 } else { 0 });
    let fan: Vec<usize> = if cat {
        (2 * n + 1..3 * n).collect()
    } else {
        Vec::new()
    };
    let controls: Vec<usize> = if cat {
        std::iter::once(0).chain(fan.iter().copied()).collect()
    } else {
        vec![0; n]
    };
    let tree = cat_fanout(0, &fan);
    for &(a, b) in &tree {
        c.cx(a, b);
    }
    for _ in 0..2 {
        for (i, &ctrl) in controls.iter().enumerate() {
            c.cswap(ctrl, 1 + i, 1 + n + i);
        }
    }
    for &(a, b) in tree.iter().rev() {
        c.cx(a, b);
    }
    Ok(c)
}
