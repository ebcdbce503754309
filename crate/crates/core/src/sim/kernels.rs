use num_complex::Complex;
use num_traits::{One, Zero};

use crate::circuit::GateKind;
use crate::scalar::{cis, lit, Real};

pub type C<T> = Complex<T>;

/// Row-major 2x2 matrix of a single-qubit gate.
pub fn matrix_1q<T: Real>(kind: GateKind) -> [C<T>; 4] {
    let o = C::<T>::one();
    let z = C::<T>::zero();
    let i = C::<T>::i();
    let half = lit::<T>(0.5);
    match kind {
        GateKind::H => {
            let r = C::new(T::FRAC_1_SQRT_2(), T::zero());
            [r, r, r, -r]
        }
        GateKind::X => [z, o, o, z],
        GateKind::S => [o, z, z, i],
        GateKind::Sdg => [o, z, z, -i],
        GateKind::Rz(a) => {
            let a = lit::<T>(a) * half;
            [cis(-a), z, z, cis(a)]
        }
        GateKind::Ry(a) => {
            let a = lit::<T>(a) * half;
            let (s, c) = (C::new(a.sin(), T::zero()), C::new(a.cos(), T::zero()));
            [c, -s, s, c]
        }
        GateKind::Phase(t) => [o, z, z, cis(lit::<T>(t) * T::TAU())],
        k => panic!("{} is not a single-qubit unitary", k.name()),
    }
}

pub fn is_diagonal_1q<T: Real>(m: &[C<T>; 4]) -> bool {
    m[1].is_zero() && m[2].is_zero()
}

/// Applies `m` to qubit `q`, optionally conditioned on `ctrl` being 1.
pub fn apply_1q<T: Real>(amps: &mut [C<T>], q: usize, m: &[C<T>; 4], ctrl: Option<usize>) {
    let bit = 1usize << q;
    let cmask = ctrl.map_or(0, |c| 1usize << c);
    let diagonal = is_diagonal_1q(m);
    let skip0 = diagonal && m[0] == C::one();
    for (k, chunk) in amps.chunks_exact_mut(2 * bit).enumerate() {
        let base = k * 2 * bit;
        if cmask > bit && base & cmask != cmask {
            continue;
        }
        let (lo, hi) = chunk.split_at_mut(bit);
        if cmask != 0 && cmask < bit {
            for (off, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if off & cmask == cmask {
                    let (x, y) = (*a0, *a1);
                    *a0 = m[0] * x + m[1] * y;
                    *a1 = m[2] * x + m[3] * y;
                }
            }
        } else if diagonal {
            if !skip0 {
                lo.iter_mut().for_each(|a| *a *= m[0]);
            }
            hi.iter_mut().for_each(|a| *a *= m[3]);
        } else {
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0] * x + m[1] * y;
                *a1 = m[2] * x + m[3] * y;
            }
        }
    }
}

/// Flips `t` where all bits of `cmask` are set.
pub fn apply_mcx<T: Real>(amps: &mut [C<T>], cmask: usize, t: usize) {
    let tbit = 1usize << t;
    for i in 0..amps.len() {
        if i & cmask == cmask && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

pub fn apply_cswap<T: Real>(amps: &mut [C<T>], c: usize, a: usize, b: usize) {
    let (cb, ab, bb) = (1usize << c, 1usize << a, 1usize << b);
    for i in 0..amps.len() {
        if i & cb != 0 && i & ab != 0 && i & bb == 0 {
            amps.swap(i, i ^ ab ^ bb);
        }
    }
}

/// Multiplies each amplitude by `diag[local index]` over the sorted `qubits`.
pub fn apply_diag<T: Real>(amps: &mut [C<T>], qubits: &[usize], diag: &[C<T>]) {
    for (i, a) in amps.iter_mut().enumerate() {
        let mut l = 0;
        for (r, &q) in qubits.iter().enumerate() {
            l |= ((i >> q) & 1) << r;
        }
        *a *= diag[l];
    }
}

/// Inserts zero bits at the sorted positions `qubits` into `r`.
#[inline]
fn deposit(mut r: usize, qubits: &[usize]) -> usize {
    for &q in qubits {
        let low = r & ((1usize << q) - 1);
        r = ((r >> q) << (q + 1)) | low;
    }
    r
}

/// Row-compressed `2^k x 2^k` matrix over the sorted `qubits`.
#[derive(Clone, Debug)]
pub struct SparseBlock<T: Real> {
    qubits: Vec<usize>,
    offsets: Vec<usize>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C<T>>,
}

impl<T: Real> SparseBlock<T> {
    /// Keeps the entries of the row-major `m` with `|m_ij| > 0`.
    pub fn from_dense(qubits: Vec<usize>, m: &[C<T>]) -> Self {
        let d = 1usize << qubits.len();
        debug_assert_eq!(m.len(), d * d);
        let offsets = (0..d)
            .map(|l| {
                qubits
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (r, &q)| acc | (((l >> r) & 1) << q))
            })
            .collect();
        let mut row_ptr = vec![0];
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        for row in 0..d {
            for col in 0..d {
                let v = m[row * d + col];
                if !v.is_zero() {
                    cols.push(col);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            qubits,
            offsets,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn dim(&self) -> usize {
        self.offsets.len()
    }

    pub fn apply(&self, amps: &mut [C<T>]) {
        let d = self.dim();
        let groups = amps.len() / d;
        let mut buf = vec![C::<T>::zero(); d];
        for g in 0..groups {
            let base = deposit(g, &self.qubits);
            let mut live = false;
            for (b, off) in buf.iter_mut().zip(&self.offsets) {
                *b = amps[base | off];
                live |= !b.is_zero();
            }
            if !live {
                continue;
            }
            for (row, off) in self.offsets.iter().enumerate() {
                let span = self.row_ptr[row]..self.row_ptr[row + 1];
                let mut acc = C::<T>::zero();
                for (col, v) in self.cols[span.clone()].iter().zip(&self.vals[span]) {
                    acc += *v * buf[*col];
                }
                amps[base | off] = acc;
            }
        }
    }
}

/// Probability that qubit `q` reads 1.
pub fn prob_one<T: Real>(amps: &[C<T>], q: usize) -> T {
    let bit = 1usize << q;
    amps.chunks_exact(2 * bit)
        .flat_map(|c| &c[bit..])
        .map(|a| a.norm_sqr())
        .sum()
}

/// Projects qubit `q` onto `outcome` with probability `p` and renormalizes.
pub fn collapse<T: Real>(amps: &mut [C<T>], q: usize, outcome: bool, p: T) {
    let bit = 1usize << q;
    let scale = T::one() / p.sqrt();
    let rescale = scale != T::one();
    for chunk in amps.chunks_exact_mut(2 * bit) {
        let (lo, hi) = chunk.split_at_mut(bit);
        let (keep, drop) = if outcome { (hi, lo) } else { (lo, hi) };
        drop.fill(C::zero());
        if rescale {
            keep.iter_mut().for_each(|a| *a = a.scale(scale));
        }
    }
}

/// Moves the amplitudes of `q = 1` onto `q = 0` after a collapse onto 1.
pub fn flip_to_zero<T: Real>(amps: &mut [C<T>], q: usize) {
    let bit = 1usize << q;
    for chunk in amps.chunks_exact_mut(2 * bit) {
        let (lo, hi) = chunk.split_at_mut(bit);
        lo.swap_with_slice(hi);
    }
}
