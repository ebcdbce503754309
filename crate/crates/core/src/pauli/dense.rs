use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::{Float, One, Zero};

use super::sum::{i_pow, PauliString, PauliSum};
use crate::error::{Error, Result};
use crate::scalar::{cis, lit, Real};

/// Largest register handled by dense matrices and exact diagonalization.
pub const DENSE_CAP: usize = 14;

/// Largest register handled by state vectors.
pub const STATE_CAP: usize = 24;

pub type Matrix<T> = DMatrix<Complex<T>>;

/// State vector over `n` qubits, little-endian (qubit 0 is the low bit).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState<T: Real> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> DenseState<T> {
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_cap(n, STATE_CAP)?;
        if index >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} on {n} qubits"
            )));
        }
        let mut amps = vec![Complex::zero(); 1 << n];
        amps[index] = Complex::one();
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        check_cap(n, STATE_CAP)?;
        if amps.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Self {
        let s = self.norm_sqr().sqrt();
        for a in &mut self.amps {
            *a = *a / s;
        }
        self
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &DenseState<T>) -> Complex<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::zero(), |s, x| s + x)
    }

    pub fn fidelity(&self, other: &DenseState<T>) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Tensor product with `self` on the low qubits.
    pub fn tensor(&self, high: &DenseState<T>) -> Result<DenseState<T>> {
        let n = self.n + high.n;
        check_cap(n, STATE_CAP)?;
        let mut amps = Vec::with_capacity(1 << n);
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| *l * h));
        }
        Ok(Self { n, amps })
    }

    pub fn to_vector(&self) -> nalgebra::DVector<Complex<T>> {
        nalgebra::DVector::from_column_slice(&self.amps)
    }

    /// Largest amplitude difference after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &DenseState<T>) -> T {
        let ov = self.inner(other);
        let phase = if ov.norm() > T::zero() {
            ov / ov.norm()
        } else {
            Complex::one()
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (*a * phase - b).norm())
            .fold(T::zero(), T::max)
    }
}

pub fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::SizeCap { n, cap })
    } else {
        Ok(())
    }
}

fn check_range<T: Real>(h: &PauliSum<T>, n: usize) -> Result<()> {
    let need = h.min_qubits();
    if need > n {
        return Err(Error::QubitOutOfRange { qubit: need - 1, n });
    }
    Ok(())
}

/// Phase and target of `P|b>`: returns `(b ^ x, i^{#Y} (-1)^{|b & z|})`.
#[inline]
fn word_action<T: Real>(x: usize, z: usize, ny: u8, b: usize) -> (usize, Complex<T>) {
    let sign = (b & z).count_ones() % 2;
    (b ^ x, i_pow::<T>(ny + 2 * sign as u8))
}

impl<T: Real> PauliString<T> {
    /// Adds `self|state>` into `out`.
    fn accumulate(&self, state: &[Complex<T>], out: &mut [Complex<T>]) {
        let (x, z) = self.word.masks();
        let ny = (self.word.y_count() % 4) as u8;
        for (b, a) in state.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (t, ph) = word_action::<T>(x, z, ny, b);
            out[t] += self.coeff * ph * a;
        }
    }
}

impl<T: Real> PauliSum<T> {
    /// Dense `2^n x 2^n` matrix.
    pub fn to_matrix(&self, n: usize) -> Result<Matrix<T>> {
        check_cap(n, DENSE_CAP)?;
        check_range(self, n)?;
        let dim = 1usize << n;
        let mut m = Matrix::<T>::zeros(dim, dim);
        for t in self.terms() {
            let (x, z) = t.word.masks();
            let ny = (t.word.y_count() % 4) as u8;
            for b in 0..dim {
                let (r, ph) = word_action::<T>(x, z, ny, b);
                m[(r, b)] += t.coeff * ph;
            }
        }
        Ok(m)
    }

    pub fn apply(&self, state: &DenseState<T>) -> Result<DenseState<T>> {
        check_range(self, state.n_qubits())?;
        let mut out = vec![Complex::zero(); state.amplitudes().len()];
        for t in self.terms() {
            t.accumulate(state.amplitudes(), &mut out);
        }
        DenseState::from_amplitudes(state.n_qubits(), out)
    }

    pub fn expectation(&self, state: &DenseState<T>) -> Result<T> {
        self.check_hermitian()?;
        let hs = self.apply(state)?;
        Ok(state.inner(&hs).re)
    }
}

/// Eigenpairs of a Hermitian sum, ascending in energy.
pub fn eigensystem<T: Real + RealField>(
    h: &PauliSum<T>,
    n: usize,
) -> Result<Vec<(T, DenseState<T>)>> {
    check_cap(n, DENSE_CAP)?;
    let basis: Vec<usize> = (0..1usize << n).collect();
    eigensystem_in_subspace(h, n, &basis)
}

/// Eigenpairs of `h` restricted to the span of the given computational basis
/// states, which must be an invariant subspace of `h`.
pub fn eigensystem_in_subspace<T: Real + RealField>(
    h: &PauliSum<T>,
    n: usize,
    basis: &[usize],
) -> Result<Vec<(T, DenseState<T>)>> {
    h.check_hermitian()?;
    check_cap(n, DENSE_CAP)?;
    check_range(h, n)?;
    let dim = 1usize << n;
    let mut pos = vec![usize::MAX; dim];
    for (k, &b) in basis.iter().enumerate() {
        if b >= dim || pos[b] != usize::MAX {
            return Err(Error::InvalidArgument(format!("bad subspace index {b}")));
        }
        pos[b] = k;
    }
    let d = basis.len();
    let mut m = Matrix::<T>::zeros(d, d);
    let leak_tol = lit::<T>(1e-12);
    for (col, &b) in basis.iter().enumerate() {
        for t in h.terms() {
            let (x, z) = t.word.masks();
            let ny = (t.word.y_count() % 4) as u8;
            let (r, ph) = word_action::<T>(x, z, ny, b);
            let v = t.coeff * ph;
            if pos[r] == usize::MAX {
                if v.norm() > leak_tol {
                    return Err(Error::InvalidArgument(format!(
                        "subspace not invariant: basis state {b} couples to {r}"
                    )));
                }
                continue;
            }
            m[(pos[r], col)] += v;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    order
        .into_iter()
        .map(|k| {
            let mut amps = vec![Complex::zero(); dim];
            for (row, &b) in basis.iter().enumerate() {
                amps[b] = eig.eigenvectors[(row, k)];
            }
            Ok((eig.eigenvalues[k], DenseState::from_amplitudes(n, amps)?))
        })
        .collect()
}

/// `exp(-i t h)` by diagonalization.
pub fn evolution_matrix<T: Real + RealField>(h: &PauliSum<T>, n: usize, t: T) -> Result<Matrix<T>> {
    h.check_hermitian()?;
    let m = h.to_matrix(n)?;
    let eig = nalgebra::SymmetricEigen::new(m);
    let phases = Matrix::<T>::from_diagonal(&eig.eigenvalues.map(|e| cis(-t * e)));
    let v = &eig.eigenvectors;
    Ok(v * phases * v.adjoint())
}

/// Largest entry-wise distance between `a` and `b` after aligning global phase.
pub fn matrix_distance_up_to_phase<T: Real + RealField>(a: &Matrix<T>, b: &Matrix<T>) -> T {
    let tr = (a.adjoint() * b).trace();
    let phase = if tr.norm() > T::zero() {
        tr / tr.norm()
    } else {
        Complex::one()
    };
    (a * phase - b)
        .iter()
        .map(|z| z.norm())
        .fold(T::zero(), |x, y| Float::max(x, y))
}
