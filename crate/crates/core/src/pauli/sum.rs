use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::word::PauliWord;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Coefficients below this magnitude are dropped by normalization.
pub const DROP_TOL: f64 = 1e-15;

/// Coefficients with imaginary part above this are treated as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PauliString<T: Real> {
    pub word: PauliWord,
    pub coeff: Complex<T>,
}

pub(crate) fn i_pow<T: Real>(k: u8) -> Complex<T> {
    match k % 4 {
        0 => Complex::one(),
        1 => Complex::i(),
        2 => -Complex::one(),
        _ => -Complex::i(),
    }
}

impl<T: Real> PauliString<T> {
    pub fn new(word: PauliWord, coeff: Complex<T>) -> Self {
        Self { word, coeff }
    }

    pub fn real(word: PauliWord, coeff: T) -> Self {
        Self::new(word, Complex::new(coeff, T::zero()))
    }

    /// Pauli group product with the accumulated phase folded into the coefficient.
    pub fn multiply(&self, other: &PauliString<T>) -> PauliString<T> {
        let (k, word) = self.word.mul(&other.word);
        PauliString::new(word, self.coeff * other.coeff * i_pow::<T>(k))
    }
}

/// Weighted sum of Pauli strings, kept sorted by word with duplicates merged.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PauliSum<T: Real> {
    terms: Vec<PauliString<T>>,
}

impl<T: Real> PauliSum<T> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = PauliString<T>>>(terms: I) -> Self {
        let mut acc: BTreeMap<PauliWord, Complex<T>> = BTreeMap::new();
        for t in terms {
            *acc.entry(t.word).or_insert_with(Complex::zero) += t.coeff;
        }
        let drop = lit::<T>(DROP_TOL);
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= drop)
            .map(|(word, coeff)| PauliString { word, coeff })
            .collect();
        Self { terms }
    }

    pub fn from_real<I: IntoIterator<Item = (PauliWord, T)>>(terms: I) -> Self {
        Self::from_terms(terms.into_iter().map(|(w, c)| PauliString::real(w, c)))
    }

    pub fn terms(&self) -> &[PauliString<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// One past the highest qubit index touched (0 for scalars).
    pub fn min_qubits(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|t| t.word.max_qubit())
            .max()
            .map_or(0, |q| q + 1)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| PauliString::new(t.word.clone(), t.coeff * s)),
        )
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn commutator(&self, other: &PauliSum<T>) -> PauliSum<T> {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                if a.word.commutes_with(&b.word) {
                    continue;
                }
                let ab = a.multiply(b);
                out.push(PauliString::new(ab.word, ab.coeff + ab.coeff));
            }
        }
        Self::from_terms(out)
    }

    pub fn max_imag(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.coeff.im.abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_imag() <= lit(HERMITIAN_TOL)
    }

    pub fn check_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NonHermitian(to_f64(self.max_imag())))
        }
    }

    /// `<0...0|h|0...0>`: the sum of coefficients of Z-only terms.
    pub fn vacuum_energy(&self) -> T {
        self.terms
            .iter()
            .filter(|t| t.word.is_diagonal())
            .map(|t| t.coeff.re)
            .sum()
    }

    /// Sum of absolute coefficient magnitudes.
    pub fn one_norm(&self) -> T {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    pub fn to_text(&self) -> Result<String> {
        self.check_hermitian()?;
        let mut s = String::new();
        for t in &self.terms {
            if t.word.is_identity() {
                writeln!(s, "{}", t.coeff.re).unwrap();
            } else {
                writeln!(s, "{}  {}", t.coeff.re, t.word).unwrap();
            }
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (c, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let coeff: f64 = c.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad coefficient {c:?}"),
            })?;
            let word: PauliWord = rest.parse().map_err(|e: Error| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            terms.push(PauliString::real(word, lit(coeff)));
        }
        Ok(Self::from_terms(terms))
    }
}

impl<T: Real> Add for &PauliSum<T> {
    type Output = PauliSum<T>;

    fn add(self, rhs: &PauliSum<T>) -> PauliSum<T> {
        PauliSum::from_terms(self.terms.iter().chain(&rhs.terms).cloned())
    }
}

impl<T: Real> Add for PauliSum<T> {
    type Output = PauliSum<T>;

    fn add(self, rhs: PauliSum<T>) -> PauliSum<T> {
        &self + &rhs
    }
}

impl<T: Real> Neg for &PauliSum<T> {
    type Output = PauliSum<T>;

    fn neg(self) -> PauliSum<T> {
        self.scale_real(-T::one())
    }
}

impl<T: Real> Sub for &PauliSum<T> {
    type Output = PauliSum<T>;

    fn sub(self, rhs: &PauliSum<T>) -> PauliSum<T> {
        self + &(-rhs)
    }
}

impl<T: Real> Sub for PauliSum<T> {
    type Output = PauliSum<T>;

    fn sub(self, rhs: PauliSum<T>) -> PauliSum<T> {
        &self - &rhs
    }
}

impl<T: Real> Mul for &PauliSum<T> {
    type Output = PauliSum<T>;

    fn mul(self, rhs: &PauliSum<T>) -> PauliSum<T> {
        PauliSum::from_terms(
            self.terms
                .iter()
                .flat_map(|a| rhs.terms.iter().map(move |b| a.multiply(b))),
        )
    }
}

pub fn commutator<T: Real>(a: &PauliSum<T>, b: &PauliSum<T>) -> PauliSum<T> {
    a.commutator(b)
}
