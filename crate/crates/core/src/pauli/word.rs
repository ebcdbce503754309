use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Product `self * other` as `(i^k, letter)`; `None` letter is identity.
    pub fn mul(self, other: Pauli) -> (u8, Option<Pauli>) {
        use Pauli::*;
        match (self, other) {
            (a, b) if a == b => (0, None),
            (X, Y) => (1, Some(Z)),
            (Y, Z) => (1, Some(X)),
            (Z, X) => (1, Some(Y)),
            (Y, X) => (3, Some(Z)),
            (Z, Y) => (3, Some(X)),
            (X, Z) => (3, Some(Y)),
            _ => unreachable!(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::InvalidArgument(format!(
                "unknown Pauli letter {c:?}"
            ))),
        }
    }
}

/// Tensor product of single-qubit Paulis; absent qubits carry identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PauliWord(BTreeMap<usize, Pauli>);

impl PauliWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = (usize, Pauli)>>(letters: I) -> Self {
        let mut w = Self::default();
        for (q, p) in letters {
            w.0.insert(q, p);
        }
        w
    }

    pub fn single(q: usize, p: Pauli) -> Self {
        Self::new([(q, p)])
    }

    pub fn zz(i: usize, j: usize) -> Self {
        Self::new([(i, Pauli::Z), (j, Pauli::Z)])
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, q: usize) -> Option<Pauli> {
        self.0.get(&q).copied()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = (usize, Pauli)> + '_ {
        self.0.iter().map(|(&q, &p)| (q, p))
    }

    pub fn qubits(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// True when every letter is Z (identity included).
    pub fn is_diagonal(&self) -> bool {
        self.0.values().all(|&p| p == Pauli::Z)
    }

    /// Group product `self * other`, returning the phase exponent k of `i^k`.
    pub fn mul(&self, other: &PauliWord) -> (u8, PauliWord) {
        let mut out = self.0.clone();
        let mut k = 0u8;
        for (&q, &b) in &other.0 {
            match out.get(&q).copied() {
                None => {
                    out.insert(q, b);
                }
                Some(a) => {
                    let (dk, c) = a.mul(b);
                    k = (k + dk) % 4;
                    match c {
                        Some(c) => {
                            out.insert(q, c);
                        }
                        None => {
                            out.remove(&q);
                        }
                    }
                }
            }
        }
        (k, PauliWord(out))
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        let anti = self
            .0
            .iter()
            .filter(|(q, a)| other.0.get(q).is_some_and(|b| b != *a))
            .count();
        anti % 2 == 0
    }

    /// Bit masks `(x, z)` with Y contributing to both.
    pub fn masks(&self) -> (usize, usize) {
        let mut x = 0usize;
        let mut z = 0usize;
        for (&q, &p) in &self.0 {
            match p {
                Pauli::X => x |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                Pauli::Z => z |= 1 << q,
            }
        }
        (x, z)
    }

    pub fn y_count(&self) -> usize {
        self.0.values().filter(|&&p| p == Pauli::Y).count()
    }

    /// Relabels qubit `q` as `map(q)`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> PauliWord {
        PauliWord::new(self.letters().map(|(q, p)| (map(q), p)))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "I");
        }
        let mut first = true;
        for (q, p) in self.letters() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}{}", p.symbol(), q)?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    /// Parses whitespace-separated tokens like `X3 Y5 Z0`; `I` alone is identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut w = PauliWord::identity();
        for tok in s.split_whitespace() {
            if tok.eq_ignore_ascii_case("I") {
                continue;
            }
            let mut chars = tok.chars();
            let letter = chars.next().ok_or(Error::EmptyPauli)?;
            let p = Pauli::try_from(letter)?;
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad Pauli token {tok:?}")))?;
            if w.0.insert(q, p).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "qubit {q} repeated in {s:?}"
                )));
            }
        }
        Ok(w)
    }
}
