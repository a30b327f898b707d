//! Pauli words on clause-sized registers and the decomposition of clause
//! matrices in that basis.

use std::fmt;

use crate::error::{Error, Result};
use crate::operators::ClauseMatrix;
use crate::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i]
    }

    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => '0',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }
}

/// Tensor product of single-bit Paulis, first letter on the most significant
/// clause bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliWord(Vec<Pauli>);

impl PauliWord {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliWord(letters)
    }

    /// Word number `index` in base-4 big-endian order over `(I, X, Y, Z)`.
    pub fn from_index(arity: usize, index: usize) -> Self {
        PauliWord(
            (0..arity)
                .map(|k| Pauli::from_index((index >> (2 * (arity - 1 - k))) & 3))
                .collect(),
        )
    }

    /// Parses letters from `{0, x, y, z}` (also `I`, `X`, `Y`, `Z`).
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' | 'I' | 'i' => Ok(Pauli::I),
                'x' | 'X' => Ok(Pauli::X),
                'y' | 'Y' => Ok(Pauli::Y),
                'z' | 'Z' => Ok(Pauli::Z),
                other => Err(Error::input(format!("bad Pauli letter `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliWord)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, p| (acc << 2) | p.index())
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// The single nonzero entry in row `r`: its column and value.
    pub fn row_entry(&self, r: usize) -> (usize, C64) {
        let b = self.0.len();
        let mut col = r;
        let mut val = C64::new(1.0, 0.0);
        for (k, p) in self.0.iter().enumerate() {
            let shift = b - 1 - k;
            let bit = (r >> shift) & 1;
            match p {
                Pauli::I => {}
                Pauli::X => col ^= 1 << shift,
                Pauli::Y => {
                    col ^= 1 << shift;
                    // <0|Y|1> = -i, <1|Y|0> = i
                    val *= if bit == 0 { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) };
                }
                Pauli::Z => {
                    if bit == 1 {
                        val = -val;
                    }
                }
            }
        }
        (col, val)
    }

    /// Dense matrix via Kronecker products.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for p in &self.0 {
            let s = p.matrix();
            let s = CMatrix::from_fn(2, 2, |r, c| s[r][c]);
            m = m.kronecker(&s);
        }
        m
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

/// Coefficients `a_w = Tr[w · A] / 2^b` over all `4^b` Pauli words, indexed by
/// [`PauliWord::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    arity: usize,
    coeffs: Vec<C64>,
}

impl PauliDecomposition {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, word: &PauliWord) -> C64 {
        self.coeffs[word.index()]
    }

    /// Real parts; exact for Hermitian input up to roundoff.
    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|z| z.re).collect()
    }

    pub fn nonzero(&self, tol: f64) -> Vec<(PauliWord, C64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > tol)
            .map(|(i, z)| (PauliWord::from_index(self.arity, i), *z))
            .collect()
    }

    /// `Σ_w a_w w`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = 1 << self.arity;
        let mut m = CMatrix::zeros(d, d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a != C64::new(0.0, 0.0) {
                m += PauliWord::from_index(self.arity, i).matrix() * *a;
            }
        }
        m
    }
}

pub fn pauli_decompose(a: &ClauseMatrix) -> PauliDecomposition {
    let b = a.arity();
    let d = a.dim();
    let norm = 1.0 / d as f64;
    let coeffs = (0..1usize << (2 * b))
        .map(|w| {
            let word = PauliWord::from_index(b, w);
            // Tr[W A] = Σ_r W[r, c(r)] A[c(r), r]
            let tr: C64 = (0..d)
                .map(|r| {
                    let (c, v) = word.row_entry(r);
                    v * a.get(c, r)
                })
                .sum();
            tr * norm
        })
        .collect();
    PauliDecomposition { arity: b, coeffs }
}
