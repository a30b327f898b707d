use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instances::{Clause, NegationMask};
use crate::{CMatrix, C64};

/// Hermiticity tolerance for clause-sized matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian `2^b x 2^b` operator acting on the `b` bits of a clause, in the
/// big-endian basis of the clause bits.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseMatrix {
    arity: usize,
    m: CMatrix,
}

impl ClauseMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let dim = m.nrows();
        if m.ncols() != dim || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::input(format!(
                "clause matrix must be square with power-of-two size, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asym = hermitian_defect(&m);
        if asym > HERMITIAN_TOL {
            return Err(Error::input(format!(
                "clause matrix is not Hermitian (defect {asym:e})"
            )));
        }
        Ok(ClauseMatrix {
            arity: dim.trailing_zeros() as usize,
            m,
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let m = CMatrix::from_fn(dim, dim, |r, c| C64::new(rows[r].get(c).copied().unwrap_or(f64::NAN), 0.0));
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("rows of unequal length"));
        }
        Self::new(m)
    }

    pub fn zeros(arity: usize) -> Self {
        let d = 1 << arity;
        ClauseMatrix {
            arity,
            m: CMatrix::zeros(d, d),
        }
    }

    pub(crate) fn from_raw(arity: usize, m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), 1 << arity);
        ClauseMatrix { arity, m }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.m[(r, c)]
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.dim()).all(|i| self.m[(i, i)] == C64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.m.iter().all(|z| z.im == 0.0)
    }
}

pub(crate) fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Diagonal matrix carrying the clause's value table.
pub fn clause_hp(clause: &Clause) -> ClauseMatrix {
    let d = clause.table().len();
    let m = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::new(clause.table()[r] as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    ClauseMatrix::from_raw(clause.arity(), m)
}

/// `Σ_k ½(1 - σ_x^(k))` over the clause's bits.
pub fn clause_hb(clause: &Clause) -> ClauseMatrix {
    transverse_projector_sum(clause.arity())
}

pub(crate) fn transverse_projector_sum(arity: usize) -> ClauseMatrix {
    let d = 1usize << arity;
    let mut m = CMatrix::zeros(d, d);
    for k in 0..arity {
        let flip = 1usize << (arity - 1 - k);
        for r in 0..d {
            m[(r, r)] += C64::new(0.5, 0.0);
            m[(r, r ^ flip)] -= C64::new(0.5, 0.0);
        }
    }
    ClauseMatrix::from_raw(arity, m)
}

/// Conjugation by `σ_x` on every masked bit: `B[r, c] = A[r ^ f, c ^ f]`.
pub fn negate_bits(a: &ClauseMatrix, mask: NegationMask) -> Result<ClauseMatrix> {
    if mask.arity() != a.arity {
        return Err(Error::input(format!(
            "mask arity {} differs from matrix arity {}",
            mask.arity(),
            a.arity
        )));
    }
    let f = mask.word();
    let d = a.dim();
    Ok(ClauseMatrix {
        arity: a.arity,
        m: CMatrix::from_fn(d, d, |r, c| a.m[(r ^ f, c ^ f)]),
    })
}

/// Row-major text with one `re+imi` token per entry, e.g. `-2+0i`.
pub fn format_matrix(a: &ClauseMatrix) -> String {
    let mut out = String::new();
    for r in 0..a.dim() {
        let row: Vec<String> = (0..a.dim())
            .map(|c| {
                let z = a.m[(r, c)];
                format!("{}{}{}i", z.re, if z.im.is_sign_negative() { "-" } else { "+" }, z.im.abs())
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses the output of [`format_matrix`]. Plain real tokens (`-2`) are also
/// accepted. Lines starting with `#` are ignored.
pub fn parse_matrix(text: &str) -> Result<ClauseMatrix> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    let mut first_line = None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        first_line.get_or_insert(k + 1);
        let row = line
            .split_whitespace()
            .map(|t| parse_complex(t).ok_or_else(|| Error::parse(k + 1, format!("bad complex entry `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(prev) = rows.first() {
            if prev.len() != row.len() {
                return Err(Error::parse(k + 1, "row length differs from the first row"));
            }
        }
        rows.push(row);
    }
    let d = rows.len();
    if d == 0 || rows[0].len() != d {
        return Err(Error::parse(first_line.unwrap_or(1), format!("matrix must be square, got {d} rows")));
    }
    ClauseMatrix::new(CMatrix::from_fn(d, d, |r, c| rows[r][c]))
}

fn parse_complex(t: &str) -> Option<C64> {
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re = body[..split].parse::<f64>().ok()?;
    let im = body[split..].parse::<f64>().ok()?;
    Some(C64::new(re, im))
}
