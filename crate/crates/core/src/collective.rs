//! Maximal total-spin sector (`j = n/2`, dimension `n + 1`) of the
//! permutation-symmetric instance.
//!
//! Basis state `w` is the normalized Dicke state of Hamming weight `w`, i.e.
//! the `S_z` eigenstate with eigenvalue `n/2 - w`. Index 0 is the all-zeros
//! string.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Largest bit count handled in the collective sector.
pub const COLLECTIVE_MAX_BITS: usize = 5000;

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::input(format!("collective sector needs n >= {min}, got {n}")));
    }
    if n > COLLECTIVE_MAX_BITS {
        return Err(Error::Capacity {
            what: "collective bit count",
            got: n,
            limit: COLLECTIVE_MAX_BITS,
        });
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Debug, Clone)]
pub struct SpinOps {
    pub n: usize,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
}

/// Spin-`n/2` matrices in the `S_z` eigenbasis ordered `n/2, n/2 - 1, ...`.
pub fn spin_matrices(n: usize) -> Result<SpinOps> {
    check_n(n, 1)?;
    let d = n + 1;
    let j = n as f64 / 2.0;
    let m = |w: usize| j - w as f64;
    // <m+1|S+|m> = sqrt(j(j+1) - m(m+1)); S+ maps index w to w - 1
    let mut sp = CMatrix::zeros(d, d);
    for w in 1..d {
        let mw = m(w);
        sp[(w - 1, w)] = C64::new((j * (j + 1.0) - mw * (mw + 1.0)).sqrt(), 0.0);
    }
    let sm = sp.adjoint();
    let half = C64::new(0.5, 0.0);
    let sx = (&sp + &sm) * half;
    let sy = (&sp - &sm) * C64::new(0.0, -0.5);
    let sz = CMatrix::from_diagonal(&DVector::from_fn(d, |w, _| C64::new(m(w), 0.0)));
    Ok(SpinOps { n, sx, sy, sz })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    Raw,
    /// Multiplied by `(2/n)^3`.
    Cubic,
}

#[derive(Debug, Clone)]
pub struct CollectiveHamiltonian {
    pub n: usize,
    pub matrix: CMatrix,
    pub scaling: Scaling,
}

impl CollectiveHamiltonian {
    fn raw(n: usize, matrix: CMatrix) -> Self {
        CollectiveHamiltonian {
            n,
            matrix,
            scaling: Scaling::Raw,
        }
    }
}

/// Problem Hamiltonian of the symmetric instance as a cubic in `S_z`:
///
/// ```text
/// 3/2 (n/2 - S_z)(n/2 + S_z)(n/2 + S_z - 1)
///   + 1/2 (n/2 - S_z)(n/2 - S_z - 1)(n/2 + S_z)
///   + 1/6 (n/2 - S_z)(n/2 - S_z - 1)(n/2 - S_z - 2)
/// ```
pub fn hp_collective(n: usize) -> Result<CollectiveHamiltonian> {
    check_n(n, 3)?;
    let half = n as f64 / 2.0;
    let diag = DVector::from_fn(n + 1, |w, _| {
        let sz = half - w as f64;
        let (a, b) = (half - sz, half + sz);
        let v = 1.5 * a * b * (b - 1.0) + 0.5 * a * (a - 1.0) * b + a * (a - 1.0) * (a - 2.0) / 6.0;
        C64::new(v, 0.0)
    });
    Ok(CollectiveHamiltonian::raw(n, CMatrix::from_diagonal(&diag)))
}

/// `C(n-1, 2) (n/2 - S_x)`.
pub fn hb_collective(n: usize) -> Result<CollectiveHamiltonian> {
    check_n(n, 3)?;
    let ops = spin_matrices(n)?;
    let id = CMatrix::identity(n + 1, n + 1) * C64::new(n as f64 / 2.0, 0.0);
    let m = (id - ops.sx) * C64::new(binom(n - 1, 2), 0.0);
    Ok(CollectiveHamiltonian::raw(n, m))
}

/// Leading large-`n` term `-2n (S_x S_z + S_z S_x)` of the extra term built
/// from [`crate::operators::eq30_matrix`] on every triple.
pub fn he_collective_eq31(n: usize) -> Result<CollectiveHamiltonian> {
    check_n(n, 3)?;
    let ops = spin_matrices(n)?;
    let anti = &ops.sx * &ops.sz + &ops.sz * &ops.sx;
    Ok(CollectiveHamiltonian::raw(n, anti * C64::new(-2.0 * n as f64, 0.0)))
}

/// `(2/n)^3 [(1 - s) H_B + s H_P + s(1 - s) H_E]` with `H_E` the leading term
/// of [`he_collective_eq31`] when `include_he` is set.
pub fn scaled_path_collective(n: usize, s: f64, include_he: bool) -> Result<CollectiveHamiltonian> {
    CollectivePath::new(n, include_he, Scaling::Cubic).map(|p| p.at(s))
}

/// Precomputed collective `H_B`, `H_P` and `H_E` for repeated evaluation
/// along the path.
#[derive(Debug, Clone)]
pub struct CollectivePath {
    n: usize,
    hb: CMatrix,
    hp: CMatrix,
    he: Option<CMatrix>,
    scaling: Scaling,
}

impl CollectivePath {
    pub fn new(n: usize, include_he: bool, scaling: Scaling) -> Result<Self> {
        Ok(CollectivePath {
            n,
            hb: hb_collective(n)?.matrix,
            hp: hp_collective(n)?.matrix,
            he: if include_he { Some(he_collective_eq31(n)?.matrix) } else { None },
            scaling,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn at(&self, s: f64) -> CollectiveHamiltonian {
        let f = match self.scaling {
            Scaling::Raw => 1.0,
            Scaling::Cubic => (2.0 / self.n as f64).powi(3),
        };
        let mut m = &self.hb * C64::new(f * (1.0 - s), 0.0) + &self.hp * C64::new(f * s, 0.0);
        if let Some(he) = &self.he {
            m += he * C64::new(f * s * (1.0 - s), 0.0);
        }
        CollectiveHamiltonian {
            n: self.n,
            matrix: m,
            scaling: self.scaling,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoherentState {
    pub n: usize,
    pub theta: f64,
    pub phi: f64,
    pub amplitudes: DVector<C64>,
}

/// Dicke-basis amplitudes of the product state whose every bit is
/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`:
/// `sqrt(C(n,w)) cos(θ/2)^(n-w) sin(θ/2)^w e^{iwφ}`, evaluated in logs.
pub fn coherent_state(n: usize, theta: f64, phi: f64) -> Result<CoherentState> {
    check_n(n, 1)?;
    if !(0.0..=std::f64::consts::PI).contains(&theta) || !phi.is_finite() {
        return Err(Error::input(format!("angles out of range: θ = {theta}, φ = {phi}")));
    }
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (lc, ls) = (c.abs().ln(), s.abs().ln());
    let mut log_binom = 0.0f64;
    let amplitudes = DVector::from_fn(n + 1, |w, _| {
        if w > 0 {
            log_binom += ((n - w + 1) as f64).ln() - (w as f64).ln();
        }
        let mut lg = 0.5 * log_binom;
        if n - w > 0 {
            lg += (n - w) as f64 * lc;
        }
        if w > 0 {
            lg += w as f64 * ls;
        }
        let mag = lg.exp();
        C64::from_polar(mag, w as f64 * phi)
    });
    Ok(CoherentState {
        n,
        theta,
        phi,
        amplitudes,
    })
}

impl CoherentState {
    /// `⟨θ,φ| M |θ,φ⟩`.
    pub fn expectation(&self, m: &CMatrix) -> C64 {
        self.amplitudes.dotc(&(m * &self.amplitudes))
    }
}
