//! Dense Hermitian eigensolving, gap scans along the path and ground-space
//! projectors.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::{CMatrix, C64};

/// Largest matrix accepted by the dense eigensolver (collective sector at
/// `n = 5000`).
pub const EIGEN_MAX_DIM: usize = 5001;
/// Absolute Hermiticity tolerance, relative to `max(1, max|H_ij|)`.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Default degeneracy tolerance relative to the spectral norm.
pub const DEGENERACY_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl EigenSystem {
    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()))
    }

    pub fn default_degeneracy_tol(&self) -> f64 {
        DEGENERACY_REL_TOL * self.spectral_norm().max(1.0)
    }
}

fn check_input(h: &CMatrix) -> Result<bool> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::input(format!("matrix is {}x{}, not square", n, h.ncols())));
    }
    if n == 0 {
        return Err(Error::input("empty matrix"));
    }
    if n > EIGEN_MAX_DIM {
        return Err(Error::Capacity {
            what: "eigensolver dimension",
            got: n,
            limit: EIGEN_MAX_DIM,
        });
    }
    let scale = h.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let defect = crate::operators::hermitian_defect(h);
    if defect > HERMITIAN_INPUT_TOL * scale {
        return Err(Error::input(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    Ok(h.iter().all(|z| z.im == 0.0))
}

fn real_part(h: &CMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| h[(r, c)].re)
}

fn ascending_order(vals: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    idx
}

/// Full eigendecomposition. Real symmetric input takes the real solver.
pub fn eigensystem(h: &CMatrix) -> Result<EigenSystem> {
    let real = check_input(h)?;
    let (vals, vecs): (Vec<f64>, CMatrix) = if real {
        let e = SymmetricEigen::new(real_part(h));
        let vecs = e.eigenvectors.map(|x| C64::new(x, 0.0));
        (e.eigenvalues.iter().copied().collect(), vecs)
    } else {
        let e = SymmetricEigen::new(h.clone());
        (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
    };
    let order = ascending_order(&vals);
    let eigenvalues = order.iter().map(|&i| vals[i]).collect();
    let eigenvectors = CMatrix::from_fn(h.nrows(), h.nrows(), |r, c| vecs[(r, order[c])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues only.
pub fn eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    let real = check_input(h)?;
    let mut vals: Vec<f64> = if real {
        real_part(h).symmetric_eigenvalues().iter().copied().collect()
    } else {
        h.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// `(E0, E1)` where `E1` is the first level more than `tol` above `E0`.
/// Returns `E1 = E0` when no such level exists.
pub fn ground_and_first_excited(vals: &[f64], tol: f64) -> (f64, f64) {
    let e0 = vals[0];
    let e1 = vals.iter().copied().find(|&e| e > e0 + tol).unwrap_or(e0);
    (e0, e1)
}

fn default_tol(vals: &[f64]) -> f64 {
    let norm = vals.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    DEGENERACY_REL_TOL * norm.max(1.0)
}

/// Spectral gap of `h`, skipping levels degenerate with the ground level.
pub fn gap_of(h: &CMatrix) -> Result<(f64, f64, f64)> {
    let vals = eigenvalues(h)?;
    let (e0, e1) = ground_and_first_excited(&vals, default_tol(&vals));
    Ok((e0, e1, e1 - e0))
}

/// [`gap_of`] with an explicit degeneracy tolerance. With `tol = 0` this is
/// `E1 - E0` of the sorted spectrum, the right choice for paths whose
/// spectrum is known to be simple.
pub fn gap_of_with_tol(h: &CMatrix, tol: f64) -> Result<(f64, f64, f64)> {
    let vals = eigenvalues(h)?;
    let (e0, e1) = if tol > 0.0 { ground_and_first_excited(&vals, tol) } else { (vals[0], vals[vals.len().min(2) - 1]) };
    Ok((e0, e1, e1 - e0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub s_grid: Vec<f64>,
    pub e0: Vec<f64>,
    pub e1: Vec<f64>,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    pub argmin_s: f64,
}

impl GapProfile {
    pub fn argmin_index(&self) -> usize {
        self.gaps
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

/// `points` uniformly spaced values covering `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..points).map(|k| k as f64 / (points - 1) as f64).collect(),
    }
}

/// Gap `E1 - E0` at every grid point. Points are evaluated independently
/// (in parallel when `exec` allows) and returned in grid order.
pub fn gap_scan<F>(hamiltonian_at: F, s_grid: &[f64], exec: Execution) -> Result<GapProfile>
where
    F: Fn(f64) -> Result<CMatrix> + Sync + Send,
{
    gap_scan_with(hamiltonian_at, s_grid, exec, None)
}

/// [`gap_scan`] with an explicit degeneracy tolerance (see [`gap_of_with_tol`]).
pub fn gap_scan_with<F>(hamiltonian_at: F, s_grid: &[f64], exec: Execution, tol: Option<f64>) -> Result<GapProfile>
where
    F: Fn(f64) -> Result<CMatrix> + Sync + Send,
{
    if s_grid.is_empty() {
        return Err(Error::input("empty s grid"));
    }
    if s_grid.windows(2).any(|w| w[1] <= w[0]) || s_grid[0] < 0.0 || s_grid[s_grid.len() - 1] > 1.0 {
        return Err(Error::input("s grid must be strictly ascending within [0, 1]"));
    }
    let rows = try_map_indexed(s_grid.len(), exec, |k| {
        let h = hamiltonian_at(s_grid[k])?;
        match tol {
            Some(t) => gap_of_with_tol(&h, t),
            None => gap_of(&h),
        }
    })?;
    let e0: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let e1: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let gaps: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let mut profile = GapProfile {
        s_grid: s_grid.to_vec(),
        e0,
        e1,
        gaps,
        min_gap: 0.0,
        argmin_s: 0.0,
    };
    let k = profile.argmin_index();
    profile.min_gap = profile.gaps[k];
    profile.argmin_s = profile.s_grid[k];
    Ok(profile)
}

/// Golden-section refinement of the coarse minimum, bracketed by the grid
/// neighbours of the coarse argmin. Stops once the bracket is narrower than
/// `s_tol`. Never returns a gap above the coarse minimum.
pub fn min_gap_refine<G>(gap_at: G, coarse: &GapProfile, s_tol: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    if coarse.s_grid.is_empty() {
        return Err(Error::input("empty coarse profile"));
    }
    let k = coarse.argmin_index();
    let last = coarse.s_grid.len() - 1;
    let mut lo = coarse.s_grid[k.saturating_sub(1)];
    let mut hi = coarse.s_grid[(k + 1).min(last)];
    let mut best = (coarse.s_grid[k], coarse.gaps[k]);
    if hi - lo <= 0.0 {
        return Ok(best);
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = gap_at(x1)?;
    let mut f2 = gap_at(x2)?;
    while hi - lo > s_tol.max(f64::EPSILON) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = gap_at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = gap_at(x2)?;
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f < best.1 {
                best = (x, f);
            }
        }
    }
    Ok(best)
}

/// Projector onto the eigenvectors with `λ ≤ λ_0 + tol`.
#[derive(Debug, Clone)]
pub struct GroundProjector {
    pub matrix: CMatrix,
    pub rank: usize,
}

pub fn ground_projector(e: &EigenSystem, tol: f64) -> Result<GroundProjector> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::input("degeneracy tolerance must be positive"));
    }
    let e0 = e.eigenvalues[0];
    let rank = e.eigenvalues.iter().take_while(|&&x| x <= e0 + tol).count();
    let v = e.eigenvectors.columns(0, rank);
    Ok(GroundProjector {
        matrix: &v * v.adjoint(),
        rank,
    })
}
