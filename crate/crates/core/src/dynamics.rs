//! Schrödinger evolution `i dψ/dt = H(t/T) ψ` (ħ = 1) and success
//! probabilities.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::collective::CollectivePath;
use crate::error::{Error, Result};
use crate::operators::PathHamiltonian;
use crate::spectra::{eigensystem, ground_projector, GapProfile, GroundProjector};
use crate::{CMatrix, C64};

/// Default norm-drift tolerance.
pub const NORM_TOL: f64 = 1e-8;

/// A Hamiltonian path `s -> H(s)` on a fixed Hilbert space.
pub trait PathOperator: Sync {
    fn dim(&self) -> usize;
    fn matrix_at(&self, s: f64) -> Result<CMatrix>;
    /// `out = H(s) ψ`. The default goes through the dense matrix.
    fn apply_into(&self, s: f64, psi: &[C64], out: &mut [C64]) -> Result<()> {
        let h = self.matrix_at(s)?;
        let v = &h * DVector::from_column_slice(psi);
        out.copy_from_slice(v.as_slice());
        Ok(())
    }
}

impl PathOperator for PathHamiltonian {
    fn dim(&self) -> usize {
        PathHamiltonian::dim(self)
    }

    fn matrix_at(&self, s: f64) -> Result<CMatrix> {
        self.materialize(s)
    }

    fn apply_into(&self, s: f64, psi: &[C64], out: &mut [C64]) -> Result<()> {
        PathHamiltonian::apply_into(self, s, psi, out)
    }
}

impl PathOperator for CollectivePath {
    fn dim(&self) -> usize {
        CollectivePath::dim(self)
    }

    fn matrix_at(&self, s: f64) -> Result<CMatrix> {
        Ok(self.at(s).matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact exponential of `H` at each interval midpoint.
    #[default]
    PiecewiseEigen,
    /// Classical fixed-step Runge-Kutta; norm is checked, not restored.
    Rk4,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Computed ground state of `H(0)`.
    GroundOfStart,
    Vector(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSpec {
    pub total_time: f64,
    pub steps: usize,
    pub method: Method,
    pub initial: InitialState,
    pub norm_tol: f64,
    /// Number of evenly spaced samples of (overlap with the instantaneous
    /// ground state, norm) to record, including both ends. 0 records none.
    pub samples: usize,
}

impl EvolutionSpec {
    pub fn new(total_time: f64, steps: usize) -> Self {
        EvolutionSpec {
            total_time,
            steps,
            method: Method::PiecewiseEigen,
            initial: InitialState::GroundOfStart,
            norm_tol: NORM_TOL,
            samples: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub overlap_ground: f64,
    pub norm: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub final_state: Vec<C64>,
    pub norm_drift: f64,
    pub success_probability: f64,
    pub ground_rank: usize,
    pub samples: Vec<Sample>,
}

fn norm(psi: &[C64]) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn instantaneous_ground_overlap<P: PathOperator + ?Sized>(path: &P, s: f64, psi: &[C64]) -> Result<f64> {
    let e = eigensystem(&path.matrix_at(s)?)?;
    let p = ground_projector(&e, e.default_degeneracy_tol())?;
    Ok(success_probability(psi, &p))
}

pub fn evolve<P: PathOperator + ?Sized>(path: &P, spec: &EvolutionSpec) -> Result<EvolutionResult> {
    if !(spec.total_time >= 0.0) || !spec.total_time.is_finite() {
        return Err(Error::input(format!("run time must be finite and >= 0, got {}", spec.total_time)));
    }
    if spec.steps == 0 {
        return Err(Error::input("at least one step is required"));
    }
    let dim = path.dim();
    let mut psi = match &spec.initial {
        InitialState::GroundOfStart => {
            let e = eigensystem(&path.matrix_at(0.0)?)?;
            e.eigenvectors.column(0).iter().copied().collect::<Vec<_>>()
        }
        InitialState::Vector(v) => {
            if v.len() != dim {
                return Err(Error::input(format!("initial state has length {}, expected {dim}", v.len())));
            }
            if (norm(v) - 1.0).abs() > spec.norm_tol {
                return Err(Error::input("initial state is not normalized"));
            }
            v.clone()
        }
    };

    let sample_at: Vec<usize> = match spec.samples {
        0 => vec![],
        1 => vec![spec.steps],
        k => (0..k).map(|i| i * spec.steps / (k - 1)).collect(),
    };
    let mut samples = Vec::with_capacity(sample_at.len());
    let mut next_sample = 0;
    let mut record = |step: usize, psi: &[C64], samples: &mut Vec<Sample>| -> Result<()> {
        while next_sample < sample_at.len() && sample_at[next_sample] == step {
            let s = step as f64 / spec.steps as f64;
            samples.push(Sample {
                t: s * spec.total_time,
                overlap_ground: instantaneous_ground_overlap(path, s, psi)?,
                norm: norm(psi),
            });
            next_sample += 1;
        }
        Ok(())
    };
    record(0, &psi, &mut samples)?;

    let dt = spec.total_time / spec.steps as f64;
    let ds = 1.0 / spec.steps as f64;
    if spec.total_time > 0.0 {
        match spec.method {
            Method::PiecewiseEigen => {
                for k in 0..spec.steps {
                    let s_mid = (k as f64 + 0.5) * ds;
                    let e = eigensystem(&path.matrix_at(s_mid)?)?;
                    let v = &e.eigenvectors;
                    let mut c = v.adjoint() * DVector::from_column_slice(&psi);
                    for (ci, &lam) in c.iter_mut().zip(&e.eigenvalues) {
                        *ci *= C64::from_polar(1.0, -lam * dt);
                    }
                    psi.copy_from_slice((v * c).as_slice());
                    record(k + 1, &psi, &mut samples)?;
                }
            }
            Method::Rk4 => {
                let mut k1 = vec![C64::new(0.0, 0.0); dim];
                let mut k2 = k1.clone();
                let mut k3 = k1.clone();
                let mut k4 = k1.clone();
                let mut tmp = k1.clone();
                let mi = C64::new(0.0, -1.0);
                for k in 0..spec.steps {
                    let s0 = k as f64 * ds;
                    // dψ/dt = -i H(t/T) ψ
                    path.apply_into(s0, &psi, &mut k1)?;
                    for i in 0..dim {
                        tmp[i] = psi[i] + k1[i] * mi * (dt / 2.0);
                    }
                    path.apply_into(s0 + ds / 2.0, &tmp, &mut k2)?;
                    for i in 0..dim {
                        tmp[i] = psi[i] + k2[i] * mi * (dt / 2.0);
                    }
                    path.apply_into(s0 + ds / 2.0, &tmp, &mut k3)?;
                    for i in 0..dim {
                        tmp[i] = psi[i] + k3[i] * mi * dt;
                    }
                    path.apply_into(s0 + ds, &tmp, &mut k4)?;
                    for i in 0..dim {
                        psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * mi * (dt / 6.0);
                    }
                    record(k + 1, &psi, &mut samples)?;
                }
            }
        }
    } else {
        for k in 1..=spec.steps {
            record(k, &psi, &mut samples)?;
        }
    }

    let norm_drift = (norm(&psi) - 1.0).abs();
    if norm_drift > spec.norm_tol {
        return Err(Error::Numerical(format!(
            "norm drift {norm_drift:e} exceeds {:e} after {} steps; increase the step count",
            spec.norm_tol, spec.steps
        )));
    }
    let e1 = eigensystem(&path.matrix_at(1.0)?)?;
    let p = ground_projector(&e1, e1.default_degeneracy_tol())?;
    Ok(EvolutionResult {
        success_probability: success_probability(&psi, &p),
        ground_rank: p.rank,
        final_state: psi,
        norm_drift,
        samples,
    })
}

/// `⟨ψ|P|ψ⟩` clamped to `[0, 1]`.
pub fn success_probability(psi: &[C64], p: &GroundProjector) -> f64 {
    let v = DVector::from_column_slice(psi);
    v.dotc(&(&p.matrix * &v)).re.clamp(0.0, 1.0)
}

/// `c / min_gap²`, or infinity when the gap closes.
pub fn required_time_estimate(profile: &GapProfile, c: f64) -> f64 {
    if profile.min_gap <= 0.0 {
        f64::INFINITY
    } else {
        c / (profile.min_gap * profile.min_gap)
    }
}
