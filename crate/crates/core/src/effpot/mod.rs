//! Large-`n` effective potential on the sphere for the symmetric instance.
//!
//! In a spin coherent state pointing along `m`, every bit carries Bloch
//! vector `m`, so the expectation of a clause operator with Pauli expansion
//! `Σ a_{αβγ} σ_α σ_β σ_γ` factorizes into `Σ a_{αβγ} m_α m_β m_γ` (with
//! `m_0 = 1`). Summing over all `C(n, 3)` triples and scaling by `(2/n)^3`
//! gives the `4/3` prefactor of [`potential::TRIPLE_SUM_LIMIT`].

mod mc;
mod potential;
mod track;

pub use mc::{mc_experiment, trial_rng, McConfig, McResult};
pub use potential::{
    figure_curves, grad_v, hess_v, v, v0, ve_from_matrix, EffectivePotential, FigureRow,
    SpherePoint, TangentHessian, TRIPLE_SUM_LIMIT,
};
pub use track::{
    classify, global_grid_minimum, minimize_on_sphere, track_minimum, Outcome, TrackConfig,
    TrackIssue, TrackPoint, TrackResult, POLE_THRESHOLD,
};

/// `s` values of the six figure panels.
pub const FIGURE_S_VALUES: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
/// θ resolution of the figure curves.
pub const FIGURE_THETA_POINTS: usize = 501;
