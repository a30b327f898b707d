//! Continuation of a local minimum of `V(·, s)` on the sphere as `s` runs
//! from 0 to 1.

use serde::{Deserialize, Serialize};

use super::potential::{dot, norm3, EffectivePotential, SpherePoint};

/// Endpoint thresholds on `m_z` (about 2.6 degrees from a pole).
pub const POLE_THRESHOLD: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackConfig {
    /// Continuation step in `s`.
    pub ds: f64,
    /// Stationarity tolerance on the tangent gradient norm.
    pub tol: f64,
    /// Largest accepted great-circle distance between consecutive minimizers.
    pub continuity_bound: f64,
    pub max_iter: usize,
    /// Compare against a coarse global grid search every this many steps.
    pub global_check_every: Option<usize>,
}

impl Default for TrackConfig {
    fn default() -> Self {
        TrackConfig {
            ds: 1e-3,
            tol: 1e-10,
            continuity_bound: 0.2,
            max_iter: 500,
            global_check_every: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// Ends at the global minimum `θ = 0`.
    Success,
    /// Ends at the all-ones state `θ = π`.
    Failure,
    Indeterminate,
}

impl Outcome {
    pub fn from_endpoint(m: &SpherePoint) -> Outcome {
        let z = m.vector()[2];
        if z >= POLE_THRESHOLD {
            Outcome::Success
        } else if z <= -POLE_THRESHOLD {
            Outcome::Failure
        } else {
            Outcome::Indeterminate
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrackIssue {
    /// The local minimum vanished and the minimizer landed elsewhere.
    Jump { s: f64, angle: f64 },
    NotConverged { s: f64, grad_norm: f64 },
    /// The tracked minimum sits above the coarse global minimum. Informational.
    NotGlobal { s: f64, excess: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackPoint {
    pub s: f64,
    pub m: SpherePoint,
    pub v: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackResult {
    pub points: Vec<TrackPoint>,
    pub issues: Vec<TrackIssue>,
}

impl TrackResult {
    pub fn endpoint(&self) -> SpherePoint {
        self.points.last().expect("tracks are nonempty").m
    }

    /// True when no jump or convergence failure occurred.
    pub fn is_continuous(&self) -> bool {
        !self
            .issues
            .iter()
            .any(|i| matches!(i, TrackIssue::Jump { .. } | TrackIssue::NotConverged { .. }))
    }
}

/// Endpoint label; a discontinuous or unconverged track is indeterminate.
pub fn classify(tr: &TrackResult) -> Outcome {
    if tr.is_continuous() {
        Outcome::from_endpoint(&tr.endpoint())
    } else {
        Outcome::Indeterminate
    }
}

/// Local minimization on the sphere: projected Newton with a steepest-descent
/// fallback, negative-curvature escape from saddles and Armijo backtracking.
/// Returns the point and whether it meets the stationarity and curvature test.
pub fn minimize_on_sphere(
    pot: &EffectivePotential,
    s: f64,
    start: SpherePoint,
    tol: f64,
    max_iter: usize,
) -> (SpherePoint, bool) {
    const MAX_STEP: f64 = 0.1;
    const CURVATURE_TOL: f64 = 1e-8;
    let mut m = start;
    let mut v = pot.v(&m, s);
    for _ in 0..max_iter {
        let g3 = pot.grad(&m, s);
        let th = pot.tangent_hessian(&m, s);
        let [e1, e2] = th.basis;
        let g = [dot(g3, e1), dot(g3, e2)];
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
        let eig = th.eigen();
        let l0 = eig[0].0;
        if gn <= tol && l0 >= -CURVATURE_TOL {
            return (m, true);
        }

        // saddle-free Newton: scale each eigendirection by 1/|λ|
        let mut d = [0.0; 2];
        for &(l, u) in &eig {
            let gu = u[0] * g[0] + u[1] * g[1];
            let mut c = -gu / l.abs().max(1e-8);
            if l < -CURVATURE_TOL && gu.abs() < 1e-3 * (-l) {
                c += if gu > 0.0 { -1e-3 } else { 1e-3 };
            }
            d[0] += c * u[0];
            d[1] += c * u[1];
        }
        if d[0] * g[0] + d[1] * g[1] > 0.0 {
            d = [-g[0], -g[1]];
        }
        let dn = (d[0] * d[0] + d[1] * d[1]).sqrt();
        if dn > MAX_STEP {
            d = [d[0] * MAX_STEP / dn, d[1] * MAX_STEP / dn];
        }
        let slope = d[0] * g[0] + d[1] * g[1];

        let mut alpha = 1.0;
        let accepted = loop {
            let step = [
                alpha * (d[0] * e1[0] + d[1] * e2[0]),
                alpha * (d[0] * e1[1] + d[1] * e2[1]),
                alpha * (d[0] * e1[2] + d[1] * e2[2]),
            ];
            let cand = m.step(step);
            let vc = pot.v(&cand, s);
            // near a minimum V changes below its roundoff; judge by the gradient
            let near = gn < 1e-6 && vc <= v + 1e-12 * v.abs().max(1.0) && norm3(pot.grad(&cand, s)) < gn;
            if vc <= v + 1e-4 * alpha * slope || near {
                break Some((cand, vc));
            }
            alpha *= 0.5;
            if alpha < 1e-12 {
                break None;
            }
        };
        match accepted {
            Some((cand, vc)) => {
                m = cand;
                v = vc;
            }
            None => {
                let ok = gn <= tol.max(1e3 * f64::EPSILON) && l0 >= -CURVATURE_TOL;
                return (m, ok);
            }
        }
    }
    let gn = norm3(pot.grad(&m, s));
    let l0 = pot.tangent_hessian(&m, s).eigen()[0].0;
    (m, gn <= tol && l0 >= -CURVATURE_TOL)
}

/// Coarse global minimum of `V(·, s)` over a `(θ, φ)` grid.
pub fn global_grid_minimum(pot: &EffectivePotential, s: f64, n_theta: usize, n_phi: usize) -> (SpherePoint, f64) {
    let mut best = (SpherePoint::equator_x(), f64::INFINITY);
    for i in 0..n_theta.max(2) {
        let theta = std::f64::consts::PI * i as f64 / (n_theta.max(2) - 1) as f64;
        for j in 0..n_phi.max(1) {
            let phi = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / n_phi.max(1) as f64;
            let m = SpherePoint::from_angles(theta, phi);
            let val = pot.v(&m, s);
            if val < best.1 {
                best = (m, val);
            }
        }
    }
    best
}

/// Follows the local minimum that starts at `θ = π/2, φ = 0` for `s = 0`,
/// warm-starting each grid step from the previous minimizer.
pub fn track_minimum(pot: &EffectivePotential, cfg: &TrackConfig) -> TrackResult {
    assert!(cfg.ds > 0.0 && cfg.tol > 0.0, "step and tolerance must be positive");
    let steps = (1.0 / cfg.ds).round().max(1.0) as usize;
    let mut points = Vec::with_capacity(steps + 1);
    let mut issues = Vec::new();
    let mut m = SpherePoint::equator_x();
    for k in 0..=steps {
        let s = if k == steps { 1.0 } else { k as f64 / steps as f64 };
        let (next, ok) = minimize_on_sphere(pot, s, m, cfg.tol, cfg.max_iter);
        let grad_norm = norm3(pot.grad(&next, s));
        if !ok {
            issues.push(TrackIssue::NotConverged { s, grad_norm });
        }
        let angle = m.angle_to(&next);
        if angle > cfg.continuity_bound {
            issues.push(TrackIssue::Jump { s, angle });
        }
        let v = pot.v(&next, s);
        if let Some(every) = cfg.global_check_every {
            if every > 0 && k % every == 0 {
                let (_, vg) = global_grid_minimum(pot, s, 91, 180);
                if v > vg + 1e-6 {
                    issues.push(TrackIssue::NotGlobal { s, excess: v - vg });
                }
            }
        }
        m = next;
        points.push(TrackPoint { s, m, v, grad_norm });
    }
    TrackResult { points, issues }
}
