use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{pauli_decompose, ClauseMatrix};

/// `(2/n)^3 C(n, 3) -> 4/3`.
pub const TRIPLE_SUM_LIMIT: f64 = 4.0 / 3.0;

/// Unit vector on the sphere; `θ = arccos m_z`, `φ = atan2(m_y, m_x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpherePoint([f64; 3]);

impl SpherePoint {
    /// Normalizes `v`; fails on a zero or non-finite vector.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = norm3(v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::input(format!("cannot normalize {v:?}")));
        }
        Ok(SpherePoint([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        SpherePoint([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    /// `(1, 0, 0)`: the ground state of the beginning Hamiltonian.
    pub fn equator_x() -> Self {
        SpherePoint([1.0, 0.0, 0.0])
    }

    pub fn vector(&self) -> [f64; 3] {
        self.0
    }

    pub fn theta(&self) -> f64 {
        self.0[2].clamp(-1.0, 1.0).acos()
    }

    pub fn phi(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }

    /// Great-circle distance.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        let c = cross(self.0, other.0);
        norm3(c).atan2(dot(self.0, other.0))
    }

    /// Retraction: normalize `m + Σ t_k e_k`.
    pub(crate) fn step(&self, d: [f64; 3]) -> SpherePoint {
        let v = [self.0[0] + d[0], self.0[1] + d[1], self.0[2] + d[2]];
        let n = norm3(v);
        SpherePoint([v[0] / n, v[1] / n, v[2] / n])
    }

    /// Orthonormal basis of the tangent plane.
    pub fn tangent_basis(&self) -> [[f64; 3]; 2] {
        let m = self.0;
        let axis = if m[0].abs() <= m[1].abs() && m[0].abs() <= m[2].abs() {
            [1.0, 0.0, 0.0]
        } else if m[1].abs() <= m[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let e1 = cross(axis, m);
        let n1 = norm3(e1);
        let e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
        let e2 = cross(m, e1);
        [e1, e2]
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Large-`n` potential without the extra term, in angles.
pub fn v0(theta: f64, phi: f64, s: f64) -> f64 {
    let c = theta.cos();
    2.0 * (1.0 - s) * (1.0 - theta.sin() * phi.cos())
        + s * (13.0 + 3.0 * c - 9.0 * c * c - 7.0 * c * c * c) / 6.0
}

fn v0_m(m: [f64; 3], s: f64) -> f64 {
    let z = m[2];
    2.0 * (1.0 - s) * (1.0 - m[0]) + s * (13.0 + 3.0 * z - 9.0 * z * z - 7.0 * z * z * z) / 6.0
}

/// `V = V_0 + V_E`, with `V_E(m, s) = s(1-s) (4/3) Σ a_{αβγ} M_α M_β M_γ`,
/// `M = (1, m_x, m_y, m_z)` and `a` the Pauli coefficients of the shared
/// clause matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePotential {
    /// Raw coefficients indexed `16α + 4β + γ` over `(I, X, Y, Z)`.
    coeffs: [f64; 64],
    /// Fully symmetrized coefficients, same indexing.
    sym: [f64; 64],
}

impl EffectivePotential {
    /// The potential without an extra term.
    pub fn none() -> Self {
        EffectivePotential {
            coeffs: [0.0; 64],
            sym: [0.0; 64],
        }
    }

    pub fn from_coefficients(coeffs: [f64; 64]) -> Self {
        let mut sym = [0.0; 64];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let perms = [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)];
                    sym[16 * a + 4 * b + c] =
                        perms.iter().map(|&(x, y, z)| coeffs[16 * x + 4 * y + z]).sum::<f64>() / 6.0;
                }
            }
        }
        EffectivePotential { coeffs, sym }
    }

    pub fn coefficients(&self) -> &[f64; 64] {
        &self.coeffs
    }

    pub fn is_none(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `Σ a M M M` (no `s` factor, no `4/3`).
    pub fn cubic(&self, m: [f64; 3]) -> f64 {
        let mm = [1.0, m[0], m[1], m[2]];
        let mut acc = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let ab = mm[a] * mm[b];
                for c in 0..4 {
                    acc += self.coeffs[16 * a + 4 * b + c] * ab * mm[c];
                }
            }
        }
        acc
    }

    pub fn ve(&self, m: &SpherePoint, s: f64) -> f64 {
        s * (1.0 - s) * TRIPLE_SUM_LIMIT * self.cubic(m.0)
    }

    pub fn v(&self, m: &SpherePoint, s: f64) -> f64 {
        v0_m(m.0, s) + self.ve(m, s)
    }

    pub fn v_angles(&self, theta: f64, phi: f64, s: f64) -> f64 {
        self.v(&SpherePoint::from_angles(theta, phi), s)
    }

    /// Gradient and Hessian of the ambient polynomial in `(m_x, m_y, m_z)`.
    pub(crate) fn euclidean_derivatives(&self, m: [f64; 3], s: f64) -> ([f64; 3], [[f64; 3]; 3]) {
        let w = s * (1.0 - s) * TRIPLE_SUM_LIMIT;
        let mm = [1.0, m[0], m[1], m[2]];
        let mut g = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        if w != 0.0 {
            for i in 0..3 {
                let mut gi = 0.0;
                for b in 0..4 {
                    for c in 0..4 {
                        gi += self.sym[16 * (i + 1) + 4 * b + c] * mm[b] * mm[c];
                    }
                }
                g[i] = 3.0 * w * gi;
                for j in 0..3 {
                    let mut hij = 0.0;
                    for c in 0..4 {
                        hij += self.sym[16 * (i + 1) + 4 * (j + 1) + c] * mm[c];
                    }
                    h[i][j] = 6.0 * w * hij;
                }
            }
        }
        let z = m[2];
        g[0] += -2.0 * (1.0 - s);
        g[2] += s * (3.0 - 18.0 * z - 21.0 * z * z) / 6.0;
        h[2][2] += s * (-18.0 - 42.0 * z) / 6.0;
        (g, h)
    }

    /// Tangent-plane gradient (Euclidean gradient projected onto `m^⊥`).
    pub fn grad(&self, m: &SpherePoint, s: f64) -> [f64; 3] {
        let (g, _) = self.euclidean_derivatives(m.0, s);
        let r = dot(g, m.0);
        [g[0] - r * m.0[0], g[1] - r * m.0[1], g[2] - r * m.0[2]]
    }

    /// Riemannian Hessian in the basis [`SpherePoint::tangent_basis`]:
    /// `E^T ∇²V E - (m · ∇V) I`.
    pub fn tangent_hessian(&self, m: &SpherePoint, s: f64) -> TangentHessian {
        let (g, h) = self.euclidean_derivatives(m.0, s);
        let basis = m.tangent_basis();
        let radial = dot(g, m.0);
        let mut out = [[0.0; 2]; 2];
        for a in 0..2 {
            let he = [
                dot(h[0], basis[a]),
                dot(h[1], basis[a]),
                dot(h[2], basis[a]),
            ];
            for b in 0..2 {
                out[b][a] = dot(basis[b], he) - if a == b { radial } else { 0.0 };
            }
        }
        TangentHessian { basis, h: out }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentHessian {
    pub basis: [[f64; 3]; 2],
    pub h: [[f64; 2]; 2],
}

impl TangentHessian {
    /// Eigenpairs of the symmetric 2x2 block, ascending.
    pub fn eigen(&self) -> [(f64, [f64; 2]); 2] {
        let [[a, b], [_, d]] = self.h;
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let (l0, l1) = (mean - r, mean + r);
        let half = 0.5 * (2.0 * b).atan2(a - d);
        let v0 = [-half.sin(), half.cos()];
        [(l0, v0), (l1, [-v0[1], v0[0]])]
    }
}

/// Tangent gradient of `pot` at `m`.
pub fn grad_v(m: &SpherePoint, s: f64, pot: &EffectivePotential) -> [f64; 3] {
    pot.grad(m, s)
}

pub fn hess_v(m: &SpherePoint, s: f64, pot: &EffectivePotential) -> TangentHessian {
    pot.tangent_hessian(m, s)
}

pub fn v(m: &SpherePoint, s: f64, pot: &EffectivePotential) -> f64 {
    pot.v(m, s)
}

/// Builds the extra-term potential of a zero-diagonal 8x8 clause matrix
/// shared by every triple.
pub fn ve_from_matrix(a: &ClauseMatrix) -> Result<EffectivePotential> {
    if a.arity() != 3 {
        return Err(Error::input("effective potential needs an 8x8 matrix"));
    }
    if !a.has_zero_diagonal() {
        return Err(Error::input(
            "matrix has a nonzero diagonal, which would modify the cost function",
        ));
    }
    let dec = pauli_decompose(a);
    let mut coeffs = [0.0; 64];
    for (c, z) in coeffs.iter_mut().zip(dec.coeffs()) {
        *c = z.re;
    }
    Ok(EffectivePotential::from_coefficients(coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub s: f64,
    pub theta: f64,
    pub v_phi0: f64,
    pub v_phi_pi: f64,
}

/// `V(θ, 0, s)` and `V(θ, π, s)` on a uniform θ grid over `[0, π]`.
pub fn figure_curves(pot: &EffectivePotential, s_values: &[f64], theta_points: usize) -> Vec<FigureRow> {
    let mut rows = Vec::with_capacity(s_values.len() * theta_points);
    for &s in s_values {
        for k in 0..theta_points {
            let theta = if theta_points > 1 {
                std::f64::consts::PI * k as f64 / (theta_points - 1) as f64
            } else {
                0.0
            };
            rows.push(FigureRow {
                s,
                theta,
                v_phi0: pot.v_angles(theta, 0.0, s),
                v_phi_pi: pot.v_angles(theta, std::f64::consts::PI, s),
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{eq30_matrix, random_clause_matrix, EntryDistribution, EntryKind, PauliWord};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn v0_closed_form_values() {
        assert_eq!(v0(FRAC_PI_2, 0.0, 0.0), 0.0);
        assert!(v0(0.0, 1.234, 1.0).abs() < 1e-15);
        assert!((v0(PI, 0.0, 1.0) - 4.0 / 3.0).abs() < 1e-14);
        let none = EffectivePotential::none();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let (t, p, s) = (rng.random::<f64>() * PI, (rng.random::<f64>() - 0.5) * 2.0 * PI, rng.random::<f64>());
            assert!((none.v_angles(t, p, s) - v0(t, p, s)).abs() < 1e-13);
        }
    }

    #[test]
    fn special_matrix_potential() {
        let pot = ve_from_matrix(&eq30_matrix()).unwrap();
        let m = SpherePoint::from_angles(FRAC_PI_4, 0.0);
        assert!((pot.ve(&m, 0.5) + 1.0).abs() < 1e-12);
        for k in 0..20 {
            let t = PI * k as f64 / 19.0;
            let want = v0(t, 0.0, 0.3) - 8.0 * 0.3 * 0.7 * t.cos() * t.sin();
            assert!((pot.v_angles(t, 0.0, 0.3) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn endpoints_are_matrix_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_clause_matrix(3, EntryDistribution::default(), &mut rng);
        let pot = ve_from_matrix(&a).unwrap();
        for _ in 0..20 {
            let m = SpherePoint::new([rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5]).unwrap();
            assert_eq!(pot.ve(&m, 0.0), 0.0);
            assert_eq!(pot.ve(&m, 1.0), 0.0);
            assert_eq!(pot.v(&m, 1.0), EffectivePotential::none().v(&m, 1.0));
        }
    }

    #[test]
    fn no_pure_z_monomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for kind in [EntryKind::RealSymmetric, EntryKind::ComplexHermitian] {
            let a = random_clause_matrix(3, EntryDistribution { kind, half_width: 3.0 }, &mut rng);
            let pot = ve_from_matrix(&a).unwrap();
            for w in 0..64 {
                let word = PauliWord::from_index(3, w);
                if word.letters().iter().all(|p| matches!(p, crate::operators::Pauli::I | crate::operators::Pauli::Z)) {
                    assert_eq!(pot.coefficients()[w], 0.0, "{word}");
                }
            }
        }
    }

    #[test]
    fn rejects_nonzero_diagonal() {
        let mut m = eq30_matrix().matrix().clone();
        m[(3, 3)] = crate::C64::new(1.0, 0.0);
        let a = ClauseMatrix::new(m).unwrap();
        assert!(matches!(ve_from_matrix(&a), Err(Error::Input(_))));
    }

    #[test]
    fn start_point_is_stationary() {
        let g = grad_v(&SpherePoint::equator_x(), 0.0, &EffectivePotential::none());
        assert!(norm3(g) < 1e-15);
    }

    #[test]
    fn angles_round_trip() {
        let m = SpherePoint::from_angles(1.2, -2.5);
        assert!((m.theta() - 1.2).abs() < 1e-14 && (m.phi() + 2.5).abs() < 1e-14);
        assert!((m.angle_to(&SpherePoint::from_angles(1.2, -2.5))).abs() < 1e-12);
        assert!((SpherePoint::from_angles(0.0, 0.0).angle_to(&SpherePoint::from_angles(PI, 0.0)) - PI).abs() < 1e-12);
        assert!(SpherePoint::new([0.0; 3]).is_err());
    }

    #[test]
    fn figure_rows() {
        let rows = figure_curves(&EffectivePotential::none(), &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0], 501);
        assert_eq!(rows.len(), 6 * 501);
        for r in &rows {
            assert!((r.v_phi0 - v0(r.theta, 0.0, r.s)).abs() < 1e-13);
            assert!((r.v_phi_pi - v0(r.theta, PI, r.s)).abs() < 1e-13);
        }
        assert_eq!(rows[500].theta, PI);
    }

    #[test]
    fn tangent_eigen_survives_tiny_coupling() {
        let basis = SpherePoint::equator_x().tangent_basis();
        for (h, want) in [
            ([[2.0, 1e-166], [1e-166, 0.5]], [0.0, 1.0]),
            ([[0.5, 1e-166], [1e-166, 2.0]], [1.0, 0.0]),
            ([[1.0, 0.0], [0.0, 1.0]], [0.0, 1.0]),
        ] {
            let [(l0, v0), (l1, v1)] = TangentHessian { basis, h }.eigen();
            assert!(l0 <= l1);
            assert!(v0.iter().chain(&v1).all(|x| x.is_finite()));
            assert!((v0[0].abs() - want[0]).abs() < 1e-15 && (v0[1].abs() - want[1]).abs() < 1e-15);
        }
        let th = TangentHessian { basis, h: [[1.0, 2.0], [2.0, -3.0]] };
        for (l, v) in th.eigen() {
            let hv = [v[0] + 2.0 * v[1], 2.0 * v[0] - 3.0 * v[1]];
            assert!((hv[0] - l * v[0]).abs() < 1e-14 && (hv[1] - l * v[1]).abs() < 1e-14);
        }
    }
}
