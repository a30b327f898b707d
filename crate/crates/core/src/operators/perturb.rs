//! Random extra terms `h_{E,C}` for the path Hamiltonian.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::operators::{negate_bits, ClauseMatrix};
use crate::{CMatrix, C64};

/// How the per-clause extra terms are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Proposal {
    /// No extra term: the straight-line path.
    None,
    /// An independent random matrix for every clause.
    P1,
    /// One random 8x8 matrix shared by every clause. Requires all clauses to
    /// carry the same three-bit table.
    P2,
    /// One base matrix for the 3-SAT clause whose False assignment is 000;
    /// every other clause gets the base conjugated by `σ_x` on the bits its
    /// False assignment negates.
    P3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    /// Off-diagonal entries i.i.d. uniform on `[-w, w]`, mirrored.
    RealSymmetric,
    /// Real and imaginary parts i.i.d. uniform on `[-w, w]`, Hermitized.
    ComplexHermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryDistribution {
    pub kind: EntryKind,
    pub half_width: f64,
}

impl Default for EntryDistribution {
    fn default() -> Self {
        EntryDistribution {
            kind: EntryKind::RealSymmetric,
            half_width: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub proposal: Proposal,
    pub dist: EntryDistribution,
    pub seed: u64,
}

impl PerturbationConfig {
    pub fn none() -> Self {
        PerturbationConfig {
            proposal: Proposal::None,
            dist: EntryDistribution::default(),
            seed: 0,
        }
    }
}

/// Random zero-diagonal Hermitian matrix on `arity` bits.
pub fn random_clause_matrix<R: Rng + ?Sized>(
    arity: usize,
    dist: EntryDistribution,
    rng: &mut R,
) -> ClauseMatrix {
    let d = 1usize << arity;
    let w = dist.half_width;
    let mut u = || w * (2.0 * rng.random::<f64>() - 1.0);
    let mut m = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in r + 1..d {
            let z = match dist.kind {
                EntryKind::RealSymmetric => C64::new(u(), 0.0),
                EntryKind::ComplexHermitian => {
                    let re = u();
                    C64::new(re, u())
                }
            };
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    ClauseMatrix::from_raw(arity, m)
}

/// Extra-term operator for each clause of an instance, in clause order.
/// Clauses sharing a matrix share the allocation.
#[derive(Debug, Clone)]
pub struct Perturbation {
    per_clause: Vec<Arc<ClauseMatrix>>,
}

impl Perturbation {
    pub fn per_clause(&self) -> &[Arc<ClauseMatrix>] {
        &self.per_clause
    }

    pub fn len(&self) -> usize {
        self.per_clause.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_clause.is_empty()
    }

    pub fn from_matrices(inst: &Instance, mats: Vec<ClauseMatrix>) -> Result<Self> {
        if mats.len() != inst.clauses().len() {
            return Err(Error::Config(format!(
                "{} matrices for {} clauses",
                mats.len(),
                inst.clauses().len()
            )));
        }
        for (c, m) in inst.clauses().iter().zip(&mats) {
            if c.arity() != m.arity() {
                return Err(Error::Config("matrix arity differs from clause arity".into()));
            }
        }
        Ok(Perturbation {
            per_clause: mats.into_iter().map(Arc::new).collect(),
        })
    }

    /// The same matrix on every clause.
    pub fn shared(inst: &Instance, a: ClauseMatrix) -> Result<Self> {
        check_uniform_clauses(inst)?;
        if inst.clauses().first().is_some_and(|c| c.arity() != a.arity()) {
            return Err(Error::Config("matrix arity differs from clause arity".into()));
        }
        let a = Arc::new(a);
        Ok(Perturbation {
            per_clause: vec![a; inst.clauses().len()],
        })
    }

    /// `base` conjugated by each clause's False-assignment negation mask.
    pub fn sat_negated(inst: &Instance, base: &ClauseMatrix) -> Result<Self> {
        if base.arity() != 3 {
            return Err(Error::Config("3-SAT base matrix must be 8x8".into()));
        }
        let mut variants: [Option<Arc<ClauseMatrix>>; 8] = Default::default();
        let mut per_clause = Vec::with_capacity(inst.clauses().len());
        for (k, c) in inst.clauses().iter().enumerate() {
            let mask = c.sat_false_assignment().ok_or_else(|| {
                Error::Config(format!("clause {k} is not a 3-SAT clause"))
            })?;
            let slot = &mut variants[mask.word()];
            if slot.is_none() {
                *slot = Some(Arc::new(negate_bits(base, mask)?));
            }
            per_clause.push(Arc::clone(slot.as_ref().unwrap()));
        }
        Ok(Perturbation { per_clause })
    }
}

fn check_uniform_clauses(inst: &Instance) -> Result<()> {
    let Some(first) = inst.clauses().first() else {
        return Ok(());
    };
    if first.arity() != 3 {
        return Err(Error::Config("a shared matrix requires three-bit clauses".into()));
    }
    if inst.clauses().iter().any(|c| c.table() != first.table()) {
        return Err(Error::Config(
            "a shared matrix requires every clause to carry the same table".into(),
        ));
    }
    Ok(())
}

/// Samples extra terms according to `cfg`. Returns `None` for
/// [`Proposal::None`]. The RNG stream is derived from `cfg.seed` only.
pub fn sample_perturbation(inst: &Instance, cfg: &PerturbationConfig) -> Result<Option<Perturbation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    sample_perturbation_with(inst, cfg.proposal, cfg.dist, &mut rng)
}

pub fn sample_perturbation_with<R: Rng + ?Sized>(
    inst: &Instance,
    proposal: Proposal,
    dist: EntryDistribution,
    rng: &mut R,
) -> Result<Option<Perturbation>> {
    match proposal {
        Proposal::None => Ok(None),
        Proposal::P1 => {
            let mats = inst
                .clauses()
                .iter()
                .map(|c| random_clause_matrix(c.arity(), dist, rng))
                .collect();
            Perturbation::from_matrices(inst, mats).map(Some)
        }
        Proposal::P2 => {
            check_uniform_clauses(inst)?;
            Perturbation::shared(inst, random_clause_matrix(3, dist, rng)).map(Some)
        }
        Proposal::P3 => {
            // validate before drawing so that errors do not depend on the RNG
            if let Some(k) = inst.clauses().iter().position(|c| c.sat_false_assignment().is_none()) {
                return Err(Error::Config(format!("P3 needs 3-SAT clauses; clause {k} is not one")));
            }
            let base = random_clause_matrix(3, dist, rng);
            Perturbation::sat_negated(inst, &base).map(Some)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{build_symmetric_instance, random_3sat};

    fn cfg(proposal: Proposal, kind: EntryKind) -> PerturbationConfig {
        PerturbationConfig {
            proposal,
            dist: EntryDistribution { kind, half_width: 3.0 },
            seed: 11,
        }
    }

    #[test]
    fn p2_shares_one_matrix() {
        let inst = build_symmetric_instance(5).unwrap();
        let p = sample_perturbation(&inst, &cfg(Proposal::P2, EntryKind::RealSymmetric))
            .unwrap()
            .unwrap();
        assert_eq!(p.len(), 10);
        for m in p.per_clause() {
            assert!(Arc::ptr_eq(m, &p.per_clause()[0]));
        }
    }

    #[test]
    fn sampled_matrices_are_zero_diagonal_hermitian_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_3sat(6, 12, &mut rng).unwrap();
        for kind in [EntryKind::RealSymmetric, EntryKind::ComplexHermitian] {
            for prop in [Proposal::P1, Proposal::P3] {
                let p = sample_perturbation(&inst, &cfg(prop, kind)).unwrap().unwrap();
                for m in p.per_clause() {
                    assert!(m.has_zero_diagonal());
                    assert!(crate::operators::matrix::hermitian_defect(m.matrix()) == 0.0);
                    assert!(m.matrix().iter().all(|z| z.re.abs() <= 3.0 && z.im.abs() <= 3.0));
                    assert_eq!(m.is_real(), kind == EntryKind::RealSymmetric);
                }
            }
        }
    }

    #[test]
    fn p1_matrices_are_independent() {
        let inst = build_symmetric_instance(4).unwrap();
        let p = sample_perturbation(&inst, &cfg(Proposal::P1, EntryKind::RealSymmetric))
            .unwrap()
            .unwrap();
        assert_ne!(p.per_clause()[0], p.per_clause()[1]);
    }

    #[test]
    fn p3_identity_mask_keeps_base() {
        use crate::instances::{build_3sat_clause, NegationMask};
        let inst = Instance::new(
            4,
            vec![
                build_3sat_clause([0, 1, 2], NegationMask::none(3)).unwrap(),
                build_3sat_clause([1, 2, 3], NegationMask::new(3, 5).unwrap()).unwrap(),
            ],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = random_clause_matrix(3, EntryDistribution::default(), &mut rng);
        let p = Perturbation::sat_negated(&inst, &base).unwrap();
        assert_eq!(*p.per_clause()[0], base);
        assert_eq!(*p.per_clause()[1], negate_bits(&base, NegationMask::new(3, 5).unwrap()).unwrap());
    }

    #[test]
    fn precondition_violations() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sat = random_3sat(6, 10, &mut rng).unwrap();
        let sym = build_symmetric_instance(4).unwrap();
        assert!(matches!(
            sample_perturbation(&sat, &cfg(Proposal::P2, EntryKind::RealSymmetric)),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            sample_perturbation(&sym, &cfg(Proposal::P3, EntryKind::RealSymmetric)),
            Err(Error::Config(_))
        ));
        assert!(sample_perturbation(&sym, &PerturbationConfig::none()).unwrap().is_none());
    }

    #[test]
    fn zero_width_gives_zero_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_clause_matrix(
            3,
            EntryDistribution { kind: EntryKind::RealSymmetric, half_width: 0.0 },
            &mut rng,
        );
        assert!(m.matrix().iter().all(|z| z.norm() == 0.0));
    }
}
