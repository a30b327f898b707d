//! Minimum gaps of random 3-SAT instances with and without an extra term.

use serde::{Deserialize, Serialize};

use crate::effpot::trial_rng;
use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::instances::{min_cost_bruteforce, random_3sat, Instance};
use crate::operators::{sample_perturbation_with, EntryDistribution, PathHamiltonian, Perturbation, Proposal};
use crate::spectra::{gap_of, gap_scan, min_gap_refine, uniform_grid, GapProfile};

/// Instance draws allowed per requested instance before giving up.
pub const MAX_DRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SatGapStudyConfig {
    pub n: usize,
    pub clauses: usize,
    pub instances: usize,
    pub proposal: Proposal,
    pub dist: EntryDistribution,
    pub seed: u64,
    pub grid_points: usize,
    /// Keep only instances with exactly one satisfying assignment.
    pub unique_only: bool,
    /// Golden-section tolerance in `s`; `None` keeps the grid minimum.
    pub refine: Option<f64>,
}

impl Default for SatGapStudyConfig {
    fn default() -> Self {
        SatGapStudyConfig {
            n: 9,
            clauses: 27,
            instances: 20,
            proposal: Proposal::P1,
            dist: EntryDistribution::default(),
            seed: 0,
            grid_points: 101,
            unique_only: true,
            refine: Some(1e-6),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SatGapRow {
    pub instance_id: usize,
    pub draws: usize,
    pub min_gap_plain: f64,
    pub min_gap_perturbed: f64,
    pub argmin_plain: f64,
    pub argmin_perturbed: f64,
}

impl SatGapRow {
    pub fn ratio(&self) -> f64 {
        self.min_gap_perturbed / self.min_gap_plain
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    /// Linear-interpolation quantiles. `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Quantiles> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let x = p * (v.len() - 1) as f64;
            let (lo, hi) = (x.floor() as usize, x.ceil() as usize);
            v[lo] + (x - lo as f64) * (v[hi] - v[lo])
        };
        Some(Quantiles { min: v[0], q25: q(0.25), median: q(0.5), q75: q(0.75), max: v[v.len() - 1] })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatGapSummary {
    pub plain: Quantiles,
    pub perturbed: Quantiles,
    pub ratio: Quantiles,
    /// Instances whose gap grew with the extra term.
    pub improved: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatGapStudy {
    pub config: SatGapStudyConfig,
    pub rows: Vec<SatGapRow>,
    pub summary: SatGapSummary,
}

/// Minimum gap of one path, refined when `refine` is set.
pub fn path_min_gap(
    h: &PathHamiltonian,
    grid_points: usize,
    refine: Option<f64>,
    exec: Execution,
) -> Result<(f64, f64, GapProfile)> {
    let grid = uniform_grid(grid_points);
    let profile = gap_scan(|s| h.materialize(s), &grid, exec)?;
    let (s, g) = match refine {
        Some(tol) => min_gap_refine(|s| Ok(gap_of(&h.materialize(s)?)?.2), &profile, tol)?,
        None => (profile.argmin_s, profile.min_gap),
    };
    Ok((s, g, profile))
}

/// Draws satisfiable instances until one passes the filter, then samples its
/// extra term from the same stream.
pub fn draw_study_instance(cfg: &SatGapStudyConfig, id: usize) -> Result<(Instance, Option<Perturbation>, usize)> {
    let mut rng = trial_rng(cfg.seed, id as u64);
    for draw in 1..=MAX_DRAWS {
        let inst = random_3sat(cfg.n, cfg.clauses, &mut rng)?;
        let bf = min_cost_bruteforce(&inst)?;
        let keep = bf.min == 0 && (!cfg.unique_only || bf.argmin_indices.len() == 1);
        if keep {
            let pert = sample_perturbation_with(&inst, cfg.proposal, cfg.dist, &mut rng)?;
            return Ok((inst, pert, draw));
        }
    }
    Err(Error::Config(format!(
        "no accepted instance with n = {} and {} clauses after {MAX_DRAWS} draws",
        cfg.n, cfg.clauses
    )))
}

pub fn sat_gap_study(cfg: &SatGapStudyConfig, exec: Execution) -> Result<SatGapStudy> {
    if cfg.instances == 0 {
        return Err(Error::input("at least one instance is required"));
    }
    if cfg.grid_points < 2 {
        return Err(Error::input("grid needs at least two points"));
    }
    if cfg.proposal == Proposal::None {
        return Err(Error::Config("the gap study needs a proposal other than none".into()));
    }
    let rows = try_map_indexed(cfg.instances, exec, |id| {
        let (inst, pert, draws) = draw_study_instance(cfg, id)?;
        let plain = PathHamiltonian::new(&inst, None)?;
        let perturbed = PathHamiltonian::new(&inst, pert.as_ref())?;
        let (sp, gp, _) = path_min_gap(&plain, cfg.grid_points, cfg.refine, Execution::Sequential)?;
        let (se, ge, _) = path_min_gap(&perturbed, cfg.grid_points, cfg.refine, Execution::Sequential)?;
        Ok::<_, Error>(SatGapRow {
            instance_id: id,
            draws,
            min_gap_plain: gp,
            min_gap_perturbed: ge,
            argmin_plain: sp,
            argmin_perturbed: se,
        })
    })?;
    let col = |f: fn(&SatGapRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let summary = SatGapSummary {
        plain: Quantiles::of(&col(|r| r.min_gap_plain)).expect("nonempty"),
        perturbed: Quantiles::of(&col(|r| r.min_gap_perturbed)).expect("nonempty"),
        ratio: Quantiles::of(&col(SatGapRow::ratio)).expect("nonempty"),
        improved: rows.iter().filter(|r| r.min_gap_perturbed > r.min_gap_plain).count(),
    };
    Ok(SatGapStudy { config: *cfg, rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SatGapStudyConfig {
        SatGapStudyConfig {
            n: 6,
            clauses: 18,
            instances: 3,
            grid_points: 21,
            refine: Some(1e-4),
            ..Default::default()
        }
    }

    #[test]
    fn quantiles_interpolate() {
        let q = Quantiles::of(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!((q.min, q.q25, q.median, q.q75, q.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert_eq!(Quantiles::of(&[1.0, 2.0]).unwrap().median, 1.5);
        assert!(Quantiles::of(&[]).is_none());
    }

    #[test]
    fn drawn_instances_are_uniquely_satisfiable() {
        let cfg = small();
        for id in 0..3 {
            let (inst, pert, _) = draw_study_instance(&cfg, id).unwrap();
            let bf = min_cost_bruteforce(&inst).unwrap();
            assert_eq!((bf.min, bf.argmin_indices.len()), (0, 1));
            assert_eq!(pert.unwrap().len(), 18);
        }
    }

    #[test]
    fn study_is_deterministic_and_refined() {
        let cfg = small();
        let a = sat_gap_study(&cfg, Execution::Parallel).unwrap();
        let b = sat_gap_study(&cfg, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        let coarse = SatGapStudyConfig { refine: None, ..cfg };
        let c = sat_gap_study(&coarse, Execution::Parallel).unwrap();
        for (r, rc) in a.rows.iter().zip(&c.rows) {
            assert!(r.min_gap_plain <= rc.min_gap_plain);
            assert!(r.min_gap_perturbed <= rc.min_gap_perturbed);
            assert!(r.min_gap_plain > 0.0);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let none = SatGapStudyConfig { proposal: Proposal::None, ..small() };
        assert!(sat_gap_study(&none, Execution::Sequential).is_err());
        let zero = SatGapStudyConfig { instances: 0, ..small() };
        assert!(sat_gap_study(&zero, Execution::Sequential).is_err());
    }
}
