use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::potential::ve_from_matrix;
use super::track::{classify, track_minimum, Outcome, TrackConfig};
use crate::error::{Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::operators::{random_clause_matrix, EntryDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: usize,
    pub seed: u64,
    pub dist: EntryDistribution,
    pub track: TrackConfig,
}

impl McConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            dist: EntryDistribution::default(),
            track: TrackConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McResult {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub indeterminate: usize,
    pub seed: u64,
    pub dist: EntryDistribution,
    pub outcomes: Vec<Outcome>,
}

impl McResult {
    pub fn fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// RNG for one trial: stream `trial` of the ChaCha generator keyed by `seed`,
/// so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Per trial: draw a zero-diagonal 8x8 matrix, build its potential, track the
/// minimum from the equator and classify the endpoint.
pub fn mc_experiment(cfg: &McConfig, exec: Execution) -> Result<McResult> {
    if cfg.trials == 0 {
        return Err(Error::input("at least one trial is required"));
    }
    let outcomes = try_map_indexed(cfg.trials, exec, |t| {
        let mut rng = trial_rng(cfg.seed, t as u64);
        let a = random_clause_matrix(3, cfg.dist, &mut rng);
        let pot = ve_from_matrix(&a)?;
        Ok::<_, Error>(classify(&track_minimum(&pot, &cfg.track)))
    })?;
    let count = |o: Outcome| outcomes.iter().filter(|&&x| x == o).count();
    Ok(McResult {
        trials: cfg.trials,
        successes: count(Outcome::Success),
        failures: count(Outcome::Failure),
        indeterminate: count(Outcome::Indeterminate),
        seed: cfg.seed,
        dist: cfg.dist,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::EntryKind;

    #[test]
    fn deterministic_under_seed() {
        let cfg = McConfig::new(10, 42);
        let a = mc_experiment(&cfg, Execution::Parallel).unwrap();
        let b = mc_experiment(&cfg, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.successes + a.failures + a.indeterminate, 10);
    }

    #[test]
    fn zero_width_always_fails() {
        let mut cfg = McConfig::new(5, 1);
        cfg.dist = EntryDistribution { kind: EntryKind::RealSymmetric, half_width: 0.0 };
        let r = mc_experiment(&cfg, Execution::Parallel).unwrap();
        assert_eq!(r.successes, 0);
        assert_eq!(r.failures, 5);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(mc_experiment(&McConfig::new(0, 1), Execution::Sequential).is_err());
    }
}
