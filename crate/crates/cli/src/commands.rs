use adiabatic_paths::collective::{CollectivePath, Scaling};
use adiabatic_paths::dynamics::{evolve, EvolutionSpec, PathOperator};
use adiabatic_paths::effpot::{
    classify, figure_curves, mc_experiment, track_minimum, trial_rng, ve_from_matrix, EffectivePotential, McConfig,
    FIGURE_S_VALUES,
};
use adiabatic_paths::instances::{min_cost_bruteforce, parse_instance, random_3sat, build_symmetric_instance, Assignment, Instance};
use adiabatic_paths::operators::{
    parse_matrix, random_clause_matrix, sample_perturbation, PathHamiltonian, PerturbationConfig,
};
use adiabatic_paths::spectra::{gap_of, gap_of_with_tol, gap_scan_with, min_gap_refine, uniform_grid, GapProfile};
use adiabatic_paths::study::sat_gap_study;
use adiabatic_paths::Execution;
use serde_json::json;

use crate::config::{Mode, RunConfig, Source, Space};
use crate::output::{Report, Table};
use crate::CliError;

/// Largest step count `evolve` will attempt.
pub const MAX_EVOLVE_STEPS: usize = 2_000_000;

/// RNG stream reserved for drawing random instances.
const INSTANCE_STREAM: u64 = 1 << 32;

pub fn load_instance(cfg: &RunConfig) -> Result<Instance, CliError> {
    let ic = &cfg.instance;
    let inst = match ic.source {
        Source::Symmetric => build_symmetric_instance(ic.n)?,
        Source::Random3sat => random_3sat(ic.n, ic.clauses, &mut trial_rng(cfg.seed, INSTANCE_STREAM))?,
        Source::File => {
            let path = ic.path.as_ref().ok_or_else(|| CliError::Config("instance.path is required for source = file".into()))?;
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            parse_instance(&text)?
        }
    };
    Ok(inst)
}

fn full_path(cfg: &RunConfig) -> Result<PathHamiltonian, CliError> {
    let inst = load_instance(cfg)?;
    let pc = PerturbationConfig { proposal: cfg.perturbation.proposal, dist: cfg.perturbation.dist(), seed: cfg.seed };
    let pert = sample_perturbation(&inst, &pc)?;
    Ok(PathHamiltonian::new(&inst, pert.as_ref())?)
}

fn path_operator(cfg: &RunConfig) -> Result<Box<dyn PathOperator>, CliError> {
    Ok(match cfg.scan.space {
        Space::Full => Box::new(full_path(cfg)?),
        Space::Collective => Box::new(CollectivePath::new(cfg.instance.n, cfg.scan.include_he, Scaling::Cubic)?),
    })
}

fn scan(op: &dyn PathOperator, cfg: &RunConfig) -> Result<(GapProfile, f64, f64), CliError> {
    if cfg.scan.points < 2 {
        return Err(CliError::Config("scan.points must be at least 2".into()));
    }
    // the collective spectrum is simple below s = 1, so no level is skipped
    let deg = match cfg.scan.space {
        Space::Full => None,
        Space::Collective => Some(0.0),
    };
    let gap = |s: f64| -> adiabatic_paths::Result<f64> {
        let h = op.matrix_at(s)?;
        Ok(match deg {
            Some(t) => gap_of_with_tol(&h, t)?.2,
            None => gap_of(&h)?.2,
        })
    };
    let profile = gap_scan_with(|s| op.matrix_at(s), &uniform_grid(cfg.scan.points), Execution::Parallel, deg)?;
    let (s, g) = match cfg.scan.refine {
        Some(tol) => min_gap_refine(gap, &profile, tol)?,
        None => (profile.argmin_s, profile.min_gap),
    };
    Ok((profile, s, g))
}

pub fn gap_scan_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let op = path_operator(cfg)?;
    let (profile, s, g) = scan(op.as_ref(), cfg)?;
    let mut t = Table::new(&["s", "E0", "E1", "gap"]);
    for k in 0..profile.s_grid.len() {
        t.push(vec![profile.s_grid[k].into(), profile.e0[k].into(), profile.e1[k].into(), profile.gaps[k].into()]);
    }
    Ok(Report::new("gap_scan", Some(t), json!({ "min_gap": g, "argmin_s": s, "dim": op.dim() })))
}

pub fn evolve_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let ec = &cfg.evolution;
    let op = path_operator(cfg)?;
    let mut min_gap = None;
    let times = match ec.time_factor {
        Some(c) => {
            let (_, _, g) = scan(op.as_ref(), cfg)?;
            min_gap = Some(g);
            if g <= 0.0 {
                return Err(CliError::Core(adiabatic_paths::Error::Numerical("minimum gap is zero".into())));
            }
            vec![c / (g * g)]
        }
        None => ec.times.clone(),
    };
    if times.is_empty() {
        return Err(CliError::Config("evolution.times is empty".into()));
    }
    let mut t = Table::new(&["T", "steps", "success_probability", "norm_drift", "ground_rank"]);
    let mut rows = Vec::new();
    for &time in &times {
        let mut steps = ec.steps.max(1);
        if let Some(dt) = ec.max_dt {
            if dt > 0.0 && time.is_finite() {
                let need = (time / dt).ceil();
                if need > MAX_EVOLVE_STEPS as f64 {
                    return Err(CliError::Core(adiabatic_paths::Error::Capacity {
                        what: "evolution steps",
                        got: need.min(usize::MAX as f64) as usize,
                        limit: MAX_EVOLVE_STEPS,
                    }));
                }
                steps = steps.max(need as usize);
            }
        }
        if steps > MAX_EVOLVE_STEPS {
            return Err(CliError::Core(adiabatic_paths::Error::Capacity {
                what: "evolution steps",
                got: steps,
                limit: MAX_EVOLVE_STEPS,
            }));
        }
        let mut spec = EvolutionSpec::new(time, steps);
        spec.method = ec.method;
        spec.norm_tol = ec.norm_tol;
        let r = evolve(op.as_ref(), &spec)?;
        t.push(vec![time.into(), steps.into(), r.success_probability.into(), r.norm_drift.into(), r.ground_rank.into()]);
        rows.push(json!({ "T": time, "success_probability": r.success_probability, "norm_drift": r.norm_drift }));
    }
    Ok(Report::new("evolve", Some(t), json!({ "min_gap": min_gap, "runs": rows })))
}

fn potential(cfg: &RunConfig) -> Result<(EffectivePotential, &'static str), CliError> {
    let ec = &cfg.effpot;
    if ec.no_he {
        return Ok((EffectivePotential::none(), "none"));
    }
    match &ec.matrix_file {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            Ok((ve_from_matrix(&parse_matrix(&text)?)?, "file"))
        }
        None => {
            // same draw as Monte Carlo trial 0
            let a = random_clause_matrix(3, cfg.perturbation.dist(), &mut trial_rng(cfg.seed, 0));
            Ok((ve_from_matrix(&a)?, "random"))
        }
    }
}

pub fn effpot_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let ec = &cfg.effpot;
    match ec.mode {
        Mode::Figure => {
            let (pot, src) = potential(cfg)?;
            let mut t = Table::new(&["s", "theta", "v_phi0", "v_phi_pi"]);
            for r in figure_curves(&pot, &FIGURE_S_VALUES, ec.theta_points) {
                t.push(vec![r.s.into(), r.theta.into(), r.v_phi0.into(), r.v_phi_pi.into()]);
            }
            Ok(Report::new("effpot_figure", Some(t), json!({ "matrix": src, "s_values": FIGURE_S_VALUES })))
        }
        Mode::Track => {
            let (pot, src) = potential(cfg)?;
            if !(ec.ds > 0.0 && ec.ds <= 1.0 && ec.tol > 0.0) {
                return Err(CliError::Config("effpot.ds must be in (0, 1] and effpot.tol positive".into()));
            }
            let tr = track_minimum(&pot, &ec.track());
            let mut t = Table::new(&["s", "theta", "phi", "V"]);
            for p in &tr.points {
                t.push(vec![p.s.into(), p.m.theta().into(), p.m.phi().into(), p.v.into()]);
            }
            let end = tr.endpoint();
            Ok(Report::new(
                "effpot_track",
                Some(t),
                json!({
                    "matrix": src,
                    "outcome": classify(&tr),
                    "end_theta": end.theta(),
                    "end_phi": end.phi(),
                    "issues": tr.issues,
                }),
            ))
        }
        Mode::Mc => {
            let mc = McConfig { trials: ec.trials, seed: cfg.seed, dist: cfg.perturbation.dist(), track: ec.track() };
            let r = mc_experiment(&mc, Execution::Parallel)?;
            let mut t = Table::new(&["trial", "outcome"]);
            for (k, o) in r.outcomes.iter().enumerate() {
                t.push(vec![k.into(), serde_json::to_value(o).unwrap().as_str().unwrap().into()]);
            }
            Ok(Report::new(
                "effpot_mc",
                Some(t),
                json!({
                    "trials": r.trials,
                    "successes": r.successes,
                    "failures": r.failures,
                    "indeterminate": r.indeterminate,
                    "fraction": r.fraction(),
                    "seed": r.seed,
                    "dist": r.dist,
                }),
            ))
        }
    }
}

pub fn sat_gap_study_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut sc = cfg.study;
    sc.seed = cfg.seed;
    let st = sat_gap_study(&sc, Execution::Parallel)?;
    let mut t = Table::new(&["instance_id", "min_gap_plain", "min_gap_perturbed", "argmin_plain", "argmin_perturbed"]);
    for r in &st.rows {
        t.push(vec![
            r.instance_id.into(),
            r.min_gap_plain.into(),
            r.min_gap_perturbed.into(),
            r.argmin_plain.into(),
            r.argmin_perturbed.into(),
        ]);
    }
    Ok(Report::new("sat_gap_study", Some(t), &st.summary))
}

pub fn brute_force_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let inst = load_instance(cfg)?;
    let bf = min_cost_bruteforce(&inst)?;
    let bits = |i: u64| Assignment::from_index(bf.n, i).to_string();
    let mut t = Table::new(&["index", "assignment", "cost"]);
    for &i in &bf.argmin_indices {
        t.push(vec![i.into(), bits(i).into(), bf.min.into()]);
    }
    let argmins: Vec<String> = bf.argmin_indices.iter().map(|&i| bits(i)).collect();
    Ok(Report::new("brute_force", Some(t), json!({ "n": bf.n, "min": bf.min, "argmins": argmins })))
}
