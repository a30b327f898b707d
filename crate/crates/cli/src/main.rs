//! `adiapath`: seeded experiment runner for adiabatic paths.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use adiabatic_paths::dynamics::Method;
use adiabatic_paths::operators::{EntryKind, Proposal};
use clap::{Args, Parser, Subcommand};

use config::{Format, Mode, RunConfig, Source, Space};

#[derive(Debug)]
pub enum CliError {
    Core(adiabatic_paths::Error),
    Config(String),
    Io(String),
}

impl From<adiabatic_paths::Error> for CliError {
    fn from(e: adiabatic_paths::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use adiabatic_paths::Error as E;
        match self {
            CliError::Core(E::Capacity { .. }) => 3,
            CliError::Core(E::Numerical(_)) => 4,
            CliError::Core(_) | CliError::Config(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "adiapath", version, about = "Adiabatic path experiments: gap scans, evolution, effective potentials")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory. Without it the primary table goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct InstanceArgs {
    #[arg(long, value_enum)]
    instance: Option<Source>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    clauses: Option<usize>,
    /// Instance file (implies `--instance file`).
    #[arg(long)]
    instance_file: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct PathArgs {
    #[arg(long, value_enum)]
    space: Option<Space>,
    #[arg(long, value_parser = parse_proposal)]
    proposal: Option<Proposal>,
    #[arg(long, value_parser = parse_kind)]
    kind: Option<EntryKind>,
    #[arg(long)]
    half_width: Option<f64>,
    /// Collective sector: include the two-body extra term.
    #[arg(long)]
    include_he: bool,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    refine: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ground and first excited energies along the path.
    GapScan {
        #[command(flatten)]
        inst: InstanceArgs,
        #[command(flatten)]
        path: PathArgs,
    },
    /// Schrödinger evolution and success probability.
    Evolve {
        #[command(flatten)]
        inst: InstanceArgs,
        #[command(flatten)]
        path: PathArgs,
        /// Comma-separated run times; one output row each.
        #[arg(long, value_delimiter = ',')]
        time: Option<Vec<f64>>,
        /// Use `T = c / min_gap^2` from a gap scan.
        #[arg(long)]
        time_factor: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        max_dt: Option<f64>,
        #[arg(long, value_parser = parse_method)]
        method: Option<Method>,
        #[arg(long)]
        norm_tol: Option<f64>,
    },
    /// Large-n effective potential: figure data, tracking, Monte Carlo.
    Effpot {
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// 8x8 extra-term matrix, one row per line.
        #[arg(long)]
        matrix_file: Option<PathBuf>,
        #[arg(long)]
        no_he: bool,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        ds: Option<f64>,
        #[arg(long, value_parser = parse_kind)]
        kind: Option<EntryKind>,
        #[arg(long)]
        half_width: Option<f64>,
    },
    /// Minimum gaps of random 3-SAT instances with and without the extra term.
    SatGapStudy {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        clauses: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, value_parser = parse_proposal)]
        proposal: Option<Proposal>,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Accept any satisfiable instance, not only uniquely satisfiable ones.
        #[arg(long)]
        any_satisfiable: bool,
    },
    /// Exhaustive minimum of an instance's cost.
    BruteForce {
        #[command(flatten)]
        inst: InstanceArgs,
    },
}

fn parse_serde<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_proposal(s: &str) -> Result<Proposal, String> {
    parse_serde(&s.to_lowercase())
}

fn parse_kind(s: &str) -> Result<EntryKind, String> {
    parse_serde(s)
}

fn parse_method(s: &str) -> Result<Method, String> {
    parse_serde(s)
}

fn apply_instance(cfg: &mut RunConfig, a: &InstanceArgs) {
    if let Some(v) = a.instance {
        cfg.instance.source = v;
    }
    if let Some(p) = &a.instance_file {
        cfg.instance.source = Source::File;
        cfg.instance.path = Some(p.clone());
    }
    if let Some(v) = a.n {
        cfg.instance.n = v;
    }
    if let Some(v) = a.clauses {
        cfg.instance.clauses = v;
    }
}

fn apply_path(cfg: &mut RunConfig, a: &PathArgs) {
    if let Some(v) = a.space {
        cfg.scan.space = v;
    }
    if let Some(v) = a.proposal {
        cfg.perturbation.proposal = v;
    }
    if let Some(v) = a.kind {
        cfg.perturbation.kind = v;
    }
    if let Some(v) = a.half_width {
        cfg.perturbation.half_width = v;
    }
    if a.include_he {
        cfg.scan.include_he = true;
    }
    if let Some(v) = a.points {
        cfg.scan.points = v;
    }
    if let Some(v) = a.refine {
        cfg.scan.refine = Some(v);
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let name = match &cli.command {
        Command::GapScan { inst, path } => {
            apply_instance(&mut cfg, inst);
            apply_path(&mut cfg, path);
            "gap-scan"
        }
        Command::Evolve { inst, path, time, time_factor, steps, max_dt, method, norm_tol } => {
            apply_instance(&mut cfg, inst);
            apply_path(&mut cfg, path);
            let ec = &mut cfg.evolution;
            if let Some(t) = time {
                ec.times = t.clone();
                ec.time_factor = None;
            }
            if time_factor.is_some() {
                ec.time_factor = *time_factor;
            }
            if let Some(v) = steps {
                ec.steps = *v;
            }
            if max_dt.is_some() {
                ec.max_dt = *max_dt;
            }
            if let Some(v) = method {
                ec.method = *v;
            }
            if let Some(v) = norm_tol {
                ec.norm_tol = *v;
            }
            "evolve"
        }
        Command::Effpot { mode, matrix_file, no_he, trials, ds, kind, half_width } => {
            let ec = &mut cfg.effpot;
            if let Some(v) = mode {
                ec.mode = *v;
            }
            if matrix_file.is_some() {
                ec.matrix_file = matrix_file.clone();
            }
            if *no_he {
                ec.no_he = true;
            }
            if let Some(v) = trials {
                ec.trials = *v;
            }
            if let Some(v) = ds {
                ec.ds = *v;
            }
            if let Some(v) = kind {
                cfg.perturbation.kind = *v;
            }
            if let Some(v) = half_width {
                cfg.perturbation.half_width = *v;
            }
            "effpot"
        }
        Command::SatGapStudy { n, clauses, instances, proposal, half_width, points, any_satisfiable } => {
            let sc = &mut cfg.study;
            if let Some(v) = n {
                sc.n = *v;
            }
            if let Some(v) = clauses {
                sc.clauses = *v;
            }
            if let Some(v) = instances {
                sc.instances = *v;
            }
            if let Some(v) = proposal {
                sc.proposal = *v;
            }
            if let Some(v) = half_width {
                sc.dist.half_width = *v;
            }
            if let Some(v) = points {
                sc.grid_points = *v;
            }
            if *any_satisfiable {
                sc.unique_only = false;
            }
            sc.seed = cfg.seed;
            "sat-gap-study"
        }
        Command::BruteForce { inst } => {
            apply_instance(&mut cfg, inst);
            "brute-force"
        }
    };
    cfg.command = Some(name.to_string());
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    let report = match &cli.command {
        Command::GapScan { .. } => commands::gap_scan_cmd(&cfg)?,
        Command::Evolve { .. } => commands::evolve_cmd(&cfg)?,
        Command::Effpot { .. } => commands::effpot_cmd(&cfg)?,
        Command::SatGapStudy { .. } => commands::sat_gap_study_cmd(&cfg)?,
        Command::BruteForce { .. } => commands::brute_force_cmd(&cfg)?,
    };
    for p in output::emit(&report, &cfg)? {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("adiapath: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
