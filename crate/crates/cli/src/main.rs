use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use domainkin::config::{parse_list, ConfigFile};
use domainkin::sweep::{
    write_sweep_csv, write_timecourse_csv, Axis, InitialState, SweepConfig, SweepPoint, SWEEP_KEYS,
};
use domainkin::{run_sweep, run_timecourse, run_validation, SolverPreference};

#[derive(Parser)]
#[command(name = "domainkin", version, about = "Two-domain receptor clustering kinetics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady state at a single parameter point (one CSV row).
    Steady(Common),
    /// Steady states over a parameter grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Fill this axis with its default range: alpha, f or v0.
        #[arg(long)]
        sweep: Option<String>,
        /// Values for the axis chosen with --sweep.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Trajectory from an initial state.
    Timecourse {
        #[command(flatten)]
        common: Common,
        /// End time, s.
        #[arg(long)]
        t_end: Option<f64>,
        /// Number of output rows, including t = 0.
        #[arg(long)]
        samples: Option<usize>,
        /// `monomers` or 12 comma-separated concentrations (fmol/cm^2).
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Run the built-in invariant checks.
    Validate,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// full or reduced (comma-separated list for sweep).
    #[arg(long)]
    scenario: Option<String>,
    /// Attractiveness (list for sweep).
    #[arg(long)]
    alpha: Option<String>,
    /// HD area fraction (list for sweep).
    #[arg(long)]
    f: Option<String>,
    /// Ligand concentration, nM (list for sweep).
    #[arg(long)]
    v0: Option<String>,
    /// Dimer mobility factor (list for sweep).
    #[arg(long)]
    beta: Option<String>,
    /// Total receptors, fmol/cm^2 [default: 6.6].
    #[arg(long)]
    rtotal: Option<f64>,
    /// Boundary exit permeability, cm/s [default: 8.23e-6].
    #[arg(long)]
    gamma_out: Option<f64>,
    /// Cell area, um^2 [default: 1000].
    #[arg(long)]
    acell_um2: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key = value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// auto, semianalytic or numeric.
    #[arg(long)]
    solver: Option<String>,
    /// Also solve on the other path and report the deviation.
    #[arg(long)]
    verify: bool,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

const EXTRA_KEYS: &[&str] = &["out", "t_end", "samples", "x0"];

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let file = ConfigFile::load(path)?;
    let allowed: Vec<&str> = SWEEP_KEYS.iter().chain(EXTRA_KEYS).copied().collect();
    file.check_keys(&allowed)?;
    Ok(file)
}

/// Defaults, then the config file, then the axis preset, then flags.
fn build_config(
    common: &Common,
    file: &ConfigFile,
    single_beta: bool,
    preset: Option<(Axis, usize)>,
) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    if single_beta {
        cfg.beta = vec![0.5];
    }
    cfg.apply_config(file)?;
    if let Some((axis, n)) = preset {
        cfg.set_axis(axis, n);
    }
    let list = |key: &str, v: &Option<String>| -> Result<Option<Vec<f64>>> {
        Ok(v.as_deref().map(|s| parse_list(key, s)).transpose()?)
    };
    if let Some(s) = &common.scenario {
        cfg.scenarios = parse_list("scenario", s)?;
    }
    if let Some(v) = list("alpha", &common.alpha)? {
        cfg.alpha = v;
    }
    if let Some(v) = list("f", &common.f)? {
        cfg.f = v;
    }
    if let Some(v) = list("v0", &common.v0)? {
        cfg.v0 = v;
    }
    if let Some(v) = list("beta", &common.beta)? {
        cfg.beta = v;
    }
    if let Some(v) = common.rtotal {
        cfg.r_total = v;
    }
    if let Some(v) = common.gamma_out {
        cfg.gamma_out = v;
    }
    if let Some(v) = common.acell_um2 {
        cfg.a_cell_um2 = v;
    }
    if let Some(s) = &common.solver {
        cfg.solver = s.parse::<SolverPreference>()?;
    }
    if common.verify {
        cfg.verify = true;
    }
    if let Some(j) = common.jobs {
        cfg.jobs = Some(j);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn single_point(cfg: &SweepConfig) -> Result<SweepPoint> {
    if cfg.len() != 1 {
        bail!("expected a single parameter point, got {} combinations", cfg.len());
    }
    Ok(cfg.points()[0])
}

fn output(common: &Common, file: &ConfigFile) -> Result<Box<dyn Write>> {
    let path = common.out.clone().or_else(|| file.raw("out").map(PathBuf::from));
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(&p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report_failures(rows: &[domainkin::SweepRow]) -> bool {
    let failed: Vec<_> = rows.iter().filter(|r| !r.is_ok()).collect();
    for r in &failed {
        eprintln!("row {:?}: {}", r.point, r.error.as_deref().unwrap_or(""));
    }
    if !failed.is_empty() {
        eprintln!("{} of {} rows failed", failed.len(), rows.len());
    }
    failed.is_empty()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Steady(common) => {
            let file = load_config(common.config.as_deref())?;
            let cfg = build_config(&common, &file, true, None)?;
            single_point(&cfg)?;
            let rows = run_sweep(&cfg)?;
            write_sweep_csv(output(&common, &file)?, &rows)?;
            Ok(report_failures(&rows))
        }
        Command::Sweep { common, sweep, points } => {
            let file = load_config(common.config.as_deref())?;
            let preset = match sweep {
                Some(axis) => {
                    let n = points
                        .or(file.get("points")?)
                        .unwrap_or(domainkin::sweep::DEFAULT_POINTS);
                    Some((axis.parse::<Axis>()?, n))
                }
                None if points.is_some() => bail!("--points needs --sweep"),
                None => None,
            };
            let cfg = build_config(&common, &file, false, preset)?;
            let rows = run_sweep(&cfg)?;
            write_sweep_csv(output(&common, &file)?, &rows)?;
            Ok(report_failures(&rows))
        }
        Command::Timecourse {
            common,
            t_end,
            samples,
            x0,
        } => {
            let file = load_config(common.config.as_deref())?;
            let cfg = build_config(&common, &file, true, None)?;
            let pt = single_point(&cfg)?;
            let params = cfg.params_at(&pt)?;
            let t_end = t_end.or(file.get("t_end")?).unwrap_or(1e5);
            let samples = samples.or(file.get("samples")?).unwrap_or(101);
            let x0: InitialState = match x0.or_else(|| file.raw("x0").map(String::from)) {
                Some(s) => s.parse()?,
                None => InitialState::PartitionedMonomers,
            };
            let traj = run_timecourse(&params, &x0, t_end, samples)?;
            write_timecourse_csv(output(&common, &file)?, &traj)?;
            Ok(true)
        }
        Command::Validate => {
            let report = run_validation();
            println!("{report}");
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
