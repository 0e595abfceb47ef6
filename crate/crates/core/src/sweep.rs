//! Scenario presets, parameter sweeps and CSV export.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::{parse_bool, ConfigFile};
use crate::error::{Error, Result};
use crate::geometry::GeometryParameters;
use crate::integrator::{integrate, IntegratorConfig, Trajectory};
use crate::model::{observables, ModelParameters, Observables, RateConstants, Species, StateVector};
use crate::steady::{solve_steady, SolverPath, SolverPreference, SteadyStateResult};

/// Rate-constant presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// The published rate table.
    Full,
    /// Reduced on-surface dimerization: `a_s = 0.0021`, `b = 0.0001`.
    Reduced,
}

impl Scenario {
    pub const ALL: [Scenario; 2] = [Scenario::Full, Scenario::Reduced];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Full => "full",
            Scenario::Reduced => "reduced",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::Full => "published rate table",
            Scenario::Reduced => "reduced on-surface dimerization (a_s = 0.0021, b = 0.0001)",
        }
    }

    pub fn rates(self) -> RateConstants<f64> {
        let full = RateConstants::reference();
        match self {
            Scenario::Full => full,
            Scenario::Reduced => RateConstants {
                a_s: 0.0021,
                b: 0.0001,
                ..full
            },
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(Scenario::Full),
            "reduced" => Ok(Scenario::Reduced),
            other => Err(Error::Config(format!("unknown scenario `{other}`"))),
        }
    }
}

/// Swept axis for the range presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Alpha,
    F,
    V0,
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alpha" => Ok(Axis::Alpha),
            "f" => Ok(Axis::F),
            "v0" => Ok(Axis::V0),
            other => Err(Error::Config(format!("unknown sweep axis `{other}`"))),
        }
    }
}

pub const DEFAULT_ALPHA: f64 = 5.0;
pub const DEFAULT_F: f64 = 0.1;
pub const DEFAULT_V0: f64 = 0.1;
pub const DEFAULT_BETAS: [f64; 3] = [0.5, 0.25, 0.0];
pub const DEFAULT_POINTS: usize = 25;
pub const ALPHA_RANGE: (f64, f64) = (1.0, 10.0);
pub const F_RANGE: (f64, f64) = (0.05, 0.3);
pub const V0_RANGE: (f64, f64) = (0.01, 5.0);

/// `n` evenly spaced values on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` log-spaced values on `[lo, hi]`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect();
    // Pin the ends exactly.
    if let Some(x) = v.first_mut() {
        *x = lo;
    }
    if n > 1 {
        v[n - 1] = hi;
    }
    v
}

/// Grid of a sweep; every combination of the axis values is solved.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub scenarios: Vec<Scenario>,
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
    pub v0: Vec<f64>,
    pub beta: Vec<f64>,
    pub r_total: f64,
    pub gamma_out: f64,
    pub a_cell_um2: f64,
    pub solver: SolverPreference,
    /// Solve each point on the other path too and record the deviation.
    pub verify: bool,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    /// Default fixed point, full scenario, all three mobilities.
    fn default() -> Self {
        let g = GeometryParameters::<f64>::reference();
        Self {
            scenarios: vec![Scenario::Full],
            alpha: vec![DEFAULT_ALPHA],
            f: vec![DEFAULT_F],
            v0: vec![DEFAULT_V0],
            beta: DEFAULT_BETAS.to_vec(),
            r_total: 6.6,
            gamma_out: g.gamma_out,
            a_cell_um2: g.a_cell_um2,
            solver: SolverPreference::Auto,
            verify: false,
            jobs: None,
        }
    }
}

/// Keys understood by [`SweepConfig::apply_config`].
pub const SWEEP_KEYS: &[&str] = &[
    "scenario", "alpha", "f", "v0", "beta", "rtotal", "gamma_out", "acell_um2", "solver",
    "verify", "jobs", "sweep", "points",
];

impl SweepConfig {
    /// Sweeps `axis` over its default range with `points` values.
    pub fn along(axis: Axis, points: usize) -> Self {
        let mut cfg = Self::default();
        cfg.set_axis(axis, points);
        cfg
    }

    pub fn set_axis(&mut self, axis: Axis, points: usize) {
        match axis {
            Axis::Alpha => self.alpha = linspace(ALPHA_RANGE.0, ALPHA_RANGE.1, points),
            Axis::F => self.f = linspace(F_RANGE.0, F_RANGE.1, points),
            Axis::V0 => self.v0 = logspace(V0_RANGE.0, V0_RANGE.1, points),
        }
    }

    /// Overrides fields present in `file`. A `sweep = axis` entry fills that
    /// axis with its default range (`points` values) before explicit lists
    /// are applied.
    pub fn apply_config(&mut self, file: &ConfigFile) -> Result<()> {
        if let Some(axis) = file.get::<Axis>("sweep")? {
            let points = file.get::<usize>("points")?.unwrap_or(DEFAULT_POINTS);
            self.set_axis(axis, points);
        }
        if let Some(v) = file.get_list::<Scenario>("scenario")? {
            self.scenarios = v;
        }
        if let Some(v) = file.get_list("alpha")? {
            self.alpha = v;
        }
        if let Some(v) = file.get_list("f")? {
            self.f = v;
        }
        if let Some(v) = file.get_list("v0")? {
            self.v0 = v;
        }
        if let Some(v) = file.get_list("beta")? {
            self.beta = v;
        }
        if let Some(v) = file.get("rtotal")? {
            self.r_total = v;
        }
        if let Some(v) = file.get("gamma_out")? {
            self.gamma_out = v;
        }
        if let Some(v) = file.get("acell_um2")? {
            self.a_cell_um2 = v;
        }
        if let Some(v) = file.get::<SolverPreference>("solver")? {
            self.solver = v;
        }
        if let Some(v) = file.raw("verify") {
            self.verify =
                parse_bool(v).ok_or_else(|| Error::Config(format!("invalid value `{v}` for `verify`")))?;
        }
        if let Some(v) = file.get::<usize>("jobs")? {
            self.jobs = Some(v);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let axes: [(&str, usize); 5] = [
            ("scenario", self.scenarios.len()),
            ("alpha", self.alpha.len()),
            ("f", self.f.len()),
            ("v0", self.v0.len()),
            ("beta", self.beta.len()),
        ];
        if let Some((name, _)) = axes.iter().find(|(_, n)| *n == 0) {
            return Err(Error::Config(format!("axis `{name}` is empty")));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be >= 1".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.scenarios.len() * self.beta.len() * self.alpha.len() * self.f.len() * self.v0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in output order: scenario, beta, alpha, f, V0 (outermost
    /// first), each axis in the order given.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::with_capacity(self.len());
        for &scenario in &self.scenarios {
            for &beta in &self.beta {
                for &alpha in &self.alpha {
                    for &f in &self.f {
                        for &v0 in &self.v0 {
                            out.push(SweepPoint {
                                scenario,
                                alpha,
                                f,
                                v0,
                                beta,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn params_at(&self, pt: &SweepPoint) -> Result<ModelParameters<f64>> {
        point_params(pt, self.r_total, self.gamma_out, self.a_cell_um2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub scenario: Scenario,
    pub alpha: f64,
    pub f: f64,
    pub v0: f64,
    pub beta: f64,
}

/// Model parameters for a scenario and geometry point.
pub fn point_params(
    pt: &SweepPoint,
    r_total: f64,
    gamma_out: f64,
    a_cell_um2: f64,
) -> Result<ModelParameters<f64>> {
    let geometry = GeometryParameters {
        a_cell_um2,
        r_cell_um: None,
        gamma_out,
        f: pt.f,
        alpha: pt.alpha,
        beta: pt.beta,
    };
    ModelParameters::new(pt.scenario.rates(), geometry, pt.v0, r_total)
}

/// One output record of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    /// `None` when the parameters were rejected.
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub steady: Option<SteadyStateResult<f64>>,
    /// Relative L-inf distance to the other solver path, if verified.
    pub verify_rel_dev: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn observables(&self) -> Option<Observables<f64>> {
        self.steady.as_ref().map(|s| observables(&s.state))
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Largest verification deviation tolerated without flagging the row.
pub const VERIFY_TOL: f64 = 1e-8;

fn solve_point(cfg: &SweepConfig, pt: &SweepPoint) -> SweepRow {
    let mut row = SweepRow {
        point: *pt,
        k1: None,
        k2: None,
        steady: None,
        verify_rel_dev: None,
        error: None,
    };
    let params = match cfg.params_at(pt) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.k1 = Some(params.k1());
    row.k2 = Some(params.k2());
    match solve_steady(&params, cfg.solver) {
        Ok(res) => {
            if cfg.verify {
                let other = match res.path {
                    SolverPath::Semianalytic => SolverPreference::Numeric,
                    SolverPath::Numeric => SolverPreference::Semianalytic,
                };
                match solve_steady(&params, other) {
                    Ok(twin) => {
                        let dev = res.state.rel_inf_distance(&twin.state);
                        row.verify_rel_dev = Some(dev);
                        if !(dev <= VERIFY_TOL) {
                            row.error = Some(format!("verification deviation {dev:e} exceeds {VERIFY_TOL:e}"));
                        }
                    }
                    Err(e) if res.path == SolverPath::Semianalytic => {
                        row.error = Some(format!("verification failed: {e}"));
                    }
                    // The semianalytic twin of a numeric row is optional.
                    Err(_) => {}
                }
            }
            row.steady = Some(res);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Solves every grid point. Rows come back in [`SweepConfig::points`] order
/// whatever the completion order; failures are recorded per row.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let points = cfg.points();
    let work = || -> Vec<SweepRow> { points.par_iter().map(|pt| solve_point(cfg, pt)).collect() };
    match cfg.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Fixed-width float rendering with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// Header of the sweep CSV.
pub fn sweep_header() -> Vec<String> {
    let mut h: Vec<String> = ["scenario", "alpha", "f", "V0", "beta", "k1", "k2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(Species::ALL.iter().map(|s| s.name().to_string()));
    h.extend(
        [
            "signal_hd",
            "signal_ld",
            "signal_total",
            "receptors_hd",
            "receptors_ld",
            "residual_inf_norm",
            "root_count",
            "path",
            "verify_rel_dev",
            "error",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    h
}

pub fn sweep_record(row: &SweepRow) -> Vec<String> {
    let pt = &row.point;
    let mut r = vec![
        pt.scenario.name().to_string(),
        fmt_float(pt.alpha),
        fmt_float(pt.f),
        fmt_float(pt.v0),
        fmt_float(pt.beta),
        opt_float(row.k1),
        opt_float(row.k2),
    ];
    match &row.steady {
        Some(s) => {
            let o = observables(&s.state);
            r.extend(s.state.0.iter().map(|v| fmt_float(*v)));
            r.extend(
                [o.signal_hd, o.signal_ld, o.signal_total, o.receptors_hd, o.receptors_ld, s.residual_inf_norm]
                    .into_iter()
                    .map(fmt_float),
            );
            r.push(s.root_count.to_string());
            r.push(s.path.to_string());
        }
        None => r.extend(std::iter::repeat(String::new()).take(12 + 6 + 2)),
    }
    r.push(opt_float(row.verify_rel_dev));
    r.push(row.error.clone().unwrap_or_default());
    r
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(sweep_header())?;
    for row in rows {
        out.write_record(sweep_record(row))?;
    }
    out.flush()
}

/// Initial condition of a time course.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum InitialState {
    /// All receptors as monomers split `f : 1 - f`.
    #[default]
    PartitionedMonomers,
    Explicit(StateVector<f64>),
}

impl InitialState {
    pub fn resolve(&self, params: &ModelParameters<f64>) -> StateVector<f64> {
        match self {
            InitialState::PartitionedMonomers => {
                StateVector::partitioned_monomers(params.r_total(), params.f())
            }
            InitialState::Explicit(x) => *x,
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;
    /// `monomers` or 12 comma-separated concentrations.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("monomers") || t.eq_ignore_ascii_case("partitioned") {
            return Ok(InitialState::PartitionedMonomers);
        }
        let v: Vec<f64> = crate::config::parse_list("x0", t)?;
        let arr: [f64; 12] = v
            .try_into()
            .map_err(|v: Vec<f64>| Error::Config(format!("x0 needs 12 values, got {}", v.len())))?;
        Ok(InitialState::Explicit(StateVector(arr)))
    }
}

/// Integrates from `x0` over `[0, t_end]` with `samples` output points.
pub fn run_timecourse(
    params: &ModelParameters<f64>,
    x0: &InitialState,
    t_end: f64,
    samples: usize,
) -> Result<Trajectory<f64>> {
    integrate(
        &x0.resolve(params),
        params,
        (0.0, t_end),
        samples,
        &IntegratorConfig::default(),
    )
}

pub fn timecourse_header() -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend(Species::ALL.iter().map(|s| s.name().to_string()));
    h.extend(
        ["signal_hd", "signal_ld", "signal_total", "receptors_hd", "receptors_ld", "receptors_total"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

pub fn write_timecourse_csv<W: Write>(w: W, traj: &Trajectory<f64>) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(timecourse_header())?;
    for pt in &traj.points {
        let o = observables(&pt.state);
        let mut rec = vec![fmt_float(pt.t)];
        rec.extend(pt.state.0.iter().map(|v| fmt_float(*v)));
        rec.extend(
            [o.signal_hd, o.signal_ld, o.signal_total, o.receptors_hd, o.receptors_ld, o.receptors_total]
                .into_iter()
                .map(fmt_float),
        );
        out.write_record(rec)?;
    }
    out.flush()
}
