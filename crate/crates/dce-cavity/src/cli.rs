//! Run orchestration: the operations behind the binary's subcommands,
//! parameter sweeps, and bit-stable CSV output.
//!
//! Every table is deterministic for a fixed config — identical bytes across
//! repeated runs and across `--jobs` settings. Floats are emitted with 17
//! significant digits so the CSV round-trips `f64` exactly.

use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::evolve::{self, EvolveError};
use crate::losses::{loss_report, LossReport};
use crate::modes::ModeError;
use crate::spectrum::{self, SpectrumError};
use crate::transverse::Polarization;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 1 for config/usage/i-o problems, 2 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Usage(_) => 1,
            CliError::Spectrum(_) | CliError::Evolve(_) | CliError::Mode(_) => 2,
        }
    }
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    F(f64),
    I(i64),
    S(String),
}

impl Value {
    fn write(&self, w: &mut impl Write) -> io::Result<()> {
        match self {
            // 17 significant digits: lossless f64 round-trip.
            Value::F(x) => {
                if x.is_nan() {
                    write!(w, "NaN")
                } else {
                    write!(w, "{x:.16e}")
                }
            }
            Value::I(i) => write!(w, "{i}"),
            Value::S(s) => write!(w, "{s}"),
        }
    }
}

/// An in-memory CSV table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Write the table as CSV: header row, then data rows, `\n` terminated.
pub fn emit(table: &Table, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "{}", table.header.join(","))?;
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                write!(w, ",")?;
            }
            cell.write(w)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn emit_to_string(table: &Table) -> String {
    let mut buf = Vec::new();
    emit(table, &mut buf).expect("in-memory write cannot fail");
    String::from_utf8(buf).expect("tables are ASCII")
}

pub fn emit_to_path(table: &Table, path: &std::path::Path) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    emit(table, &mut file)?;
    file.flush()
}

/// `dump-profile`: the plasma-strength waveform over the whole train.
pub fn dump_profile_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let units = cfg.units();
    let profile = cfg.profile().map_err(|e| config_domain("pulse", e))?;
    let mut table = Table::new(vec!["t_ps", "V_times_Lz"]);
    let per = cfg.spectrum_samples_per_period;
    let n = per * cfg.n_pulses as usize + 1;
    let dt = profile.period() / per as f64;
    for i in 0..n {
        let t = profile.t_start() + i as f64 * dt;
        table.push(vec![Value::F(units.natural_to_ps(t)), Value::F(profile.eval(t))]);
    }
    Ok(table)
}

/// `spectrum`: longitudinal wavenumbers and frequencies over the train.
pub fn spectrum_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let units = cfg.units();
    let cavity = cfg.cavity()?;
    let profile = cfg.profile().map_err(|e| config_domain("pulse", e))?;
    let traj = spectrum::trajectory(&profile, &cavity, cfg.spectrum_samples_per_period)?;
    let mut table = Table::new(vec!["t_ps", "p", "k_times_Lz", "omega_GHz"]);
    for (ti, &t) in traj.times.iter().enumerate() {
        for (bi, &p) in traj.branch_p.iter().enumerate() {
            table.push(vec![
                Value::F(units.natural_to_ps(t)),
                Value::I(p as i64),
                Value::F(traj.k[bi][ti] * cavity.l_z),
                Value::F(units.omega_to_ghz(traj.omega[bi][ti])),
            ]);
        }
    }
    Ok(table)
}

/// `coupling`: the full matrix `M(t)` at the output cadence.
pub fn coupling_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let units = cfg.units();
    let cavity = cfg.cavity()?;
    let profile = cfg.profile().map_err(|e| config_domain("pulse", e))?;
    let mut assembler = evolve::Assembler::new(&cavity, &profile)?;
    let mut table = Table::new(vec!["t_ps", "m", "n", "M_value_per_ps"]);
    let per = cfg.samples_per_period;
    let n_samples = per * cfg.n_pulses as usize + 1;
    let dt = profile.period() / per as f64;
    let branches = cavity.branches();
    for i in 0..n_samples {
        let t = profile.t_start() + i as f64 * dt;
        let sys = assembler.system_at(t)?;
        for (mi, &pm) in branches.iter().enumerate() {
            for (ni, &pn) in branches.iter().enumerate() {
                table.push(vec![
                    Value::F(units.natural_to_ps(t)),
                    Value::I(pm as i64),
                    Value::I(pn as i64),
                    Value::F(units.rate_to_per_ps(sys.m.get(mi, ni))),
                ]);
            }
        }
    }
    Ok(table)
}

/// `evolve`: per-mode photon numbers and unitarity defect over the run.
pub fn evolve_table(cfg: &RunConfig, field_free_only: bool) -> Result<Table, CliError> {
    let units = cfg.units();
    let cavity = cfg.cavity()?;
    let profile = cfg.profile().map_err(|e| config_domain("pulse", e))?;
    let samples = evolve::run(&cavity, &profile, &cfg.run_options())?;
    let branches = cavity.branches();
    let mut table = Table::new(vec!["t_ps", "mode_p", "N", "defect"]);
    for s in &samples {
        if field_free_only && !s.field_free {
            continue;
        }
        for (bi, &p) in branches.iter().enumerate() {
            table.push(vec![
                Value::F(units.natural_to_ps(s.t)),
                Value::I(p as i64),
                Value::F(s.result.n[bi]),
                Value::F(s.result.unitarity_defect[bi]),
            ]);
        }
    }
    Ok(table)
}

/// Final-time summary of one evolve run, used by the sweep drivers.
struct SweepOutcome {
    n_final: Vec<f64>,
    defect_max: f64,
    error: Option<String>,
}

fn run_once(cfg: &RunConfig) -> SweepOutcome {
    let fail = |msg: String, n: usize| SweepOutcome {
        n_final: vec![f64::NAN; n],
        defect_max: f64::NAN,
        error: Some(msg),
    };
    let cavity = match cfg.cavity() {
        Ok(c) => c,
        Err(e) => return fail(e.to_string(), cfg.ell_max + 1),
    };
    let n_branches = cavity.n_branches();
    let profile = match cfg.profile() {
        Ok(p) => p,
        Err(e) => return fail(e.to_string(), n_branches),
    };
    match evolve::run(&cavity, &profile, &cfg.run_options()) {
        Ok(samples) => {
            let last = samples.last().expect("run yields at least the initial sample");
            let defect_max = samples
                .iter()
                .flat_map(|s| s.result.unitarity_defect.iter().cloned())
                .fold(0.0, f64::max);
            SweepOutcome { n_final: last.result.n.clone(), defect_max, error: None }
        }
        Err(e) => fail(e.to_string(), n_branches),
    }
}

fn sweep_header(cfg: &RunConfig, key: &str) -> Vec<String> {
    let mut header = vec![key.to_string(), "status".to_string(), "defect_max".to_string()];
    let first = match cfg.polarization {
        Polarization::Te => 1,
        Polarization::Tm => 0,
    };
    for p in first..=cfg.ell_max {
        header.push(format!("N_p{p}"));
    }
    header
}

fn outcome_cells(outcome: &SweepOutcome) -> Vec<Value> {
    let mut cells = Vec::with_capacity(outcome.n_final.len() + 2);
    cells.push(Value::S(outcome.error.clone().unwrap_or_else(|| "ok".to_string())));
    cells.push(Value::F(outcome.defect_max));
    cells.extend(outcome.n_final.iter().map(|&n| Value::F(n)));
    cells
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
            .install(work)
    }
}

/// `sweep-tuning`: one evolve run per driving period, rows sorted by period.
/// Failed points become explicit error rows, never gaps.
pub fn sweep_tuning(cfg: &RunConfig, periods_ps: &[f64], jobs: usize) -> Table {
    let mut periods = periods_ps.to_vec();
    periods.sort_by(f64::total_cmp);
    let mut table = Table::new(sweep_header(cfg, "T_ps"));
    let outcomes: Vec<SweepOutcome> = with_pool(jobs, || {
        periods
            .par_iter()
            .map(|&t_ps| {
                let mut point = cfg.clone();
                point.period_ps = t_ps;
                run_once(&point)
            })
            .collect()
    });
    for (t_ps, outcome) in periods.iter().zip(&outcomes) {
        let mut row = vec![Value::F(*t_ps)];
        row.extend(outcome_cells(outcome));
        table.push(row);
    }
    table
}

/// `sweep-position`: one evolve run per sheet position, with optional
/// per-position driving-period overrides; rows sorted by eta.
pub fn sweep_position(
    cfg: &RunConfig,
    etas: &[f64],
    overrides: &[(f64, f64)],
    jobs: usize,
) -> Table {
    let mut etas = etas.to_vec();
    etas.sort_by(f64::total_cmp);
    let mut header = sweep_header(cfg, "eta");
    header.insert(1, "T_ps".to_string());
    let mut table = Table::new(header);
    let outcomes: Vec<(f64, SweepOutcome)> = with_pool(jobs, || {
        etas.par_iter()
            .map(|&eta| {
                let mut point = cfg.clone();
                point.eta = eta;
                if let Some(&(_, t)) =
                    overrides.iter().find(|(e, _)| (e - eta).abs() <= 1e-9)
                {
                    point.period_ps = t;
                }
                (point.period_ps, run_once(&point))
            })
            .collect()
    });
    for (eta, (t_ps, outcome)) in etas.iter().zip(&outcomes) {
        let mut row = vec![Value::F(*eta), Value::F(*t_ps)];
        row.extend(outcome_cells(outcome));
        table.push(row);
    }
    table
}

/// `losses`: Drude polarization diagnostics for the dominant mode.
pub fn losses_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let params = cfg.drude().map_err(|reason| ConfigError::Domain {
        field: "losses".to_string(),
        reason,
    })?;
    let omega0 = cfg.omega0_rad_per_s()?;
    let report = loss_report(&params, omega0, cfg.polarization);
    Ok(loss_table_from_report(&report))
}

fn loss_table_from_report(report: &LossReport) -> Table {
    let mut table = Table::new(vec![
        "omega0_GHz",
        "tau_ps",
        "delta_d_um",
        "re_P",
        "im_P",
        "ratio",
    ]);
    table.push(vec![
        // Angular frequency in 1e9 rad/s, matching the loss-analysis
        // convention for quoting omega0.
        Value::F(report.omega0 / 1e9),
        Value::F(report.tau * 1e12),
        Value::F(report.delta_d * 1e6),
        Value::F(report.p_over_e.re),
        Value::F(report.p_over_e.im),
        Value::F(report.im_re_ratio),
    ]);
    table
}

fn config_domain(field: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Config(ConfigError::Domain { field: field.to_string(), reason: err.to_string() })
}
