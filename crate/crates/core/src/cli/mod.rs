//! Command-line front end.
//!
//! Everything the `ncperi` binary does goes through [`run`], which takes the
//! argument list and output sinks explicitly so it can be driven from tests.
//! Exit codes: 0 success, 1 computation or verification failure, 2 invalid
//! input (bad flag, config key, value or file).

pub mod config;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{perihelion_shift, perihelion_shift_terms};
use crate::bounds::{
    default_particles, rad_per_rev_to_arcsec_per_century, run_pipeline, ObservationRecord, RoundingMode,
};
use crate::error::{Error, Result};
use crate::integrator::{integrate_orbit, measure_precession, MIN_ECCENTRICITY};
use crate::model::{kepler_state_at_perihelion, NCParams, OrbitElements};

pub use config::{apply_axis, Command, Overrides, RunConfig, SweepAxis, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "ncperi",
    version,
    about = "Perihelion precession on a noncommutative phase space"
)]
struct Cli {
    /// Run configuration (flat `key = value` file)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Physical constants overriding the shipped defaults
    #[arg(long, global = true, value_name = "PATH")]
    constants: Option<PathBuf>,
    /// Output file (JSON for shift/bounds, CSV for simulate/verify/sweep)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Rounding of the residual cap
    #[arg(long, global = true, value_parser = ["paper", "exact"])]
    rounding: Option<String>,
    /// Integrator step tolerance
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Omit the generation timestamp from JSON output
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Closed-form shift per revolution, split into θ and η terms
    Shift,
    /// Integrate the orbit and dump the trajectory
    Simulate,
    /// Compare integrated precession with the closed form over a grid
    Verify,
    /// Upper bounds on the deformation parameters from an observed residual
    Bounds {
        /// Observation record (defaults to the shipped Mercury data)
        #[arg(long, value_name = "PATH")]
        observation: Option<PathBuf>,
    },
    /// Closed-form (and optionally integrated) shift along one parameter axis
    Sweep,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                let _ = write!(stderr, "{}", err.render());
                2
            } else {
                let _ = write!(stdout, "{}", err.render());
                0
            };
            return code;
        }
    };
    let (command, observation) = match cli.command {
        Sub::Shift => (Command::Shift, None),
        Sub::Simulate => (Command::Simulate, None),
        Sub::Verify => (Command::Verify, None),
        Sub::Bounds { observation } => (Command::Bounds, observation),
        Sub::Sweep => (Command::Sweep, None),
    };
    let flags = Overrides {
        config: cli.config,
        constants: cli.constants,
        out: cli.out,
        rounding: cli
            .rounding
            .map(|r| r.parse::<RoundingMode>().expect("clap restricts the values")),
        tolerance: cli.tolerance,
        no_timestamp: cli.no_timestamp,
        observation,
    };
    let outcome = RunConfig::load(command, &flags).and_then(|cfg| execute(&cfg, stdout));
    match outcome {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            if err.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

/// Runs an already validated configuration.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    match cfg.command {
        Command::Shift => cmd_shift(cfg, stdout),
        Command::Simulate => cmd_simulate(cfg, stdout),
        Command::Verify => cmd_verify(cfg, perihelion_shift, stdout),
        Command::Bounds => cmd_bounds(cfg, stdout),
        Command::Sweep => cmd_sweep(cfg, stdout),
    }
}

fn io_err(path: &Path, err: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

fn out_err(err: std::io::Error) -> Error {
    io_err(Path::new("<stdout>"), err)
}

fn unix_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix_s: Option<u64>,
}

fn write_json<T: Serialize>(cfg: &RunConfig, path: &Path, body: &T) -> Result<()> {
    let stamped = Stamped {
        body,
        generated_unix_s: cfg.timestamp.then(unix_seconds),
    };
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, &stamped).map_err(|e| io_err(path, e.into()))?;
    writeln!(f).and_then(|_| f.flush()).map_err(|e| io_err(path, e))
}

/// Output of the `shift` command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftReport {
    pub elements: OrbitElements,
    pub nc: NCParams,
    pub theta_term_rad_per_rev: f64,
    pub eta_term_rad_per_rev: f64,
    pub total_rad_per_rev: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub revolutions_per_century: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_term_arcsec_per_century: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_term_arcsec_per_century: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_arcsec_per_century: Option<f64>,
}

pub fn shift_report(cfg: &RunConfig) -> Result<ShiftReport> {
    let terms = perihelion_shift_terms(&cfg.elements, &cfg.nc)?;
    let arcsec = |v: f64| {
        cfg.revolutions_per_century
            .map(|r| rad_per_rev_to_arcsec_per_century(v, r) + 0.0)
    };
    Ok(ShiftReport {
        elements: cfg.elements,
        nc: cfg.nc,
        theta_term_rad_per_rev: terms.theta,
        eta_term_rad_per_rev: terms.eta + 0.0,
        total_rad_per_rev: terms.total(),
        revolutions_per_century: cfg.revolutions_per_century,
        theta_term_arcsec_per_century: arcsec(terms.theta),
        eta_term_arcsec_per_century: arcsec(terms.eta),
        total_arcsec_per_century: arcsec(terms.total()),
    })
}

fn cmd_shift(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let r = shift_report(cfg)?;
    let line = |name: &str, rad: f64, arc: Option<f64>| match arc {
        Some(a) => format!("{name:<6} {rad:>14.6e} rad/rev   {a:>14.6e} arcsec/century"),
        None => format!("{name:<6} {rad:>14.6e} rad/rev"),
    };
    let text = [
        line("theta", r.theta_term_rad_per_rev, r.theta_term_arcsec_per_century),
        line("eta", r.eta_term_rad_per_rev, r.eta_term_arcsec_per_century),
        line("total", r.total_rad_per_rev, r.total_arcsec_per_century),
    ]
    .join("\n");
    writeln!(stdout, "{text}").map_err(out_err)?;
    if let Some(path) = &cfg.out {
        write_json(cfg, path, &r)?;
    }
    Ok(0)
}

fn cmd_simulate(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let start = kepler_state_at_perihelion(&cfg.elements)?;
    let traj = integrate_orbit(&start, &cfg.elements, &cfg.nc, cfg.n_orbits, cfg.tolerance)?;
    if let Some(path) = &cfg.out {
        let mut f = create(path)?;
        traj.write_csv(&mut f)?;
        f.flush().map_err(|e| io_err(path, e))?;
    }
    let s = &traj.step_stats;
    let mut text = format!(
        "orbits {}  samples {}  accepted steps {}  rejected {}\n\
         max relative energy drift        {:.3e}\n\
         max relative |L| drift           {:.3e}\n\
         max angular drift of L direction {:.3e} rad\n",
        cfg.n_orbits,
        traj.samples.len(),
        s.steps,
        s.rejected,
        s.max_energy_drift,
        s.max_l_magnitude_drift,
        s.max_l_direction_drift
    );
    if cfg.elements.e > MIN_ECCENTRICITY && cfg.n_orbits >= 2 {
        match measure_precession(&cfg.elements, &cfg.nc, cfg.n_orbits, cfg.tolerance) {
            Ok(m) => {
                let an = perihelion_shift(&cfg.elements, &cfg.nc)?;
                text += &format!(
                    "measured shift {:.9e} rad/rev over {} revolutions (fit rms {:.2e})\n\
                     analytic shift {:.9e} rad/rev\n",
                    m.shift_per_rev, m.n_revolutions, m.fit_residual, an
                );
            }
            Err(err) => text += &format!("precession not measured: {err}\n"),
        }
    }
    write!(stdout, "{text}").map_err(out_err)?;
    Ok(0)
}

/// The `verify` command with an explicit closed form, so a deliberately wrong
/// formula can be fed through the harness.
pub fn cmd_verify(cfg: &RunConfig, analytic: verify::AnalyticFn, stdout: &mut dyn Write) -> Result<i32> {
    let rows = verify::run_grid(&cfg.verify, cfg.tolerance, analytic);
    write!(stdout, "{}", verify::summary_table(&rows)).map_err(out_err)?;
    if let Some(path) = &cfg.out {
        let mut f = create(path)?;
        verify::write_csv(&rows, &mut f)
            .and_then(|_| f.flush())
            .map_err(|e| io_err(path, e))?;
    }
    Ok(if verify::all_passed(&rows) { 0 } else { 1 })
}

fn cmd_bounds(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let obs = match &cfg.observation {
        Some(path) => ObservationRecord::load(path)?,
        None => ObservationRecord::mercury(),
    };
    let particles = default_particles(&cfg.constants);
    let report = run_pipeline(&obs, &particles, &cfg.constants, cfg.sigma_multiplier, cfg.rounding)?;
    write!(stdout, "{}", report.to_table()).map_err(out_err)?;
    if let Some(path) = &cfg.out {
        write_json(cfg, path, &report)?;
    }
    Ok(0)
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub elements: OrbitElements,
    pub nc: NCParams,
    pub theta_term: f64,
    pub eta_term: f64,
    pub analytic: f64,
    pub measured: Option<f64>,
}

/// Evaluates the sweep grid; rows are in ascending axis order regardless of scheduling.
pub fn sweep_rows(cfg: &RunConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.points()
        .into_par_iter()
        .map(|value| {
            let (elements, nc) = apply_axis(spec.axis, value, &cfg.elements, &cfg.nc);
            let terms = perihelion_shift_terms(&elements, &nc)?;
            let measured = if spec.measure && elements.e > MIN_ECCENTRICITY {
                Some(measure_precession(&elements, &nc, cfg.n_orbits, cfg.tolerance)?.shift_per_rev)
            } else {
                None
            };
            Ok(SweepRow {
                value,
                elements,
                nc,
                theta_term: terms.theta,
                eta_term: terms.eta,
                analytic: terms.total(),
                measured,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(
    axis: SweepAxis,
    rows: &[SweepRow],
    with_measured: bool,
    mut out: W,
) -> std::io::Result<()> {
    write!(
        out,
        "sweep_{},a,e,k,m,theta_sq,eta_sq,theta_term,eta_term,analytic",
        axis.name()
    )?;
    if with_measured {
        write!(out, ",measured")?;
    }
    writeln!(out)?;
    for r in rows {
        write!(
            out,
            "{:e},{:e},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.value,
            r.elements.a,
            r.elements.e,
            r.elements.k,
            r.elements.m,
            r.nc.theta_sq,
            r.nc.eta_sq,
            r.theta_term,
            r.eta_term,
            r.analytic
        )?;
        if with_measured {
            write!(out, ",{}", r.measured.map(|m| format!("{m:e}")).unwrap_or_default())?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::invalid("sweep_axis", "required by the sweep command"))?;
    let rows = sweep_rows(cfg, spec)?;
    match &cfg.out {
        Some(path) => {
            let mut f = create(path)?;
            write_sweep_csv(spec.axis, &rows, spec.measure, &mut f)
                .and_then(|_| f.flush())
                .map_err(|e| io_err(path, e))?;
            writeln!(stdout, "{} rows written to {}", rows.len(), path.display()).map_err(out_err)?;
        }
        None => write_sweep_csv(spec.axis, &rows, spec.measure, &mut *stdout).map_err(out_err)?,
    }
    Ok(0)
}
