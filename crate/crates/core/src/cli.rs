//! Command-line front end: force sweeps as CSV, oracle comparisons and
//! asymptotic-limit reports.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 oracle
//! non-convergence.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::error::Error;
use crate::mirror::{
    classify_distance, dynamic_chiral_force, nonretarded_limit_force, retarded_limit_force, static_chiral_force,
    GeometryTime, MirrorSpec, Regime,
};
use crate::molecule::{dimethyl_disulphide, load_molecule, Molecule};
use crate::oracle::traces::load_traces;
use crate::oracle::{force_by_quadrature, perfect_chiral_plate, QuadConfig};

pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;

/// Relative discrepancy accepted by `oracle-compare`.
pub const ORACLE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(
    name = "chiral-cp",
    version,
    about = "Chiral Casimir-Polder force on a molecule above a perfect chiral mirror"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Static force versus distance.
    Static(StaticArgs),
    /// Dynamical force after switch-on versus time at fixed distance.
    Dynamic(DynamicArgs),
    /// Closed-form dynamical force against frequency quadrature.
    OracleCompare(OracleArgs),
    /// Static force together with the non-retarded and retarded laws.
    Limits(LimitsArgs),
}

#[derive(Debug, Args)]
pub struct MoleculeArgs {
    /// Molecule JSON file.
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "builtin",
        required_unless_present = "builtin"
    )]
    pub molecule: Option<PathBuf>,
    /// Built-in molecule.
    #[arg(long, value_name = "NAME", value_parser = ["dimethyl-disulphide"])]
    pub builtin: Option<String>,
    /// Plate chirality, +1 or -1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_chirality)]
    pub chirality: MirrorSpec,
}

#[derive(Debug, Args)]
pub struct StaticArgs {
    #[command(flatten)]
    pub molecule: MoleculeArgs,
    /// Single distance in metres.
    #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
    pub distance: Option<f64>,
    /// distance:<start>:<stop>:<points>:<lin|log>
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
    /// CSV destination (standard output if absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DynamicArgs {
    #[command(flatten)]
    pub molecule: MoleculeArgs,
    /// Distance in metres.
    #[arg(long)]
    pub distance: f64,
    /// Single time in seconds.
    #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
    pub time: Option<f64>,
    /// time:<start>:<stop>:<points>:<lin|log>
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub molecule: MoleculeArgs,
    #[arg(long)]
    pub distance: f64,
    #[arg(long)]
    pub time: f64,
    /// Kelvin.
    #[arg(long, default_value_t = 0.0)]
    pub temperature: f64,
    /// Trace JSON file; the perfect chiral plate is used if absent.
    #[arg(long, value_name = "PATH")]
    pub traces: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub molecule: MoleculeArgs,
    #[arg(long)]
    pub distance: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_chirality(s: &str) -> std::result::Result<MirrorSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Distance,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

/// A grid of `points ≥ 2` values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: SweepScale,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        points: usize,
        scale: SweepScale,
    ) -> Result<Self, String> {
        if !start.is_finite() || !stop.is_finite() {
            return Err("sweep bounds must be finite".into());
        }
        if start >= stop {
            return Err(format!("sweep start {start} must be below stop {stop}"));
        }
        if points < 2 {
            return Err(format!("sweep needs at least 2 points, got {points}"));
        }
        if scale == SweepScale::Log && start <= 0.0 {
            return Err("log sweep requires start > 0".into());
        }
        Ok(Self {
            variable,
            start,
            stop,
            points,
            scale,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.points - 1 {
                    return self.stop;
                }
                let s = i as f64 / last;
                match self.scale {
                    SweepScale::Linear => self.start + s * (self.stop - self.start),
                    SweepScale::Log => (self.start.ln() + s * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, start, stop, points, scale] = parts[..] else {
            return Err(format!("expected <var>:<start>:<stop>:<points>:<lin|log>, got {s:?}"));
        };
        let variable = match var {
            "distance" | "d" => SweepVariable::Distance,
            "time" | "t" => SweepVariable::Time,
            other => return Err(format!("unknown sweep variable {other:?} (distance or time)")),
        };
        let number = |x: &str| x.parse::<f64>().map_err(|_| format!("not a number: {x:?}"));
        let points = points
            .parse::<usize>()
            .map_err(|_| format!("not a point count: {points:?}"))?;
        let scale = match scale {
            "lin" | "linear" => SweepScale::Linear,
            "log" => SweepScale::Log,
            other => return Err(format!("unknown sweep scale {other:?} (lin or log)")),
        };
        SweepSpec::new(variable, number(start)?, number(stop)?, points, scale)
    }
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Convergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Convergence(_) => EXIT_CONVERGENCE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Convergence(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } => CliError::Convergence(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

fn load(args: &MoleculeArgs) -> Result<Molecule, CliError> {
    match (&args.molecule, args.builtin.as_deref()) {
        (Some(path), None) => Ok(load_molecule(path)?),
        (None, Some("dimethyl-disulphide")) => Ok(dimethyl_disulphide()),
        (None, Some(other)) => Err(CliError::Usage(format!("unknown builtin molecule {other:?}"))),
        _ => Err(CliError::Usage(
            "exactly one of --molecule or --builtin is required".into(),
        )),
    }
}

fn grid(single: Option<f64>, sweep: Option<SweepSpec>, expected: SweepVariable) -> Result<Vec<f64>, CliError> {
    match (single, sweep) {
        (Some(x), None) => Ok(vec![x]),
        (None, Some(s)) if s.variable == expected => Ok(s.values()),
        (None, Some(_)) => Err(CliError::Usage(format!(
            "this subcommand sweeps {}",
            match expected {
                SweepVariable::Distance => "distance",
                SweepVariable::Time => "time",
            }
        ))),
        _ => Err(CliError::Usage("give either a single value or --sweep".into())),
    }
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticRow {
    pub distance: f64,
    pub force: f64,
    pub regime: Regime,
}

/// Static force at each distance, in input order. The first failing row
/// (by index) is reported.
pub fn static_rows(mol: &Molecule, spec: MirrorSpec, distances: &[f64]) -> Result<Vec<StaticRow>, CliError> {
    distances
        .par_iter()
        .enumerate()
        .map(|(i, &d)| {
            static_chiral_force(mol, d, spec)
                .map(|r| StaticRow {
                    distance: d,
                    force: r.value,
                    regime: r.regime,
                })
                .map_err(|e| row_error(i, "d_m", d, e))
        })
        .collect()
}

pub fn static_csv(rows: &[StaticRow]) -> String {
    let mut out = String::from("d_m,force_N,regime\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_float(r.distance),
            format_float(r.force),
            r.regime
        );
    }
    out
}

/// One dynamical sample; `force` is `None` inside the light-cone guard band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicRow {
    pub time: f64,
    pub force: Option<f64>,
    pub regime: Option<Regime>,
    pub lightcone_distance: f64,
}

pub fn dynamic_rows(mol: &Molecule, spec: MirrorSpec, d: f64, times: &[f64]) -> Result<Vec<DynamicRow>, CliError> {
    times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let geom = GeometryTime::new(d, t).map_err(|e| row_error(i, "t_s", t, e))?;
            match dynamic_chiral_force(mol, &geom, spec) {
                Ok(r) => Ok(DynamicRow {
                    time: t,
                    force: Some(r.value),
                    regime: Some(r.regime),
                    lightcone_distance: r.lightcone_distance.unwrap_or(f64::INFINITY),
                }),
                Err(Error::LightCone { distance, .. }) => Ok(DynamicRow {
                    time: t,
                    force: None,
                    regime: None,
                    lightcone_distance: distance,
                }),
                Err(e) => Err(row_error(i, "t_s", t, e)),
            }
        })
        .collect()
}

pub fn dynamic_csv(rows: &[DynamicRow]) -> String {
    let mut out = String::from("t_s,force_N,regime,lightcone_distance\n");
    for r in rows {
        let (force, regime) = match (r.force, r.regime) {
            (Some(f), Some(g)) => (format_float(f), g.as_str()),
            _ => (String::new(), "lightcone"),
        };
        let _ = writeln!(
            out,
            "{},{force},{regime},{}",
            format_float(r.time),
            format_float(r.lightcone_distance)
        );
    }
    out
}

fn row_error(index: usize, column: &str, x: f64, e: Error) -> CliError {
    let msg = format!("row {index} ({column} = {}): {e}", format_float(x));
    match e {
        Error::Convergence { .. } => CliError::Convergence(msg),
        _ => CliError::Domain(msg),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Domain(format!("cannot write to standard output: {e}")))
        }
    }
}

pub fn cmd_static(args: &StaticArgs) -> Result<(), CliError> {
    let mol = load(&args.molecule)?;
    let distances = grid(args.distance, args.sweep, SweepVariable::Distance)?;
    let rows = static_rows(&mol, args.molecule.chirality, &distances)?;
    emit(args.output.as_deref(), &static_csv(&rows))
}

pub fn cmd_dynamic(args: &DynamicArgs) -> Result<(), CliError> {
    let mol = load(&args.molecule)?;
    let times = grid(args.time, args.sweep, SweepVariable::Time)?;
    let rows = dynamic_rows(&mol, args.molecule.chirality, args.distance, &times)?;
    emit(args.output.as_deref(), &dynamic_csv(&rows))
}

/// Closed form and quadrature at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub closed_form: f64,
    pub quadrature: f64,
    pub quadrature_error: f64,
    pub absolute: f64,
    pub relative: f64,
    /// `None` when no closed form applies (finite temperature).
    pub within_tolerance: Option<bool>,
}

pub fn oracle_report(args: &OracleArgs, mol: &Molecule) -> Result<OracleReport, CliError> {
    let spec = args.molecule.chirality;
    let traces = match &args.traces {
        Some(path) => load_traces(path)?,
        None => perfect_chiral_plate(spec),
    };
    let geom = GeometryTime::new(args.distance, args.time)?;
    let closed_form = dynamic_chiral_force(mol, &geom, spec)?.value;
    let q = force_by_quadrature(
        mol,
        args.distance,
        args.time,
        args.temperature,
        &traces,
        &QuadConfig::default(),
    )?;
    let absolute = (q.chiral.value - closed_form).abs();
    let relative = if closed_form == 0.0 {
        if absolute == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        absolute / closed_form.abs()
    };
    Ok(OracleReport {
        closed_form,
        quadrature: q.chiral.value,
        quadrature_error: q.chiral.error,
        absolute,
        relative,
        within_tolerance: (args.temperature == 0.0).then_some(relative <= ORACLE_TOLERANCE),
    })
}

pub fn cmd_oracle_compare(args: &OracleArgs) -> Result<(), CliError> {
    let mol = load(&args.molecule)?;
    let r = oracle_report(args, &mol)?;
    let mut out = String::new();
    let _ = writeln!(out, "closed_form_N: {}", format_float(r.closed_form));
    let _ = writeln!(out, "quadrature_N: {}", format_float(r.quadrature));
    let _ = writeln!(out, "oracle_error_estimate_N: {}", format_float(r.quadrature_error));
    let _ = writeln!(out, "absolute_discrepancy_N: {}", format_float(r.absolute));
    let _ = writeln!(out, "relative_discrepancy: {}", format_float(r.relative));
    let verdict = match r.within_tolerance {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "n/a (closed form is zero-temperature)",
    };
    let _ = writeln!(out, "tolerance: {ORACLE_TOLERANCE:e} {verdict}");
    emit(args.output.as_deref(), &out)?;
    match r.within_tolerance {
        Some(false) => Err(CliError::Domain(format!(
            "relative discrepancy {:e} exceeds {ORACLE_TOLERANCE:e}",
            r.relative
        ))),
        _ => Ok(()),
    }
}

pub fn cmd_limits(args: &LimitsArgs) -> Result<(), CliError> {
    let mol = load(&args.molecule)?;
    let spec = args.molecule.chirality;
    let d = args.distance;
    let exact = static_chiral_force(&mol, d, spec)?;
    let near = nonretarded_limit_force(&mol, d, spec)?;
    let far = retarded_limit_force(&mol, d, spec)?;
    let regime = classify_distance(&mol, d)?;
    let mut out = String::new();
    let _ = writeln!(out, "d_m: {}", format_float(d));
    let _ = writeln!(out, "static_N: {}", format_float(exact.value));
    let _ = writeln!(out, "nonretarded_limit_N: {}", format_float(near.value));
    let _ = writeln!(out, "retarded_limit_N: {}", format_float(far.value));
    let _ = writeln!(out, "regime: {}", regime.as_str());
    emit(args.output.as_deref(), &out)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Static(a) => cmd_static(a),
        Command::Dynamic(a) => cmd_dynamic(a),
        Command::OracleCompare(a) => cmd_oracle_compare(a),
        Command::Limits(a) => cmd_limits(a),
    }
}

/// Parse the process arguments, run and map the outcome to an exit code.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chiral-cp: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s: SweepSpec = "distance:1e-8:1e-6:3:log".parse().unwrap();
        assert_eq!(s.values().len(), 3);
        assert_eq!(s.values()[0], 1e-8);
        assert_eq!(s.values()[2], 1e-6);
        assert!((s.values()[1] - 1e-7).abs() < 1e-20);
        let s: SweepSpec = "time:0:2e-15:5:lin".parse().unwrap();
        assert_eq!(s.values()[2], 1e-15);
        assert!("distance:1e-8:1e-6:1:log".parse::<SweepSpec>().is_err());
        assert!("distance:0:1e-6:4:log".parse::<SweepSpec>().is_err());
        assert!("distance:2:1:4:lin".parse::<SweepSpec>().is_err());
        assert!("mass:1:2:4:lin".parse::<SweepSpec>().is_err());
        assert!("distance:1:2:4".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn csv_lightcone_rows_are_flagged() {
        let m = dimethyl_disulphide();
        let d = 1e-7;
        let tc = 2.0 * d / crate::constants::SPEED_OF_LIGHT;
        let rows = dynamic_rows(&m, MirrorSpec::Negative, d, &[0.0, tc, 2.0 * tc]).unwrap();
        assert_eq!(rows[0].force, Some(0.0));
        assert!(rows[1].force.is_none());
        let csv = dynamic_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t_s,force_N,regime,lightcone_distance");
        assert!(lines[2].contains(",,lightcone,"));
        assert!(lines[3].contains("post_lightcone"));
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-2.5e-300), "-2.5000000000000000e-300");
    }
}
