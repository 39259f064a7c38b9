//! Command-line front end: configuration, table reproduction and CSV/JSON export.
//!
//! Settings resolve in three layers: built-in defaults, then an optional
//! `key = value` config file, then command-line flags. Keys in the file are
//! the long flag names without the leading dashes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::capri::{capri_charge_integral, capri_density_detailed, QuadratureConfig};
use crate::casimir::{casimir_energy_adiabatic, sign_consistency_audit, EnergyTrace, RampSpec, DEFAULT_RAMP_STEPS};
use crate::error::{Error, Result};
use crate::mode_sum::{total_charge_mode_sum, vacuum_density_profile, RegulatorConfig};
use crate::model::{validate_well, ChargeMethod, ChargeProfile, ChargeReport, SettingsDigest, WellParameters};

pub const DEFAULT_Z_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Total charge in the well.
    Charge,
    /// Charge density on a grid across the well.
    DensityProfile,
    /// Energy change along an adiabatic ramp of the depth.
    Casimir,
    /// Recompute both published tables with per-row pass/fail.
    ReproduceTables,
    /// Sign-consistency verdict for each charge definition.
    Audit,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Charge => "charge",
            Command::DensityProfile => "density-profile",
            Command::Casimir => "casimir",
            Command::ReproduceTables => "reproduce-tables",
            Command::Audit => "audit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodSelection {
    ModeSum,
    Contour,
    PointSplit,
    All,
}

impl MethodSelection {
    pub fn methods(&self) -> Vec<ChargeMethod> {
        match self {
            MethodSelection::ModeSum => vec![ChargeMethod::ModeSum],
            MethodSelection::Contour => vec![ChargeMethod::PointSplitContour],
            MethodSelection::PointSplit => vec![ChargeMethod::PointSplitComposite],
            MethodSelection::All => vec![
                ChargeMethod::ModeSum,
                ChargeMethod::PointSplitContour,
                ChargeMethod::PointSplitComposite,
            ],
        }
    }

    fn name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_owned())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn name(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "vacuum-charge",
    version,
    about = "Induced vacuum charge of a Dirac field in a square well"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Every knob as an optional override.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Flags {
    /// Electron mass [default: 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Well width [default: 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Well depth [default: 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Ramp target depth [default: eta]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eta_final: Option<f64>,
    /// Charge definition [default: all]
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodSelection>,
    /// Mode-sum momentum cutoff [default: 50 m]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p_max: Option<f64>,
    /// Mode-sum momentum nodes [default: 4096]
    #[arg(long, global = true)]
    pub n_p: Option<usize>,
    /// Contour half-extent [default: 200 m]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub y_max: Option<f64>,
    /// Contour nodes [default: 8192]
    #[arg(long, global = true)]
    pub n_nodes: Option<usize>,
    /// Principal-value exclusion radius [default: 1e-4 m]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub pv_delta: Option<f64>,
    /// Ramp intervals, even [default: 64]
    #[arg(long, global = true)]
    pub n_steps: Option<usize>,
    /// Profile grid points [default: 101]
    #[arg(long, global = true)]
    pub z_points: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// key = value settings file, overridden by flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration and exit
    #[arg(long, global = true)]
    pub print_config: bool,
}

fn parse_value<T: std::str::FromStr>(key: &'static str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(key, format!("cannot parse `{value}`")))
}

fn parse_enum<T: ValueEnum>(key: &'static str, value: &str) -> Result<T> {
    T::from_str(value, false).map_err(|_| Error::invalid(key, format!("unknown value `{value}`")))
}

impl Flags {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut flags = Flags::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let value = value.trim();
            match key.trim() {
                "m" => flags.m = Some(parse_value("m", value)?),
                "a" => flags.a = Some(parse_value("a", value)?),
                "eta" => flags.eta = Some(parse_value("eta", value)?),
                "eta-final" => flags.eta_final = Some(parse_value("eta-final", value)?),
                "method" => flags.method = Some(parse_enum("method", value)?),
                "p-max" => flags.p_max = Some(parse_value("p-max", value)?),
                "n-p" => flags.n_p = Some(parse_value("n-p", value)?),
                "y-max" => flags.y_max = Some(parse_value("y-max", value)?),
                "n-nodes" => flags.n_nodes = Some(parse_value("n-nodes", value)?),
                "pv-delta" => flags.pv_delta = Some(parse_value("pv-delta", value)?),
                "n-steps" => flags.n_steps = Some(parse_value("n-steps", value)?),
                "z-points" => flags.z_points = Some(parse_value("z-points", value)?),
                "out" => flags.out = Some(PathBuf::from(value)),
                "format" => flags.format = Some(parse_enum("format", value)?),
                other => return Err(Error::Usage(format!("config line {}: unknown key `{other}`", n + 1))),
            }
        }
        Ok(flags)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: &Flags) -> Flags {
        Flags {
            m: over.m.or(self.m),
            a: over.a.or(self.a),
            eta: over.eta.or(self.eta),
            eta_final: over.eta_final.or(self.eta_final),
            method: over.method.or(self.method),
            p_max: over.p_max.or(self.p_max),
            n_p: over.n_p.or(self.n_p),
            y_max: over.y_max.or(self.y_max),
            n_nodes: over.n_nodes.or(self.n_nodes),
            pv_delta: over.pv_delta.or(self.pv_delta),
            n_steps: over.n_steps.or(self.n_steps),
            z_points: over.z_points.or(self.z_points),
            out: over.out.clone().or(self.out),
            format: over.format.or(self.format),
            config: over.config.clone().or(self.config),
            print_config: over.print_config || self.print_config,
        }
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub well: WellParameters,
    pub eta_final: f64,
    pub method: MethodSelection,
    pub regulator: RegulatorConfig,
    pub quadrature: QuadratureConfig,
    pub n_steps: usize,
    pub z_points: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Resolves defaults and flags, reading the config file named by `--config`.
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let flags = match &cli.flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Flags::from_config_text(&text)?.overlay(&cli.flags)
            }
            None => cli.flags.clone(),
        };
        Self::resolve(cli.command, &flags)
    }

    pub fn resolve(command: Command, flags: &Flags) -> Result<Self> {
        let eta = flags.eta.unwrap_or(1.0);
        let well = validate_well(flags.m.unwrap_or(1.0), flags.a.unwrap_or(1.0), eta)?;
        let m = well.m();
        let mut regulator = RegulatorConfig::for_mass(m);
        if let Some(p) = flags.p_max {
            regulator.p_max = p;
        }
        if let Some(n) = flags.n_p {
            regulator.n_p = n;
        }
        regulator.validate()?;
        let mut quadrature = QuadratureConfig::for_mass(m);
        if let Some(y) = flags.y_max {
            quadrature.y_max = y;
        }
        if let Some(n) = flags.n_nodes {
            quadrature.n_nodes = n;
        }
        if let Some(d) = flags.pv_delta {
            quadrature.pv_delta = d;
        }
        quadrature.validate(m)?;
        let z_points = flags.z_points.unwrap_or(DEFAULT_Z_POINTS);
        if z_points == 0 {
            return Err(Error::invalid("z-points", "need at least one point"));
        }
        Ok(Self {
            command,
            well,
            eta_final: flags.eta_final.unwrap_or(eta),
            method: flags.method.unwrap_or(MethodSelection::All),
            regulator,
            quadrature,
            n_steps: flags.n_steps.unwrap_or(DEFAULT_RAMP_STEPS),
            z_points,
            out: flags.out.clone(),
            format: flags.format.unwrap_or_default(),
        })
    }

    /// The resolved settings in config-file syntax.
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# command: {}", self.command.name());
        let _ = writeln!(s, "m = {}", self.well.m());
        let _ = writeln!(s, "a = {}", self.well.a());
        let _ = writeln!(s, "eta = {}", self.well.eta());
        let _ = writeln!(s, "eta-final = {}", self.eta_final);
        let _ = writeln!(s, "method = {}", self.method.name());
        let _ = writeln!(s, "p-max = {}", self.regulator.p_max);
        let _ = writeln!(s, "n-p = {}", self.regulator.n_p);
        let _ = writeln!(s, "y-max = {}", self.quadrature.y_max);
        let _ = writeln!(s, "n-nodes = {}", self.quadrature.n_nodes);
        let _ = writeln!(s, "pv-delta = {}", self.quadrature.pv_delta);
        let _ = writeln!(s, "n-steps = {}", self.n_steps);
        let _ = writeln!(s, "z-points = {}", self.z_points);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        let _ = writeln!(s, "format = {}", self.format.name());
        s
    }
}

/// Text produced by a command, plus the number of failed checks it reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub text: String,
    pub failures: usize,
}

impl Artifact {
    fn ok(text: String) -> Self {
        Self { text, failures: 0 }
    }
}

/// Fixed-width scientific notation, exact under round trip.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn run(config: &RunConfig) -> Result<Artifact> {
    match config.command {
        Command::Charge => charge_command(config),
        Command::DensityProfile => density_command(config),
        Command::Casimir => casimir_command(config),
        Command::ReproduceTables => reproduce_tables(&config.quadrature, config.format),
        Command::Audit => audit_command(config),
    }
}

/// Charge reports for the selected methods; the composite reuses the contour result.
pub fn charge_reports(
    well: &WellParameters,
    selection: MethodSelection,
    quad: &QuadratureConfig,
    reg: &RegulatorConfig,
) -> Result<Vec<ChargeReport>> {
    let methods = selection.methods();
    let mut contour: Option<ChargeReport> = None;
    let mut reports = Vec::with_capacity(methods.len());
    for method in methods {
        let report = match method {
            ChargeMethod::ModeSum => total_charge_mode_sum(well, reg)?,
            ChargeMethod::PointSplitContour | ChargeMethod::PointSplitComposite => {
                let c = match &contour {
                    Some(c) => c.clone(),
                    None => {
                        let c = capri_charge_integral(well, quad)?;
                        contour = Some(c.clone());
                        c
                    }
                };
                if method == ChargeMethod::PointSplitContour {
                    c
                } else {
                    ChargeReport::point_split_composite(&c)?
                }
            }
        };
        reports.push(report);
    }
    Ok(reports)
}

#[derive(Serialize)]
struct ChargeRow<'a> {
    method: ChargeMethod,
    m: f64,
    a: f64,
    eta: f64,
    charge: f64,
    error_estimate: f64,
    settings_digest: &'a SettingsDigest,
}

fn charge_command(config: &RunConfig) -> Result<Artifact> {
    let reports = charge_reports(&config.well, config.method, &config.quadrature, &config.regulator)?;
    let text = match config.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.method.label().to_owned(),
                        format_number(r.well.m()),
                        format_number(r.well.a()),
                        format_number(r.well.eta()),
                        format_number(r.value),
                    ]
                })
                .collect();
            csv_text(&["method", "m", "a", "eta", "charge"], &rows)?
        }
        Format::Json => {
            let rows: Vec<ChargeRow> = reports
                .iter()
                .map(|r| ChargeRow {
                    method: r.method,
                    m: r.well.m(),
                    a: r.well.a(),
                    eta: r.well.eta(),
                    charge: r.value,
                    error_estimate: r.error_estimate,
                    settings_digest: &r.settings_digest,
                })
                .collect();
            json_text(&rows)?
        }
    };
    Ok(Artifact::ok(text))
}

/// Cell midpoints of `n` equal cells across `(-a/2, a/2)`.
pub fn midpoint_grid(well: &WellParameters, n: usize) -> Vec<f64> {
    let h = well.half_width();
    let step = well.a() / n as f64;
    let lower: Vec<f64> = (0..n / 2).map(|i| -h + (i as f64 + 0.5) * step).collect();
    let mut zs = lower.clone();
    if n % 2 == 1 {
        zs.push(0.0);
    }
    zs.extend(lower.iter().rev().map(|z| -z));
    zs
}

/// A density profile ready for export.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileExport {
    pub profile: ChargeProfile,
    /// Per-point error estimate, when the method provides one.
    pub error_estimates: Option<Vec<f64>>,
    pub settings_digest: SettingsDigest,
}

/// Density profile of the well under one method.
pub fn density_profile(
    well: &WellParameters,
    method: ChargeMethod,
    zs: &[f64],
    quad: &QuadratureConfig,
    reg: &RegulatorConfig,
) -> Result<ProfileExport> {
    well.require_subcritical()?;
    let (densities, errors, digest) = match method {
        ChargeMethod::ModeSum => {
            reg.validate()?;
            let d = vacuum_density_profile(well, zs, reg)?;
            (d.iter().map(|v| v.value).collect::<Vec<_>>(), None, reg.digest())
        }
        ChargeMethod::PointSplitContour | ChargeMethod::PointSplitComposite => {
            use rayon::prelude::*;
            let shift = if method == ChargeMethod::PointSplitComposite {
                well.eta() / std::f64::consts::PI
            } else {
                0.0
            };
            let results = zs
                .par_iter()
                .map(|&z| capri_density_detailed(well, z, quad))
                .collect::<Result<Vec<_>>>()?;
            (
                results.iter().map(|r| r.value + shift).collect(),
                Some(results.iter().map(|r| r.error_estimate).collect()),
                quad.digest(),
            )
        }
    };
    Ok(ProfileExport {
        profile: ChargeProfile::new(zs.to_vec(), densities, method, *well)?,
        error_estimates: errors,
        settings_digest: digest,
    })
}

#[derive(Serialize)]
struct ProfileRow<'a> {
    z: f64,
    density: f64,
    method: ChargeMethod,
    m: f64,
    a: f64,
    eta: f64,
    error_estimate: Option<f64>,
    settings_digest: &'a SettingsDigest,
}

/// Serializes profiles as `z,density,method,m,a,eta` CSV or the JSON equivalent.
pub fn export_profiles(profiles: &[ProfileExport], format: Format) -> Result<String> {
    if profiles.is_empty() || profiles.iter().any(|p| p.profile.is_empty()) {
        return Err(Error::invalid("profile", "nothing to export"));
    }
    match format {
        Format::Csv => {
            let mut rows = Vec::new();
            for p in profiles {
                let w = p.profile.well();
                for (z, d) in p.profile.positions().iter().zip(p.profile.densities()) {
                    rows.push(vec![
                        format_number(*z),
                        format_number(*d),
                        p.profile.method().label().to_owned(),
                        format_number(w.m()),
                        format_number(w.a()),
                        format_number(w.eta()),
                    ]);
                }
            }
            csv_text(&["z", "density", "method", "m", "a", "eta"], &rows)
        }
        Format::Json => {
            let mut rows = Vec::new();
            for p in profiles {
                let w = p.profile.well();
                for (i, (z, d)) in p.profile.positions().iter().zip(p.profile.densities()).enumerate() {
                    rows.push(ProfileRow {
                        z: *z,
                        density: *d,
                        method: p.profile.method(),
                        m: w.m(),
                        a: w.a(),
                        eta: w.eta(),
                        error_estimate: p.error_estimates.as_ref().map(|e| e[i]),
                        settings_digest: &p.settings_digest,
                    });
                }
            }
            json_text(&rows)
        }
    }
}

pub fn export_profile(profile: &ProfileExport, format: Format) -> Result<String> {
    export_profiles(std::slice::from_ref(profile), format)
}

fn density_command(config: &RunConfig) -> Result<Artifact> {
    let zs = midpoint_grid(&config.well, config.z_points);
    let profiles = config
        .method
        .methods()
        .into_iter()
        .map(|m| density_profile(&config.well, m, &zs, &config.quadrature, &config.regulator))
        .collect::<Result<Vec<_>>>()?;
    Ok(Artifact::ok(export_profiles(&profiles, config.format)?))
}

#[derive(Serialize)]
struct TraceRow<'a> {
    method: ChargeMethod,
    m: f64,
    a: f64,
    eta: f64,
    charge: f64,
    energy_delta: f64,
    casimir_energy: f64,
    casimir_sign: &'static str,
    error_estimate: f64,
    settings_digest: &'a SettingsDigest,
}

fn casimir_command(config: &RunConfig) -> Result<Artifact> {
    let traces = config
        .method
        .methods()
        .into_iter()
        .map(|method| {
            let ramp = RampSpec::new(config.eta_final, method).with_steps(config.n_steps);
            casimir_energy_adiabatic(&config.well, &ramp, &config.quadrature, &config.regulator)
        })
        .collect::<Result<Vec<EnergyTrace>>>()?;
    let digest_for = |method: ChargeMethod| {
        match method {
            ChargeMethod::ModeSum => config.regulator.digest(),
            _ => config.quadrature.digest(),
        }
        .with("n_steps", config.n_steps as f64)
    };
    let text = match config.format {
        Format::Csv => {
            let mut rows = Vec::new();
            for t in &traces {
                for i in 0..t.eta_grid.len() {
                    rows.push(vec![
                        t.ramp.charge_method.label().to_owned(),
                        format_number(t.well.m()),
                        format_number(t.well.a()),
                        format_number(t.eta_grid[i]),
                        format_number(t.charges[i]),
                        format_number(t.energy_delta[i]),
                        format_number(t.casimir_energy),
                        t.casimir_sign.label().to_owned(),
                    ]);
                }
            }
            csv_text(
                &[
                    "method",
                    "m",
                    "a",
                    "eta",
                    "charge",
                    "energy_delta",
                    "casimir_energy",
                    "casimir_sign",
                ],
                &rows,
            )?
        }
        Format::Json => {
            let digests: Vec<SettingsDigest> = traces.iter().map(|t| digest_for(t.ramp.charge_method)).collect();
            let mut rows = Vec::new();
            for (t, digest) in traces.iter().zip(&digests) {
                let last = *t.energy_delta.last().unwrap_or(&0.0);
                for i in 0..t.eta_grid.len() {
                    rows.push(TraceRow {
                        method: t.ramp.charge_method,
                        m: t.well.m(),
                        a: t.well.a(),
                        eta: t.eta_grid[i],
                        charge: t.charges[i],
                        energy_delta: t.energy_delta[i],
                        casimir_energy: t.casimir_energy,
                        casimir_sign: t.casimir_sign.label(),
                        error_estimate: (t.casimir_energy - last).abs(),
                        settings_digest: digest,
                    });
                }
            }
            json_text(&rows)?
        }
    };
    Ok(Artifact::ok(text))
}

/// One published entry: width, depth, printed value and row tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub a: f64,
    pub eta: f64,
    pub printed: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

const fn row(a: f64, eta: f64, printed: &'static str, value: f64, tolerance: f64) -> PublishedRow {
    PublishedRow {
        a,
        eta,
        printed,
        value,
        tolerance,
    }
}

/// Plain well charge for `m = 1`.
pub const TABLE_1: [PublishedRow; 9] = [
    row(1.0, 0.1, "-0.021", -0.021, 0.002),
    row(1.0, 0.5, "-0.103", -0.103, 0.002),
    row(1.0, 1.0, "-0.204", -0.204, 0.002),
    row(5.0, 0.1, "-0.147", -0.147, 0.002),
    row(5.0, 0.5, "-0.733", -0.733, 0.002),
    row(5.0, 1.0, "-1.46", -1.46, 0.01),
    row(10.0, 0.1, "-0.306", -0.306, 0.002),
    row(10.0, 0.5, "-1.53", -1.53, 0.01),
    row(10.0, 1.0, "-3.05", -3.05, 0.01),
];

/// Point-split well charge for `m = 1`.
pub const TABLE_2: [PublishedRow; 9] = [
    row(1.0, 0.1, "+0.011", 0.011, 0.002),
    row(1.0, 0.5, "+0.057", 0.057, 0.002),
    row(1.0, 1.0, "+0.115", 0.115, 0.002),
    row(5.0, 0.1, "+0.012", 0.012, 0.002),
    row(5.0, 0.5, "+0.063", 0.063, 0.002),
    row(5.0, 1.0, "+0.130", 0.130, 0.002),
    row(10.0, 0.1, "+0.012", 0.012, 0.002),
    row(10.0, 0.5, "+0.063", 0.063, 0.002),
    row(10.0, 1.0, "+0.130", 0.130, 0.002),
];

/// A recomputed table entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCheck {
    pub table: u8,
    pub a: f64,
    pub eta: f64,
    pub published: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub error_estimate: f64,
    pub settings_digest: SettingsDigest,
}

/// Recomputes both tables through the contour path.
pub fn table_checks(quad: &QuadratureConfig) -> Result<Vec<TableCheck>> {
    let mut checks = Vec::with_capacity(18);
    let mut composites = Vec::with_capacity(9);
    for published in &TABLE_1 {
        let well = validate_well(1.0, published.a, published.eta)?;
        let contour = capri_charge_integral(&well, quad)?;
        composites.push(ChargeReport::point_split_composite(&contour)?);
        checks.push(check(1, published, &contour));
    }
    for (published, report) in TABLE_2.iter().zip(&composites) {
        checks.push(check(2, published, report));
    }
    Ok(checks)
}

fn check(table: u8, published: &PublishedRow, report: &ChargeReport) -> TableCheck {
    TableCheck {
        table,
        a: published.a,
        eta: published.eta,
        published: published.value,
        computed: report.value,
        tolerance: published.tolerance,
        pass: (report.value - published.value).abs() <= published.tolerance,
        error_estimate: report.error_estimate,
        settings_digest: report.settings_digest.clone(),
    }
}

pub fn reproduce_tables(quad: &QuadratureConfig, format: Format) -> Result<Artifact> {
    let checks = table_checks(quad)?;
    let failures = checks.iter().filter(|c| !c.pass).count();
    let text = match format {
        Format::Csv => {
            let printed = TABLE_1.iter().chain(TABLE_2.iter()).map(|r| r.printed);
            let rows: Vec<Vec<String>> = checks
                .iter()
                .zip(printed)
                .map(|(c, printed)| {
                    vec![
                        c.table.to_string(),
                        c.a.to_string(),
                        c.eta.to_string(),
                        printed.to_owned(),
                        format_number(c.computed),
                        c.tolerance.to_string(),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            csv_text(
                &["table", "a", "eta", "published", "computed", "tolerance", "pass"],
                &rows,
            )?
        }
        Format::Json => json_text(&checks)?,
    };
    Ok(Artifact { text, failures })
}

fn audit_command(config: &RunConfig) -> Result<Artifact> {
    let well = &config.well;
    let reports = charge_reports(well, MethodSelection::All, &config.quadrature, &config.regulator)?;
    let audit = sign_consistency_audit(well, &reports, &[]);
    let text = match config.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = audit
                .methods
                .iter()
                .map(|v| {
                    vec![
                        v.method.label().to_owned(),
                        format_number(well.m()),
                        format_number(well.a()),
                        format_number(well.eta()),
                        format_number(v.charge),
                        format!("{:?}", v.verdict).to_lowercase(),
                        v.casimir_sign.label().to_owned(),
                        v.contradiction.to_string(),
                        audit.free_field_null.to_string(),
                    ]
                })
                .collect();
            csv_text(
                &[
                    "method",
                    "m",
                    "a",
                    "eta",
                    "charge",
                    "verdict",
                    "casimir_sign",
                    "contradiction",
                    "free_field_null",
                ],
                &rows,
            )?
        }
        Format::Json => json_text(&audit)?,
    };
    Ok(Artifact::ok(text))
}

/// Runs a parsed command line: writes the artifact to `--out` or returns it
/// for printing. Table rows outside tolerance count as failures.
pub fn execute(cli: &Cli) -> Result<Option<Artifact>> {
    let config = RunConfig::from_cli(cli)?;
    if cli.flags.print_config {
        return Ok(Some(Artifact::ok(config.to_config_text())));
    }
    let artifact = run(&config)?;
    match &config.out {
        Some(path) => {
            std::fs::write(path, &artifact.text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(Some(Artifact {
                text: String::new(),
                failures: artifact.failures,
            }))
        }
        None => Ok(Some(artifact)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags::default()
    }

    #[test]
    fn defaults_match_module_defaults() {
        let cfg = RunConfig::resolve(Command::Charge, &flags()).unwrap();
        assert_eq!(cfg.regulator, RegulatorConfig::default());
        assert_eq!(cfg.quadrature, QuadratureConfig::default());
        assert_eq!(cfg.n_steps, DEFAULT_RAMP_STEPS);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.method, MethodSelection::All);
        assert_eq!(cfg.eta_final, cfg.well.eta());
    }

    #[test]
    fn config_text_round_trips() {
        let mut f = flags();
        f.a = Some(5.0);
        f.eta = Some(0.5);
        f.method = Some(MethodSelection::PointSplit);
        f.pv_delta = Some(2e-4);
        f.format = Some(Format::Json);
        let cfg = RunConfig::resolve(Command::Casimir, &f).unwrap();
        let parsed = Flags::from_config_text(&cfg.to_config_text()).unwrap();
        assert_eq!(RunConfig::resolve(Command::Casimir, &parsed).unwrap(), cfg);
    }

    #[test]
    fn flags_override_file() {
        let file = Flags::from_config_text("# comment\na = 5\n\neta=0.25\nmethod = contour\n").unwrap();
        let mut cli = flags();
        cli.eta = Some(0.5);
        let merged = file.overlay(&cli);
        assert_eq!(merged.a, Some(5.0));
        assert_eq!(merged.eta, Some(0.5));
        assert_eq!(merged.method, Some(MethodSelection::Contour));
        assert!(Flags::from_config_text("bogus = 1").is_err());
        assert!(Flags::from_config_text("a 5").is_err());
        assert!(Flags::from_config_text("a = x").is_err());
    }

    #[test]
    fn midpoint_grid_is_symmetric() {
        let well = validate_well(1.0, 1.0, 1.0).unwrap();
        for n in [1, 2, 3, 101] {
            let zs = midpoint_grid(&well, n);
            assert_eq!(zs.len(), n);
            for i in 0..n {
                assert_eq!(zs[i], -zs[n - 1 - i]);
                assert!(zs[i].abs() < 0.5);
            }
        }
    }

    #[test]
    fn empty_profile_is_an_error() {
        assert!(export_profiles(&[], Format::Csv).is_err());
    }

    #[test]
    fn csv_numbers_round_trip() {
        let well = validate_well(1.0, 1.0, 1.0).unwrap();
        let profile = ProfileExport {
            profile: ChargeProfile::new(
                vec![-0.25, 0.0, 0.25],
                vec![-0.123456789012345, 0.1 + 0.2, 1.0 / 3.0],
                ChargeMethod::PointSplitContour,
                well,
            )
            .unwrap(),
            error_estimates: None,
            settings_digest: SettingsDigest::new(),
        };
        let text = export_profile(&profile, Format::Csv).unwrap();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(
            reader.headers().unwrap().iter().collect::<Vec<_>>(),
            ["z", "density", "method", "m", "a", "eta"]
        );
        for rec in reader.records() {
            let rec = rec.unwrap();
            for field in [0, 1, 3, 4, 5] {
                let s = &rec[field];
                assert_eq!(format_number(s.parse::<f64>().unwrap()), s);
            }
        }
    }

    #[test]
    fn table_rows_pass() {
        let checks = table_checks(&QuadratureConfig::default()).unwrap();
        assert_eq!(checks.len(), 18);
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
        for i in 0..9 {
            let t1 = &checks[i];
            let t2 = &checks[9 + i];
            assert_eq!(t2.computed, t1.computed + t1.eta * t1.a / std::f64::consts::PI);
        }
    }
}
