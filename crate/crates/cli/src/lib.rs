//! `hmbec` command-line front end.
//!
//! Every subcommand writes one CSV table to `--out` (standard output when
//! absent) and, with `--svg`, a rendering next to it. Exit status is 0 on
//! success, 1 for usage errors and 2 for numerical failures.

mod config;
pub mod svg;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use hmbec::bethe_ode::{critical_point_analysis, potential_a0, potential_general, SexticPotential};
use hmbec::numeric::linspace;
use hmbec::observables::fidelity_curve;
use hmbec::semiclassical::{default_z_grid, lambda_zero_crossings};
use hmbec::sweep::{with_workers, write_csv};
use hmbec::{
    abc_coefficients, bethe_roots, boundary_curves, build_tridiagonal, classical_energy, eigendecompose,
    expectation_nc, expectation_z, fixed_points, level_curve_grid, region_classify, run_sweep, ModelParams, Sector,
    SemiclassicalCouplings, SweepResult, SweepSpec, Target,
};

use svg::{plot_sweep, render_svg, Plot, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

fn usage(msg: impl fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn numeric(msg: impl fmt::Display) -> CliError {
    CliError::Numeric(msg.to_string())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// `start:stop:count` with inclusive endpoints, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn single(v: f64) -> Self {
        Range {
            start: v,
            stop: v,
            count: 1,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{t}' is not a finite number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let r = match parts[..] {
            [v] => Range::single(num(v)?),
            [a, b, c] => Range {
                start: num(a)?,
                stop: num(b)?,
                count: c.trim().parse().map_err(|_| format!("'{c}' is not a point count"))?,
            },
            _ => return Err(format!("'{s}' is not start:stop:count")),
        };
        if r.count == 0 {
            return Err("a range needs at least one point".into());
        }
        if r.stop < r.start {
            return Err(format!("range stop {} is below start {}", r.stop, r.start));
        }
        if r.count == 1 && r.stop != r.start {
            return Err("a one-point range needs start = stop".into());
        }
        Ok(r)
    }
}

/// `name=value` for a fixed sweep parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SetArg {
    pub name: String,
    pub value: f64,
}

impl FromStr for SetArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, v) = s.split_once('=').ok_or_else(|| format!("'{s}' is not name=value"))?;
        let value = v.parse().map_err(|_| format!("'{v}' is not a number"))?;
        Ok(SetArg {
            name: name.to_string(),
            value,
        })
    }
}

/// `name=start:stop:count` for a swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisArg {
    pub name: String,
    pub range: Range,
}

impl FromStr for AxisArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, r) = s
            .split_once('=')
            .ok_or_else(|| format!("'{s}' is not name=start:stop:count"))?;
        Ok(AxisArg {
            name: name.to_string(),
            range: r.parse()?,
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hmbec",
    version,
    about = "Phase analysis of the heteronuclear molecular condensate model"
)]
#[command(args_override_self = true, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical fixed points with their branch and character.
    #[command(allow_negative_numbers = true)]
    FixedPoints(FixedPointsArgs),
    /// Region labels on an (α, λ) grid, or the bifurcation boundaries.
    #[command(allow_negative_numbers = true)]
    PhaseDiagram(PhaseDiagramArgs),
    /// Classical energy on a (z, θ) grid.
    #[command(allow_negative_numbers = true)]
    LevelCurves(LevelCurvesArgs),
    /// Sector spectrum with ⟨z⟩ and ⟨N_c⟩ per level.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Bethe roots for each level of a sector.
    #[command(allow_negative_numbers = true)]
    Bethe(BetheArgs),
    /// One-body Schrödinger potential, or its stationary points.
    #[command(allow_negative_numbers = true)]
    Potential(PotentialArgs),
    /// Threshold μ* from the leading correction and the exact solve.
    #[command(allow_negative_numbers = true)]
    Threshold(ThresholdArgs),
    /// Ground-state energy, gap, ⟨z⟩ and ⟨N_c⟩ against α.
    #[command(allow_negative_numbers = true)]
    Expectation(ExpectationArgs),
    /// ⟨z(t)⟩ from the all-molecule state.
    #[command(allow_negative_numbers = true)]
    Dynamics(DynamicsArgs),
    /// Ground-state overlap W against a coupling, with its minima.
    #[command(allow_negative_numbers = true)]
    Fidelity(FidelityArgs),
    /// Generic one- or two-axis sweep of a target.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// CSV output path (standard output when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG rendering beside the CSV; needs --out
    #[arg(long)]
    pub svg: bool,
    /// Worker threads for parallel work
    #[arg(long, env = "HMBEC_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,
    /// Flat `key = value` file of flag values; flags on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Interconversion amplitude Ω
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// a–a scattering U_aa
    #[arg(long, default_value_t = 0.0)]
    pub u_aa: f64,
    /// b–b scattering U_bb
    #[arg(long, default_value_t = 0.0)]
    pub u_bb: f64,
    /// c–c scattering U_cc
    #[arg(long, default_value_t = 0.0)]
    pub u_cc: f64,
    /// a–b scattering U_ab
    #[arg(long, default_value_t = 0.0)]
    pub u_ab: f64,
    /// a–c scattering U_ac
    #[arg(long, default_value_t = 0.0)]
    pub u_ac: f64,
    /// b–c scattering U_bc
    #[arg(long, default_value_t = 0.0)]
    pub u_bc: f64,
    /// External potential μ_a
    #[arg(long, default_value_t = 0.0)]
    pub mu_a: f64,
    /// External potential μ_b
    #[arg(long, default_value_t = 0.0)]
    pub mu_b: f64,
    /// External potential μ_c
    #[arg(long, default_value_t = 0.0)]
    pub mu_c: f64,
    /// Sets μ_c = −αΩ√(2N)
    #[arg(long, conflicts_with = "mu_c")]
    pub alpha: Option<f64>,
    /// Sets U_cc = 4λΩ/√(2N)
    #[arg(long, conflicts_with = "u_cc")]
    pub lambda: Option<f64>,
}

impl ModelArgs {
    fn params(&self, n_total: usize) -> CliResult<ModelParams> {
        let mut p = ModelParams {
            u_aa: self.u_aa,
            u_bb: self.u_bb,
            u_cc: self.u_cc,
            u_ab: self.u_ab,
            u_ac: self.u_ac,
            u_bc: self.u_bc,
            mu_a: self.mu_a,
            mu_b: self.mu_b,
            mu_c: self.mu_c,
            omega: self.omega,
        };
        if self.alpha.is_some() || self.lambda.is_some() {
            let s = ModelParams::from_alpha_lambda(
                self.alpha.unwrap_or(0.0),
                self.lambda.unwrap_or(0.0),
                n_total,
                self.omega,
            );
            if self.alpha.is_some() {
                p.mu_c = s.mu_c;
            }
            if self.lambda.is_some() {
                p.u_cc = s.u_cc;
            }
        }
        if !p.is_finite() {
            return Err(usage("model parameters must be finite"));
        }
        Ok(p)
    }
}

#[derive(Debug, Args)]
pub struct FixedPointsArgs {
    /// Fractional imbalance k = J/N in [0, 1)
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// Coupling λ
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Coupling α
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PhaseDiagramArgs {
    /// Fractional imbalance k = J/N in [0, 1)
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// α grid
    #[arg(long, default_value = "-3:3:121", allow_hyphen_values = true)]
    pub alpha: Range,
    /// λ grid
    #[arg(long, default_value = "-2:2:121", allow_hyphen_values = true)]
    pub lambda: Range,
    /// Trace the boundary curves instead of labelling the grid
    #[arg(long)]
    pub boundaries: bool,
    /// Samples of z₀ along each tangency curve
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u32).range(2..))]
    pub z_samples: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LevelCurvesArgs {
    /// Fractional imbalance k = J/N in [0, 1)
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// Coupling λ
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Coupling α
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Energy offset β
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// z grid (default spans [2k−1, 1] with 201 points)
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<Range>,
    /// θ grid
    #[arg(
        long,
        default_value = "-6.283185307179586:6.283185307179586:201",
        allow_hyphen_values = true
    )]
    pub theta: Range,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SectorArgs {
    /// Total atom number N
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Atomic imbalance J (same parity as N)
    #[arg(long, default_value_t = 0)]
    pub j: usize,
}

impl SectorArgs {
    fn sector(&self) -> CliResult<Sector> {
        Sector::new(self.n as i64, self.j as i64).map_err(usage)
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BetheArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Only this level (0 is the ground state)
    #[arg(long)]
    pub level: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// x grid
    #[arg(long, default_value = "0.05:3:300", allow_hyphen_values = true)]
    pub x: Range,
    /// List the stationary points on x > 0 instead of sampling (needs A = 0)
    #[arg(long)]
    pub critical: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Total atom number N, or a grid of them
    #[arg(long, default_value = "500")]
    pub n: Range,
    /// Interconversion amplitude Ω
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ExpectationArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    /// α grid
    #[arg(long, default_value = "0:2:201", allow_hyphen_values = true)]
    pub alpha: Range,
    /// Coupling λ
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Interconversion amplitude Ω
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    /// Coupling α
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Coupling λ
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Interconversion amplitude Ω
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Time grid
    #[arg(long, default_value = "0:50:2000")]
    pub t: Range,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coupling {
    Alpha,
    Lambda,
}

impl Coupling {
    fn name(self) -> &'static str {
        match self {
            Coupling::Alpha => "alpha",
            Coupling::Lambda => "lambda",
        }
    }
}

#[derive(Debug, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub sector: SectorArgs,
    /// α: a grid when varied, otherwise one value (default 0:2:201 or 0)
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Range>,
    /// λ: a grid when varied, otherwise one value (default 0:2:201 or 0)
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<Range>,
    /// Coupling the curve is taken against
    #[arg(long, value_enum, default_value_t = Coupling::Alpha)]
    pub vary: Coupling,
    /// Relative perturbation Δ
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Interconversion amplitude Ω
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Also write the table of minima to this path
    #[arg(long)]
    pub minima: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Target: region, ground, fidelity, threshold, potential or dynamics
    #[arg(long)]
    pub target: String,
    /// Fixed parameter, name=value (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    pub set: Vec<SetArg>,
    /// Swept parameter, name=start:stop:count (one or two)
    #[arg(long, allow_hyphen_values = true)]
    pub axis: Vec<AxisArg>,
    /// Output column to plot (default: the first)
    #[arg(long)]
    pub plot: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

pub fn subcommand_names() -> Vec<String> {
    Cli::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect()
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::overlay(args, &subcommand_names()) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

/// CSV text of a plain table. Fields are assumed comma-free.
struct Table {
    comments: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            comments: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn csv(&self) -> Vec<u8> {
        let mut s = String::new();
        for c in &self.comments {
            s.push_str("# ");
            s.push_str(c);
            s.push('\n');
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s.into_bytes()
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn field(e: &impl fmt::Display) -> String {
    e.to_string().replace([',', '\n', '\r'], ";")
}

fn sweep_csv(r: &SweepResult) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(r, &mut buf).expect("writing to memory");
    buf
}

fn check_common(c: &Common) -> CliResult<()> {
    if c.svg && c.out.is_none() {
        return Err(usage("--svg needs --out"));
    }
    if let Some(dir) = c.out.as_ref().and_then(|p| p.parent()) {
        if !dir.as_os_str().is_empty() && !dir.is_dir() {
            return Err(usage(format!("output directory {} does not exist", dir.display())));
        }
    }
    Ok(())
}

fn check_k(k: f64) -> CliResult<()> {
    if !(0.0..1.0).contains(&k) {
        return Err(usage(format!("--k must lie in [0, 1), got {k}")));
    }
    Ok(())
}

fn check_finite(pairs: &[(&str, f64)]) -> CliResult<()> {
    match pairs.iter().find(|(_, v)| !v.is_finite()) {
        Some((name, v)) => Err(usage(format!("--{name} must be finite, got {v}"))),
        None => Ok(()),
    }
}

/// Writes the CSV and, when asked, the SVG; `plot` is only built then.
fn emit(common: &Common, csv: &[u8], plot: impl FnOnce() -> Result<Plot, String>, io: &mut Io) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, csv).map_err(|e| numeric(format!("cannot write {}: {e}", path.display())))?,
        None => io
            .stdout
            .write_all(csv)
            .map_err(|e| numeric(format!("cannot write output: {e}")))?,
    }
    if common.svg {
        let path = common.out.as_ref().expect("checked").with_extension("svg");
        let text = plot().and_then(|p| render_svg(&p)).map_err(numeric)?;
        fs::write(&path, text).map_err(|e| numeric(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn validated(spec: SweepSpec) -> CliResult<SweepSpec> {
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn run_and_emit(spec: &SweepSpec, common: &Common, outputs: &[&str], io: &mut Io) -> CliResult<()> {
    let start = Instant::now();
    let result = run_sweep(spec, common.workers as usize).map_err(numeric)?;
    let _ = writeln!(
        io.stderr,
        "{} cells on {} workers in {:.2}s",
        result.rows.len(),
        common.workers,
        start.elapsed().as_secs_f64()
    );
    emit(common, &sweep_csv(&result), || plot_sweep(&result, outputs), io)?;
    match result.failed_count() {
        0 => Ok(()),
        n => Err(numeric(format!("{n} of {} cells failed", result.rows.len()))),
    }
}

/// Standard output and error of one invocation.
struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let io = &mut Io { stdout, stderr };
    match cmd {
        Command::FixedPoints(a) => cmd_fixed_points(a, io),
        Command::PhaseDiagram(a) => cmd_phase_diagram(a, io),
        Command::LevelCurves(a) => cmd_level_curves(a, io),
        Command::Spectrum(a) => cmd_spectrum(a, io),
        Command::Bethe(a) => cmd_bethe(a, io),
        Command::Potential(a) => cmd_potential(a, io),
        Command::Threshold(a) => cmd_threshold(a, io),
        Command::Expectation(a) => cmd_expectation(a, io),
        Command::Dynamics(a) => cmd_dynamics(a, io),
        Command::Fidelity(a) => cmd_fidelity(a, io),
        Command::Sweep(a) => cmd_sweep(a, io),
    }
}

fn cmd_fixed_points(a: &FixedPointsArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    check_k(a.k)?;
    check_finite(&[("lambda", a.lambda), ("alpha", a.alpha)])?;
    let c = SemiclassicalCouplings::new(a.lambda, a.alpha);
    let region = region_classify(&c, a.k);
    let points = fixed_points(&c, a.k);
    let mut t = Table::new(&["branch", "z", "theta", "character", "theta_free", "energy"]);
    t.comments.push(format!(
        "region: {} (phi0={} phi_pi={} z_boundary={} ambiguous={})",
        region.label.as_str(),
        region.phi0,
        region.phi_pi,
        region.z_boundary,
        region.ambiguous
    ));
    for p in &points {
        t.rows.push(vec![
            p.branch.as_str().into(),
            num(p.point.z),
            num(p.point.theta),
            p.character.as_str().into(),
            (p.theta_free as u8).to_string(),
            classical_energy(p.point, &c, a.k).map(num).unwrap_or_default(),
        ]);
    }
    emit(
        &a.common,
        &t.csv(),
        || {
            let mut series: Vec<Series> = Vec::new();
            for p in &points {
                let name = p.branch.as_str();
                match series.iter_mut().find(|s| s.name == name) {
                    Some(s) => s.points.push((p.point.theta, p.point.z)),
                    None => series.push(Series {
                        name: name.into(),
                        points: vec![(p.point.theta, p.point.z)],
                    }),
                }
            }
            Ok(Plot::Lines {
                x_label: "theta".into(),
                y_label: "z".into(),
                series,
                markers: true,
            })
        },
        io,
    )
}

fn cmd_phase_diagram(a: &PhaseDiagramArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    check_k(a.k)?;
    if !a.boundaries {
        let spec = validated(
            SweepSpec::new(Target::Region)
                .fix("k", a.k)
                .axis("alpha", a.alpha.start, a.alpha.stop, a.alpha.count)
                .axis("lambda", a.lambda.start, a.lambda.stop, a.lambda.count),
        )?;
        return run_and_emit(&spec, &a.common, &["label"], io);
    }
    let curves =
        boundary_curves(a.k, &default_z_grid(a.k, a.z_samples as usize), &a.alpha.values()).map_err(numeric)?;
    let mut t = Table::new(&["curve", "source", "branch_sign", "z0", "alpha", "lambda"]);
    for (i, c) in curves.iter().enumerate() {
        let crossings: Vec<String> = lambda_zero_crossings(c).into_iter().map(num).collect();
        t.comments.push(format!(
            "curve {i}: {} sign {} lambda=0 at alpha [{}]",
            c.source.as_str(),
            c.branch_sign,
            crossings.join(" ")
        ));
        for &(z0, alpha, lambda) in &c.samples {
            t.rows.push(vec![
                i.to_string(),
                c.source.as_str().into(),
                c.branch_sign.to_string(),
                num(z0),
                num(alpha),
                num(lambda),
            ]);
        }
    }
    emit(
        &a.common,
        &t.csv(),
        || {
            let inside = |al: f64, la: f64| {
                al >= a.alpha.start && al <= a.alpha.stop && la >= a.lambda.start && la <= a.lambda.stop
            };
            let series = curves
                .iter()
                .enumerate()
                .map(|(i, c)| Series {
                    name: format!("{} {}", c.source.as_str(), i),
                    points: c
                        .samples
                        .iter()
                        .filter(|s| inside(s.1, s.2))
                        .map(|s| (s.1, s.2))
                        .collect(),
                })
                .collect();
            Ok(Plot::Lines {
                x_label: "alpha".into(),
                y_label: "lambda".into(),
                series,
                markers: false,
            })
        },
        io,
    )
}

fn cmd_level_curves(a: &LevelCurvesArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    check_k(a.k)?;
    check_finite(&[("lambda", a.lambda), ("alpha", a.alpha), ("beta", a.beta)])?;
    let zr = a.z.unwrap_or(Range {
        start: 2.0 * a.k - 1.0,
        stop: 1.0,
        count: 201,
    });
    if zr.start < 2.0 * a.k - 1.0 || zr.stop > 1.0 {
        return Err(usage(format!("--z must lie within [{}, 1]", 2.0 * a.k - 1.0)));
    }
    let c = SemiclassicalCouplings {
        lambda: a.lambda,
        alpha: a.alpha,
        beta: a.beta,
    };
    let (zs, thetas) = (zr.values(), a.theta.values());
    let grid = level_curve_grid(&c, a.k, &zs, &thetas).map_err(numeric)?;
    let mut t = Table::new(&["z", "theta", "h"]);
    for (z, row) in zs.iter().zip(&grid) {
        for (th, h) in thetas.iter().zip(row) {
            t.rows.push(vec![num(*z), num(*th), num(*h)]);
        }
    }
    emit(
        &a.common,
        &t.csv(),
        || {
            Ok(Plot::Heat {
                x_label: "z".into(),
                y_label: "theta".into(),
                xs: zs.clone(),
                ys: thetas.clone(),
                values: grid.clone(),
            })
        },
        io,
    )
}

fn cmd_spectrum(a: &SpectrumArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    let s = a.sector.sector()?;
    let p = a.model.params(s.n_total())?;
    let d = eigendecompose(&build_tridiagonal(&p, &s)).map_err(numeric)?;
    let mut t = Table::new(&["level", "energy", "z", "nc"]);
    for (n, e) in d.eigenvalues.iter().enumerate() {
        let st = d.eigenstate(n);
        t.rows.push(vec![
            n.to_string(),
            num(*e),
            num(expectation_z(&st)),
            num(expectation_nc(&st)),
        ]);
    }
    emit(
        &a.common,
        &t.csv(),
        || {
            Ok(Plot::Lines {
                x_label: "level".into(),
                y_label: "energy".into(),
                series: vec![Series {
                    name: "energy".into(),
                    points: d.eigenvalues.iter().enumerate().map(|(n, e)| (n as f64, *e)).collect(),
                }],
                markers: true,
            })
        },
        io,
    )
}

fn cmd_bethe(a: &BetheArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    let s = a.sector.sector()?;
    if let Some(l) = a.level {
        if l >= s.dim() {
            return Err(usage(format!("--level {l} exceeds the sector dimension {}", s.dim())));
        }
    }
    let p = a.model.params(s.n_total())?;
    let d = eigendecompose(&build_tridiagonal(&p, &s)).map_err(numeric)?;
    let levels: Vec<usize> = match a.level {
        Some(l) => vec![l],
        None => (0..d.dim()).collect(),
    };
    let mut t = Table::new(&[
        "level",
        "energy",
        "energy_bethe",
        "root",
        "re",
        "im",
        "bae_residual",
        "error",
    ]);
    let mut roots_all = Vec::new();
    let mut failures = 0;
    for &n in &levels {
        let e = d.eigenvalues[n];
        match bethe_roots(&p, &s, e) {
            Ok(r) => {
                let res = r.bae_residuals();
                if r.roots.is_empty() {
                    t.rows.push(vec![
                        n.to_string(),
                        num(e),
                        num(r.energy),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ]);
                }
                for (q, u) in r.roots.iter().enumerate() {
                    t.rows.push(vec![
                        n.to_string(),
                        num(e),
                        num(r.energy),
                        q.to_string(),
                        num(u.re),
                        num(u.im),
                        num(res[q]),
                        String::new(),
                    ]);
                    roots_all.push((u.re, u.im));
                }
            }
            Err(err) => {
                failures += 1;
                t.rows.push(vec![
                    n.to_string(),
                    num(e),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    field(&err),
                ]);
            }
        }
    }
    emit(
        &a.common,
        &t.csv(),
        || {
            Ok(Plot::Lines {
                x_label: "re u".into(),
                y_label: "im u".into(),
                series: vec![Series {
                    name: "roots".into(),
                    points: roots_all.clone(),
                }],
                markers: true,
            })
        },
        io,
    )?;
    match failures {
        0 => Ok(()),
        f => Err(numeric(format!("{f} of {} levels failed", levels.len()))),
    }
}

fn cmd_potential(a: &PotentialArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    let s = a.sector.sector()?;
    let p = a.model.params(s.n_total())?;
    let abc = abc_coefficients(&p, &s);
    let (n, j) = (s.n_total(), s.j_imbalance());
    if a.critical {
        if abc.a_coef != 0.0 {
            return Err(usage(format!("--critical needs A = 0, got A = {}", abc.a_coef)));
        }
        let sextic = SexticPotential::a0(abc.b_coef, abc.c_coef, p.omega, n, j);
        let report = critical_point_analysis(&sextic).map_err(numeric)?;
        let mut t = Table::new(&["x", "v", "kind"]);
        t.comments.push(format!("bifurcation: {}", report.bifurcation));
        if let Some(x) = report.degenerate_x {
            t.comments.push(format!("degenerate_x: {}", num(x)));
        }
        for sp in &report.points {
            t.rows.push(vec![num(sp.x), num(sp.value), sp.kind.as_str().into()]);
        }
        return emit(
            &a.common,
            &t.csv(),
            || {
                Ok(Plot::Lines {
                    x_label: "x".into(),
                    y_label: "V".into(),
                    series: vec![Series {
                        name: "stationary".into(),
                        points: report.points.iter().map(|sp| (sp.x, sp.value)).collect(),
                    }],
                    markers: true,
                })
            },
            io,
        );
    }
    let xs = a.x.values();
    let mut t = Table::new(&["x", "v", "error"]);
    let mut pts = Vec::new();
    let mut failures = 0;
    for &x in &xs {
        let v = if abc.a_coef == 0.0 {
            potential_a0(x, abc.b_coef, abc.c_coef, p.omega, n, j)
        } else {
            potential_general(x, &abc, p.omega, &s)
        };
        match v {
            Ok(v) => {
                t.rows.push(vec![num(x), num(v), String::new()]);
                pts.push((x, v));
            }
            Err(e) => {
                failures += 1;
                t.rows.push(vec![num(x), String::new(), field(&e)]);
            }
        }
    }
    emit(
        &a.common,
        &t.csv(),
        || {
            Ok(Plot::Lines {
                x_label: "x".into(),
                y_label: "V".into(),
                series: vec![Series {
                    name: "V".into(),
                    points: pts.clone(),
                }],
                markers: false,
            })
        },
        io,
    )?;
    match failures {
        0 => Ok(()),
        f => Err(numeric(format!("{f} of {} samples failed", xs.len()))),
    }
}

fn cmd_threshold(a: &ThresholdArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    if !(a.omega > 0.0) || !a.omega.is_finite() {
        return Err(usage("--omega must be positive"));
    }
    let spec = validated(
        SweepSpec::new(Target::Threshold)
            .fix("omega", a.omega)
            .axis("n", a.n.start, a.n.stop, a.n.count),
    )?;
    run_and_emit(&spec, &a.common, &["mu_star", "mu_exact"], io)
}

fn cmd_expectation(a: &ExpectationArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    a.sector.sector()?;
    check_finite(&[("lambda", a.lambda), ("omega", a.omega)])?;
    let spec = validated(
        SweepSpec::new(Target::Ground)
            .fix("n", a.sector.n as f64)
            .fix("j", a.sector.j as f64)
            .fix("lambda", a.lambda)
            .fix("omega", a.omega)
            .axis("alpha", a.alpha.start, a.alpha.stop, a.alpha.count),
    )?;
    run_and_emit(&spec, &a.common, &["nc"], io)
}

fn cmd_dynamics(a: &DynamicsArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    a.sector.sector()?;
    check_finite(&[("alpha", a.alpha), ("lambda", a.lambda), ("omega", a.omega)])?;
    let spec = validated(
        SweepSpec::new(Target::Dynamics)
            .fix("n", a.sector.n as f64)
            .fix("j", a.sector.j as f64)
            .fix("alpha", a.alpha)
            .fix("lambda", a.lambda)
            .fix("omega", a.omega)
            .axis("t", a.t.start, a.t.stop, a.t.count),
    )?;
    run_and_emit(&spec, &a.common, &["z"], io)
}

fn cmd_fidelity(a: &FidelityArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    let s = a.sector.sector()?;
    check_finite(&[("delta", a.delta), ("omega", a.omega)])?;
    if !(0.0..1.0).contains(&a.delta) {
        return Err(usage(format!("--delta must lie in [0, 1), got {}", a.delta)));
    }
    let swept = Range {
        start: 0.0,
        stop: 2.0,
        count: 201,
    };
    let (grid, fixed, fixed_name) = match a.vary {
        Coupling::Alpha => (
            a.alpha.unwrap_or(swept),
            a.lambda.unwrap_or(Range::single(0.0)),
            "lambda",
        ),
        Coupling::Lambda => (
            a.lambda.unwrap_or(swept),
            a.alpha.unwrap_or(Range::single(0.0)),
            "alpha",
        ),
    };
    if fixed.count != 1 {
        return Err(usage(format!(
            "--{fixed_name} takes one value when --vary is {}",
            a.vary.name()
        )));
    }
    let (n, omega, other) = (s.n_total(), a.omega, fixed.start);
    let vary = a.vary;
    let family = move |d: f64| match vary {
        Coupling::Alpha => ModelParams::from_alpha_lambda(d, other, n, omega),
        Coupling::Lambda => ModelParams::from_alpha_lambda(other, d, n, omega),
    };
    let grid_values = grid.values();
    let curve = with_workers(a.common.workers as usize, || {
        fidelity_curve(family, &s, a.delta, &grid_values)
    })
    .map_err(numeric)?;
    let name = a.vary.name();
    let mut minima = Table::new(&[name, "w", "refined"]);
    for m in &curve.minima {
        minima
            .rows
            .push(vec![num(m.coupling), num(m.overlap), (m.refined as u8).to_string()]);
    }
    let mut t = Table::new(&[name, "w", "flagged"]);
    t.comments.push(format!(
        "n={} j={} delta={:?} {fixed_name}={:?} omega={:?}",
        s.n_total(),
        s.j_imbalance(),
        a.delta,
        other,
        omega
    ));
    for m in &curve.minima {
        t.comments.push(format!(
            "minimum: {name}={} w={} refined={}",
            num(m.coupling),
            num(m.overlap),
            m.refined
        ));
    }
    for ((c, w), f) in curve.couplings.iter().zip(&curve.overlaps).zip(&curve.flagged) {
        t.rows.push(vec![
            num(*c),
            if *f { String::new() } else { num(*w) },
            (*f as u8).to_string(),
        ]);
    }
    if let Some(path) = &a.minima {
        fs::write(path, minima.csv()).map_err(|e| numeric(format!("cannot write {}: {e}", path.display())))?;
    }
    emit(
        &a.common,
        &t.csv(),
        || {
            Ok(Plot::Lines {
                x_label: name.into(),
                y_label: "W".into(),
                series: vec![Series {
                    name: "W".into(),
                    points: curve
                        .couplings
                        .iter()
                        .zip(&curve.overlaps)
                        .map(|(c, w)| (*c, *w))
                        .collect(),
                }],
                markers: curve.couplings.len() == 1,
            })
        },
        io,
    )
}

fn cmd_sweep(a: &SweepArgs, io: &mut Io) -> CliResult<()> {
    check_common(&a.common)?;
    let target: Target = a.target.parse().map_err(usage)?;
    let mut spec = SweepSpec::new(target);
    for s in &a.set {
        if spec.fixed.contains_key(&s.name) {
            return Err(usage(format!("--set {} given twice", s.name)));
        }
        spec = spec.fix(&s.name, s.value);
    }
    for ax in &a.axis {
        spec = spec.axis(&ax.name, ax.range.start, ax.range.stop, ax.range.count);
    }
    let spec = validated(spec)?;
    let column = match &a.plot {
        Some(c) if !target.outputs().contains(&c.as_str()) => {
            return Err(usage(format!("target '{target}' has no output '{c}'")));
        }
        Some(c) => c.clone(),
        None => target.outputs()[0].to_string(),
    };
    run_and_emit(&spec, &a.common, &[column.as_str()], io)
}
