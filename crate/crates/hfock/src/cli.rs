//! `hfock` subcommands.
//!
//! Exit codes: 0 success or "satisfied", 1 "violated", 2 parse or validation
//! error, 3 numeric or output failure, 4 "inconclusive".

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hfock_core::berezin::{BerezinTransform, GridSpec, ScalarField};
use hfock_core::criteria::{self, Probe, Report, Verdict};
use hfock_core::measure::{avg_function, covering_multiplicity, lattice_points};
use hfock_core::operator::{assemble, default_cut, spectrum, trace_identity_of};
use hfock_core::{DensityProfile, Error, FockConfig, LatticeSpec, Measure, QuadratureSpec};
use serde::Serialize;

use crate::format::sci;
use crate::measure_file::{parse_measure, parse_symbol, ParseError};
use crate::output;
use crate::settings::{load_config, Overrides, Settings, SettingsError};

/// Largest basis cut chosen by default.
pub const DEFAULT_CUT_CAP: usize = 60;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hfock", version, about = "Toeplitz operators on the harmonic Fock space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Measure file (JSON)
    pub measure: PathBuf,
    /// TOML file with defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, clap::Args)]
pub struct LatticeArgs {
    /// TOML file with defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the Berezin transform on the probe grid (`berezin.csv`)
    Berezin(Common),
    /// Sample the averaging function μ(B(z,r))/(πr²) on the probe grid (`average.csv`)
    Field(Common),
    /// Run a diagnostic and write `report-<kind>.json`
    Report {
        #[arg(value_enum)]
        kind: ReportArg,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated matrix, spectrum and trace quantities of T_μ
    Operator(Common),
    /// Lattice points and covering multiplicity
    Lattice(LatticeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Carleson,
    Vanishing,
    Bounded,
    Compact,
    Schatten,
    SymbolSchatten,
}

impl ReportArg {
    fn name(self) -> &'static str {
        match self {
            ReportArg::Carleson => "carleson",
            ReportArg::Vanishing => "vanishing",
            ReportArg::Bounded => "bounded",
            ReportArg::Compact => "compact",
            ReportArg::Schatten => "schatten",
            ReportArg::SymbolSchatten => "symbol-schatten",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::DegreeTooHigh { .. } | Error::Empty(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SettingsError> for CliError {
    fn from(e: SettingsError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Numeric(format!("cannot write {}: {e}", path.display()))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    output::write(dir, name, contents).map_err(|e| io_error(&dir.join(name), e))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn settings(config: Option<&Path>, overrides: &Overrides) -> Result<Settings, CliError> {
    let file = match config {
        Some(p) => load_config(p)?,
        None => Overrides::default(),
    };
    Ok(Settings::resolve(overrides.clone().or(file))?)
}

fn fock(s: &Settings) -> Result<FockConfig, CliError> {
    Ok(FockConfig::new(s.alpha, s.convention.into())?)
}

fn probe_for_measure(s: &mut Settings, cfg: &FockConfig, mu: &Measure) -> Result<Probe, CliError> {
    let base = Probe::for_measure(cfg, mu);
    let probe = Probe::new(s.window.unwrap_or(base.window), s.probe_step.unwrap_or(base.step))?;
    s.window = Some(probe.window);
    s.probe_step = Some(probe.step);
    Ok(probe)
}

fn cuts_for(s: &mut Settings, n: usize) -> Vec<usize> {
    let cuts = s.trunc.clone().unwrap_or_else(|| {
        let n = n.clamp(2, DEFAULT_CUT_CAP);
        vec![n.div_ceil(2), n]
    });
    s.trunc = Some(cuts.clone());
    cuts
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Berezin(c) => cmd_berezin(&c),
        Command::Field(c) => cmd_field(&c),
        Command::Report { kind, common } => cmd_report(kind, &common),
        Command::Operator(c) => cmd_operator(&c),
        Command::Lattice(l) => cmd_lattice(&l),
    }
}

struct Loaded {
    settings: Settings,
    cfg: FockConfig,
    mu: Measure,
    quad: QuadratureSpec,
}

fn load(c: &Common) -> Result<Loaded, CliError> {
    let settings = settings(c.config.as_deref(), &c.overrides)?;
    let mu = parse_measure(&read(&c.measure)?)?;
    let cfg = fock(&settings)?;
    let quad = settings.quadrature(mu.extent());
    quad.validate()?;
    Ok(Loaded {
        settings,
        cfg,
        mu,
        quad,
    })
}

fn inner_grid(probe: &Probe) -> Result<GridSpec, CliError> {
    Ok(GridSpec::centered(probe.window, probe.step)?)
}

pub fn cmd_berezin(c: &Common) -> Result<i32, CliError> {
    let mut l = load(c)?;
    let probe = probe_for_measure(&mut l.settings, &l.cfg, &l.mu)?;
    let transform = BerezinTransform::new(&l.cfg, &l.mu, &l.quad)?;
    let field = ScalarField::sample(inner_grid(&probe)?, "berezin transform", |z| transform.at(z))?;
    let path = write(&l.settings.out, "berezin.csv", &output::field_csv(&field))?;
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

pub fn cmd_field(c: &Common) -> Result<i32, CliError> {
    let mut l = load(c)?;
    let probe = probe_for_measure(&mut l.settings, &l.cfg, &l.mu)?;
    let r = l.settings.r;
    let field = ScalarField::sample(inner_grid(&probe)?, "averaging function", |z| avg_function(&l.mu, z, r, &l.quad))?;
    let path = write(&l.settings.out, "average.csv", &output::field_csv(&field))?;
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Echo<'a> {
    settings: &'a Settings,
    quadrature: &'a QuadratureSpec,
    report: &'a Report,
}

fn symbol_extent(phi: &DensityProfile) -> f64 {
    let reach = phi.reach();
    if reach.is_finite() {
        reach
    } else {
        0.0
    }
}

pub fn cmd_report(kind: ReportArg, c: &Common) -> Result<i32, CliError> {
    let mut s = settings(c.config.as_deref(), &c.overrides)?;
    let cfg = fock(&s)?;
    let text = read(&c.measure)?;
    let (report, quad) = if kind == ReportArg::SymbolSchatten {
        let phi = parse_symbol(&text)?;
        let quad = s.quadrature(symbol_extent(&phi));
        quad.validate()?;
        let base = Probe::for_symbol(&cfg, &phi);
        let probe = Probe::new(s.window.unwrap_or(base.window), s.probe_step.unwrap_or(base.step))?;
        s.window = Some(probe.window);
        s.probe_step = Some(probe.step);
        let cuts = cuts_for(&mut s, default_cut(cfg.alpha, symbol_extent(&phi)));
        (criteria::symbol_schatten_report(&cfg, &phi, s.p, s.r, &cuts, &probe, &quad)?, quad)
    } else {
        let mu = parse_measure(&text)?;
        let quad = s.quadrature(mu.extent());
        quad.validate()?;
        let probe = probe_for_measure(&mut s, &cfg, &mu)?;
        let radii = criteria::default_radii(&probe);
        let report = match kind {
            ReportArg::Carleson => criteria::carleson_report(&cfg, &mu, s.r, &probe, &quad)?,
            ReportArg::Vanishing => criteria::vanishing_report(&cfg, &mu, s.r, &radii, &quad)?,
            ReportArg::Bounded => {
                let cuts = cuts_for(&mut s, default_cut(cfg.alpha, mu.extent()));
                criteria::boundedness_report(&cfg, &mu, &cuts, &probe, &quad)?
            }
            ReportArg::Compact => {
                let cuts = cuts_for(&mut s, default_cut(cfg.alpha, mu.extent()));
                criteria::compactness_report(&cfg, &mu, &cuts, s.r, &radii, &quad)?
            }
            ReportArg::Schatten => {
                let cuts = cuts_for(&mut s, default_cut(cfg.alpha, mu.extent()));
                let extent = s.extent.unwrap_or_else(|| (probe.window / s.r).ceil() as usize);
                s.extent = Some(extent);
                let lattice = LatticeSpec::new(s.r, extent)?;
                criteria::schatten_report(&cfg, &mu, s.p, s.r, &lattice, &cuts, &probe, &quad)?
            }
            ReportArg::SymbolSchatten => unreachable!("handled above"),
        };
        (report, quad)
    };
    let echo = Echo {
        settings: &s,
        quadrature: &quad,
        report: &report,
    };
    let name = format!("report-{}.json", kind.name());
    let path = write(&s.out, &name, &output::json(&echo))?;
    let verdict = match report.verdict {
        Verdict::Satisfied => "satisfied",
        Verdict::Violated => "violated",
        Verdict::Inconclusive => "inconclusive",
    };
    println!("{} {verdict} ({})", kind.name(), path.display());
    Ok(match report.verdict {
        Verdict::Satisfied => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

pub fn cmd_operator(c: &Common) -> Result<i32, CliError> {
    let mut l = load(c)?;
    let cuts = cuts_for(&mut l.settings, default_cut(l.cfg.alpha, l.mu.extent()));
    let cut = *cuts.last().expect("cuts are nonempty");
    let op = assemble(&l.cfg, &l.mu, cut, &l.quad)?;
    let spec = spectrum(&op)?;
    let trace = trace_identity_of(&op, &l.mu, &l.quad)?;
    let out = &l.settings.out;
    write(out, "matrix.csv", &output::matrix_csv(&op))?;
    write(out, "spectrum.csv", &output::spectrum_csv(&spec))?;
    let echo = [
        ("alpha", sci(l.cfg.alpha)),
        ("convention", format!("{:?}", l.settings.convention).to_lowercase()),
    ];
    let path = write(out, "trace.txt", &output::trace_text(&trace, cut, &echo))?;
    println!("wrote matrix.csv, spectrum.csv, {}", path.display());
    Ok(EXIT_OK)
}

pub fn cmd_lattice(l: &LatticeArgs) -> Result<i32, CliError> {
    let s = settings(l.config.as_deref(), &l.overrides)?;
    let spec = LatticeSpec::new(s.r, s.extent.unwrap_or(3))?;
    let points = lattice_points(&spec);
    write(&s.out, "lattice.csv", &output::points_csv(&points))?;
    let probe = GridSpec::with_count(0.5 * s.r, 101)?;
    let count = covering_multiplicity(&spec, s.factor, &probe)?;
    let text = format!(
        "r {}\nextent {}\nfactor {}\ncell_area {}\ncovering_multiplicity {count}\n",
        sci(s.r),
        spec.extent,
        sci(s.factor),
        sci(hfock_core::measure::cell_area(&spec))
    );
    let path = write(&s.out, "covering.txt", &text)?;
    println!("covering multiplicity {count} ({})", path.display());
    Ok(EXIT_OK)
}
