//! Command-line front door: configuration parsing, dispatch, and
//! machine-readable reports.
//!
//! Exit codes partition failures for scripting: 0 success, 2 usage,
//! 3 validation (model outside its domain), 4 numerical (non-convergence
//! or resource caps). Every run writes `report.json` with the resolved
//! configuration, the library version and any errors; curve commands add
//! one CSV per command. All files are written to a temp name first and
//! renamed into place.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::asymptotics;
use crate::bounds;
use crate::error::Error;
use crate::montecarlo::{self, MCConfig};
use crate::numerics;
use crate::params::{self, DecayParams};
use crate::potential::ImpurityPotential;

mod svg;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(m) => CliError::Validation(m),
            Error::Convergence(m) | Error::Resource(m) | Error::Fit(m) => {
                CliError::Numerical(m)
            }
        }
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn parse_nonnegative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be nonnegative, got {v}"))
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 2.0 {
        Ok(v)
    } else {
        Err(format!("alpha must exceed 2, got {v}"))
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "lifshits",
    version,
    about = "Computes and cross-verifies the Laplace-domain and energy-domain \
             constants of the anisotropic decay model, the sandwich bounds, and \
             their Monte Carlo counterparts"
)]
struct Cli {
    /// JSON configuration file; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Potential amplitude g > 0
    #[arg(long, global = true, value_parser = parse_positive, allow_hyphen_values = true)]
    g: Option<f64>,

    /// Transverse decay exponent alpha > 2
    #[arg(long, global = true, value_parser = parse_alpha, allow_hyphen_values = true)]
    alpha: Option<f64>,

    /// Anisotropy exponent beta >= 0 (0 selects the max pseudo-norm)
    #[arg(long, global = true, value_parser = parse_nonnegative, allow_hyphen_values = true)]
    beta: Option<f64>,

    /// Longitudinal decay exponent gamma > 0
    #[arg(long, global = true, value_parser = parse_positive, allow_hyphen_values = true)]
    gamma: Option<f64>,

    /// Impurity concentration rho > 0
    #[arg(long, global = true, value_parser = parse_positive, allow_hyphen_values = true)]
    rho: Option<f64>,

    /// Magnetic field strength B >= 0
    #[arg(long = "B", global = true, value_parser = parse_nonnegative, allow_hyphen_values = true)]
    b: Option<f64>,

    /// Origin regularizer of the canonical potential
    #[arg(long, global = true, value_parser = parse_positive, allow_hyphen_values = true)]
    epsilon: Option<f64>,

    /// Monte Carlo master seed
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte Carlo sample budget
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Sampling-ball radius
    #[arg(long, global = true, value_parser = parse_positive, allow_hyphen_values = true)]
    radius: Option<f64>,

    /// Worker threads for Monte Carlo (results are worker-independent)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Single Laplace time t
    #[arg(long, global = true, value_parser = parse_positive, allow_hyphen_values = true)]
    t: Option<f64>,

    /// Comma-separated t grid, strictly increasing
    #[arg(long = "t-grid", global = true)]
    t_grid: Option<String>,

    /// Comma-separated energy grid, strictly increasing
    #[arg(long = "E-grid", global = true)]
    e_grid: Option<String>,

    /// Output directory
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,

    /// Also emit SVG line plots for curve commands
    #[arg(long, global = true)]
    svg: bool,

    #[command(subcommand)]
    command: Option<CommandKind>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum CommandKind {
    /// Derived exponents, validity report and all closed-form constants
    Constants,
    /// Closed-form Laplace constant vs quadrature across the parameter sweep
    VerifyIntegral,
    /// Both sandwich bounds over the t grid
    BoundsCurve,
    /// Monte Carlo check of the Poisson-functional Laplace identity
    McCampbell,
    /// Monte Carlo classical integrated density of states over the E grid
    McIdos,
    /// Smearing-lemma ratio at x = (1,0,0) over the t grid
    #[command(name = "lemma1")]
    Lemma1,
    /// Forward Tauberian oracle curve for the inverted constant
    TauberianOracle,
    /// Full consistency report plus sandwich curve and Campbell check
    Report,
}

impl CommandKind {
    fn as_str(self) -> &'static str {
        match self {
            CommandKind::Constants => "constants",
            CommandKind::VerifyIntegral => "verify-integral",
            CommandKind::BoundsCurve => "bounds-curve",
            CommandKind::McCampbell => "mc-campbell",
            CommandKind::McIdos => "mc-idos",
            CommandKind::Lemma1 => "lemma1",
            CommandKind::TauberianOracle => "tauberian-oracle",
            CommandKind::Report => "report",
        }
    }

    fn from_str(s: &str) -> Option<Self> {
        Some(match s {
            "constants" => CommandKind::Constants,
            "verify-integral" => CommandKind::VerifyIntegral,
            "bounds-curve" => CommandKind::BoundsCurve,
            "mc-campbell" => CommandKind::McCampbell,
            "mc-idos" => CommandKind::McIdos,
            "lemma1" => CommandKind::Lemma1,
            "tauberian-oracle" => CommandKind::TauberianOracle,
            "report" => CommandKind::Report,
            _ => return None,
        })
    }
}

// ---- config file schema; unknown keys are rejected at every level ----

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    params: Option<FileParams>,
    command: Option<String>,
    mc: Option<FileMc>,
    grids: Option<FileGrids>,
    output: Option<FileOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileParams {
    g: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    rho: Option<f64>,
    #[serde(rename = "B", alias = "b")]
    b: Option<f64>,
    epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileMc {
    seed: Option<u64>,
    n: Option<usize>,
    radius: Option<f64>,
    workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGrids {
    t: Option<f64>,
    t_grid: Option<Vec<f64>>,
    #[serde(rename = "E_grid", alias = "e_grid")]
    e_grid: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    dir: Option<PathBuf>,
    svg: Option<bool>,
}

/// Fully resolved run configuration (defaults, then file, then flags).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: DecayParams,
    pub command: String,
    pub mc: MCConfig,
    pub t: f64,
    pub t_grid: Vec<f64>,
    pub e_grid: Vec<f64>,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let vals: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    vals.map_err(|e| CliError::Usage(format!("bad grid value in '{s}': {e}")))
}

fn check_grid(grid: &[f64], name: &str) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Usage(format!("{name} must not be empty")));
    }
    if grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!(
            "{name} must be strictly increasing and positive"
        )));
    }
    Ok(())
}

/// Resolves the run configuration from argv and the optional config file.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = Cli::command()
        .try_get_matches_from(argv)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;
    resolve(cli)
}

fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::Usage(format!("bad config {}: {e}", path.display()))
            })?
        }
        None => FileConfig::default(),
    };

    let command = match (&cli.command, &file.command) {
        (Some(c), _) => *c,
        (None, Some(name)) => CommandKind::from_str(name).ok_or_else(|| {
            CliError::Usage(format!("unknown command '{name}' in config file"))
        })?,
        (None, None) => {
            return Err(CliError::Usage(
                "no command given; pass a subcommand or set \"command\" in the config".into(),
            ))
        }
    };

    let fp = file.params.unwrap_or_default();
    let params = DecayParams {
        g: cli.g.or(fp.g).unwrap_or(1.0),
        alpha: cli.alpha.or(fp.alpha).unwrap_or(4.0),
        beta: cli.beta.or(fp.beta).unwrap_or(4.0),
        gamma: cli.gamma.or(fp.gamma).unwrap_or(4.0),
        rho: cli.rho.or(fp.rho).unwrap_or(1.0),
        b: cli.b.or(fp.b).unwrap_or(1.0),
        epsilon: cli.epsilon.or(fp.epsilon).unwrap_or(1.0),
    };

    let fm = file.mc.unwrap_or_default();
    let mc = MCConfig {
        seed: cli.seed.or(fm.seed).unwrap_or(42),
        n_samples: cli.n.or(fm.n).unwrap_or(20_000),
        radius: cli.radius.or(fm.radius).unwrap_or(50.0),
        workers: cli.workers.or(fm.workers).unwrap_or(1),
    };

    let fg = file.grids.unwrap_or_default();
    let t = cli.t.or(fg.t).unwrap_or(10.0);
    let t_grid = match (&cli.t_grid, &fg.t_grid) {
        (Some(s), _) => parse_grid(s)?,
        (None, Some(v)) => v.clone(),
        (None, None) => match command {
            // the oracle converges slowly; give it a denser, earlier grid
            CommandKind::TauberianOracle => (0..9)
                .map(|k| 10f64.powf(2.0 + 0.5 * k as f64))
                .collect(),
            _ => vec![1e3, 1e4, 1e5, 1e6],
        },
    };
    let e_grid = match (&cli.e_grid, &fg.e_grid) {
        (Some(s), _) => parse_grid(s)?,
        (None, Some(v)) => v.clone(),
        (None, None) => vec![1.0, 1.5, 2.0, 3.0],
    };
    check_grid(&t_grid, "t grid")?;
    check_grid(&e_grid, "E grid")?;
    if !(t > 0.0) {
        return Err(CliError::Usage(format!("t must be positive, got {t}")));
    }

    let fo = file.output.unwrap_or_default();
    let output_dir = cli.out.or(fo.dir).unwrap_or_else(|| PathBuf::from("."));
    let emit_svg = cli.svg || fo.svg.unwrap_or(false);

    Ok(RunConfig {
        params,
        command: command.as_str().to_string(),
        mc,
        t,
        t_grid,
        e_grid,
        output_dir,
        emit_svg,
    })
}

// ---- output helpers ----

fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: &[Vec<f64>],
) -> Result<PathBuf, CliError> {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut line = String::new();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            let _ = write!(line, "{v}");
        }
        out.push_str(&line);
        out.push('\n');
    }
    let path = dir.join(name);
    write_atomic(&path, &out)?;
    Ok(path)
}

// ---- dispatch ----

/// Runs the resolved configuration and writes `report.json` (plus any
/// per-command CSV files); returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    if let Err(e) = std::fs::create_dir_all(&config.output_dir) {
        eprintln!(
            "cannot create output dir {}: {e}",
            config.output_dir.display()
        );
        return 2;
    }
    let outcome = dispatch(config);
    let (code, results, errors) = match outcome {
        Ok(v) => (0, v, Vec::new()),
        Err(e) => {
            eprintln!("{e}");
            (e.exit_code(), serde_json::Value::Null, vec![e.to_string()])
        }
    };
    let report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": config.command,
        "config": config,
        "results": results,
        "errors": errors,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Err(e) = write_atomic(&config.output_dir.join("report.json"), &text) {
        eprintln!("{e}");
        return if code == 0 { 2 } else { code };
    }
    code
}

fn require_theorem(params: &DecayParams) -> Result<(), CliError> {
    let report = params::validate(params);
    if !report.theorem_applies {
        return Err(CliError::Validation(report.messages.join("; ")));
    }
    Ok(())
}

fn dispatch(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    config.params.check_fields().map_err(CliError::from)?;
    let command = CommandKind::from_str(&config.command)
        .ok_or_else(|| CliError::Usage(format!("unknown command '{}'", config.command)))?;
    match command {
        CommandKind::Constants => cmd_constants(config),
        CommandKind::VerifyIntegral => cmd_verify_integral(config),
        CommandKind::BoundsCurve => cmd_bounds_curve(config),
        CommandKind::McCampbell => cmd_mc_campbell(config),
        CommandKind::McIdos => cmd_mc_idos(config),
        CommandKind::Lemma1 => cmd_lemma1(config),
        CommandKind::TauberianOracle => cmd_tauberian(config),
        CommandKind::Report => cmd_report(config),
    }
}

fn cmd_constants(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let p = &config.params;
    let validity = params::validate(p);
    if !validity.theorem_applies {
        // still a structured report, but the run fails validation
        return Err(CliError::Validation(validity.messages.join("; ")));
    }
    let derived = params::derive(p).map_err(CliError::from)?;
    let a_closed = params::laplace_constant_closed(p).map_err(CliError::from)?;
    let c_paper = params::lifshits_constant_paper(p).map_err(CliError::from)?;
    let c_legendre =
        params::lifshits_constant_legendre(a_closed, derived.mu).map_err(CliError::from)?;
    println!(
        "eta = {}  mu = {}  a_closed = {}  C_paper = {}  C_legendre = {}",
        derived.eta, derived.mu, a_closed, c_paper, c_legendre
    );
    Ok(json!({
        "derived": derived,
        "validity": validity,
        "a_closed": a_closed,
        "c_paper": c_paper,
        "c_legendre": c_legendre,
    }))
}

/// The verification sweep: spans the admissible window, including the
/// isotropic point, a genuinely anisotropic one and the max-norm limit.
pub fn verification_sweep() -> Vec<DecayParams> {
    vec![
        DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap(),
        DecayParams::new(1.0, 4.0, 2.0, 5.0, 1.0, 1.0).unwrap(),
        DecayParams::new(1.0, 3.5, 3.5, 3.5, 1.0, 1.0).unwrap(),
        DecayParams::new(2.0, 4.5, 4.5, 4.5, 1.0, 1.0).unwrap(),
        DecayParams::new(1.0, 4.0, 0.0, 4.0, 1.0, 1.0).unwrap(),
    ]
}

fn cmd_verify_integral(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for p in verification_sweep() {
        let a_closed = params::laplace_constant_closed(&p).map_err(CliError::from)?;
        let quad = numerics::i_infinity(&p, 1e-7).map_err(CliError::from)?;
        let a_quad = p.rho * quad.value;
        let rel_dev = (a_quad - a_closed).abs() / a_closed;
        println!(
            "alpha={} beta={} gamma={} g={}: closed={} quad={} rel_dev={:.3e}",
            p.alpha, p.beta, p.gamma, p.g, a_closed, a_quad, rel_dev
        );
        rows.push(vec![p.alpha, p.beta, p.gamma, p.g, a_closed, a_quad, rel_dev]);
        entries.push(json!({
            "alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "g": p.g,
            "a_closed": a_closed, "a_quadrature": a_quad, "rel_dev": rel_dev,
        }));
    }
    write_csv(
        &config.output_dir,
        "sweep.csv",
        "alpha,beta,gamma,g,a_closed,a_quadrature,rel_dev",
        &rows,
    )?;
    Ok(json!({ "sweep": entries }))
}

fn bounds_curve_rows(config: &RunConfig) -> Result<Vec<bounds::SandwichPoint>, CliError> {
    let p = &config.params;
    require_theorem(p)?;
    if !(p.b > 0.0) {
        return Err(CliError::Validation(
            "the sandwich lower bound requires B > 0".into(),
        ));
    }
    let u = ImpurityPotential::canonical(p.clone());
    let profile = bounds::make_profile(p).map_err(CliError::from)?;
    bounds::bounds_curve(&config.t_grid, p, &u, &profile).map_err(CliError::from)
}

fn cmd_bounds_curve(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let points = bounds_curve_rows(config)?;
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|s| vec![s.t, s.lower_log, s.upper_log, s.scaled_lower, s.scaled_upper])
        .collect();
    write_csv(
        &config.output_dir,
        "bounds_curve.csv",
        "t,lower_log,upper_log,scaled_lower,scaled_upper",
        &rows,
    )?;
    if config.emit_svg {
        let lower: Vec<(f64, f64)> = points.iter().map(|s| (s.t, s.scaled_lower)).collect();
        let upper: Vec<(f64, f64)> = points.iter().map(|s| (s.t, s.scaled_upper)).collect();
        svg::line_plot(
            &config.output_dir.join("bounds_curve.svg"),
            "scaled sandwich bounds",
            "log10 t",
            "t^{-3/eta} log bound",
            &[("scaled_lower", &lower), ("scaled_upper", &upper)],
            true,
        )
        .map_err(|e| CliError::Usage(format!("cannot write svg: {e}")))?;
    }
    for s in &points {
        println!(
            "t={}: lower={} upper={} scaled_lower={} scaled_upper={}",
            s.t, s.lower_log, s.upper_log, s.scaled_lower, s.scaled_upper
        );
    }
    Ok(serde_json::to_value(&points).expect("serializable"))
}

fn cmd_mc_campbell(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let p = &config.params;
    let u = ImpurityPotential::canonical(p.clone());
    let check =
        montecarlo::campbell_laplace_mc(&u, p, config.t, &config.mc).map_err(CliError::from)?;
    println!(
        "t={}: mc_mean={} std_err={} reference={} z={}",
        check.t, check.mc.mean, check.mc.std_err, check.reference, check.z_score
    );
    write_csv(
        &config.output_dir,
        "campbell.csv",
        "t,mc_mean,std_err,reference,z_score",
        &[vec![
            check.t,
            check.mc.mean,
            check.mc.std_err,
            check.reference,
            check.z_score,
        ]],
    )?;
    Ok(serde_json::to_value(&check).expect("serializable"))
}

fn cmd_mc_idos(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let p = &config.params;
    let u = ImpurityPotential::canonical(p.clone());
    let results = montecarlo::classical_idos_mc_grid(&u, p, &config.e_grid, &config.mc)
        .map_err(CliError::from)?;
    let mut rows = Vec::new();
    for (e, r) in config.e_grid.iter().zip(&results) {
        let free = montecarlo::classical_idos_free(*e);
        println!("E={e}: mean={} std_err={} free={free}", r.mean, r.std_err);
        rows.push(vec![*e, r.mean, r.std_err, free]);
    }
    write_csv(
        &config.output_dir,
        "idos.csv",
        "E,mean,std_err,free_value",
        &rows,
    )?;
    Ok(serde_json::to_value(&results).expect("serializable"))
}

fn cmd_lemma1(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let p = &config.params;
    require_theorem(p)?;
    if !(p.b > 0.0) {
        return Err(CliError::Validation(
            "the smearing kernel requires B > 0".into(),
        ));
    }
    let u = ImpurityPotential::canonical(p.clone());
    let profile = bounds::make_profile(p).map_err(CliError::from)?;
    let mut rows = Vec::new();
    for &t in &config.t_grid {
        let ratio =
            bounds::lemma1_ratio([1.0, 0.0, 0.0], t, p, &u, &profile).map_err(CliError::from)?;
        println!("t={t}: ratio={ratio}");
        rows.push(vec![t, ratio]);
    }
    write_csv(&config.output_dir, "lemma1.csv", "t,ratio", &rows)?;
    Ok(json!({ "x": [1.0, 0.0, 0.0], "rows": rows }))
}

fn cmd_tauberian(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let p = &config.params;
    require_theorem(p)?;
    let derived = params::derive(p).map_err(CliError::from)?;
    let a_closed = params::laplace_constant_closed(p).map_err(CliError::from)?;
    let c_legendre =
        params::lifshits_constant_legendre(a_closed, derived.mu).map_err(CliError::from)?;
    let curve = asymptotics::tauberian_forward_oracle(c_legendre, derived.mu, &config.t_grid)
        .map_err(CliError::from)?;
    let nu = derived.mu / (derived.mu + 1.0);
    let mut rows = Vec::new();
    let mut scaled_series = Vec::new();
    for &(t, nll) in &curve {
        let scaled = nll * t.powf(-nu);
        println!("t={t}: -logL={nll} scaled={scaled}");
        rows.push(vec![t, nll, scaled]);
        scaled_series.push((t, scaled));
    }
    write_csv(
        &config.output_dir,
        "tauberian.csv",
        "t,neg_log_L,scaled",
        &rows,
    )?;
    if config.emit_svg {
        svg::line_plot(
            &config.output_dir.join("tauberian.svg"),
            "forward oracle",
            "log10 t",
            "-log L(t) / t^{mu/(mu+1)}",
            &[("scaled", &scaled_series)],
            true,
        )
        .map_err(|e| CliError::Usage(format!("cannot write svg: {e}")))?;
    }
    Ok(json!({
        "c_legendre": c_legendre,
        "mu": derived.mu,
        "target_a": a_closed,
        "rows": rows,
    }))
}

fn cmd_report(config: &RunConfig) -> Result<serde_json::Value, CliError> {
    let p = &config.params;
    require_theorem(p)?;
    let consistency = asymptotics::consistency_report(p).map_err(CliError::from)?;
    println!(
        "a_closed={} a_quadrature={} (rel dev {:.3e})",
        consistency.a_closed, consistency.a_quadrature, consistency.a_rel_deviation
    );
    println!(
        "C_paper={} -> oracle {}; C_legendre={} -> oracle {}; verdict: {}",
        consistency.c_paper,
        consistency.oracle_at_c_paper,
        consistency.c_legendre,
        consistency.oracle_at_c_legendre,
        consistency.verdict
    );
    let sandwich = bounds_curve_rows(config)?;
    let rows: Vec<Vec<f64>> = sandwich
        .iter()
        .map(|s| vec![s.t, s.lower_log, s.upper_log, s.scaled_lower, s.scaled_upper])
        .collect();
    write_csv(
        &config.output_dir,
        "bounds_curve.csv",
        "t,lower_log,upper_log,scaled_lower,scaled_upper",
        &rows,
    )?;
    let u = ImpurityPotential::canonical(p.clone());
    let campbell =
        montecarlo::campbell_laplace_mc(&u, p, config.t, &config.mc).map_err(CliError::from)?;
    write_csv(
        &config.output_dir,
        "campbell.csv",
        "t,mc_mean,std_err,reference,z_score",
        &[vec![
            campbell.t,
            campbell.mc.mean,
            campbell.mc.std_err,
            campbell.reference,
            campbell.z_score,
        ]],
    )?;
    println!(
        "campbell t={}: z={} ({} shells)",
        campbell.t, campbell.z_score, campbell.shells
    );
    Ok(json!({
        "consistency": consistency,
        "sandwich": sandwich,
        "campbell": campbell,
    }))
}

/// Library-level entry point: parse argv, run, return the exit code.
pub fn main_from_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    // let clap handle --help/--version displays with exit 0
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    match Cli::command().try_get_matches_from(args.clone()) {
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 2;
        }
        Ok(_) => {}
    }
    match parse_config(args) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_flags() {
        let cfg = parse_config([
            "lifshits",
            "constants",
            "--alpha",
            "4",
            "--beta",
            "4",
            "--gamma",
            "4",
            "--g",
            "1",
            "--rho",
            "1",
            "--B",
            "1",
        ])
        .unwrap();
        assert_eq!(cfg.command, "constants");
        assert_eq!(cfg.params.alpha, 4.0);
        assert_eq!(cfg.params.b, 1.0);
    }

    #[test]
    fn negative_beta_is_usage_error() {
        let err = parse_config(["lifshits", "constants", "--beta", "-1"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn no_command_is_usage_error() {
        let err = parse_config(["lifshits"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn grids_must_increase() {
        let err =
            parse_config(["lifshits", "bounds-curve", "--t-grid", "10,10"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn command_name_round_trip() {
        for name in [
            "constants",
            "verify-integral",
            "bounds-curve",
            "mc-campbell",
            "mc-idos",
            "lemma1",
            "tauberian-oracle",
            "report",
        ] {
            assert_eq!(CommandKind::from_str(name).unwrap().as_str(), name);
        }
    }
}
