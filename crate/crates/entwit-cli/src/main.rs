//! Command-line front end: per-state criterion reports, parameter scans over
//! the built-in state families, summary-table reproduction and state-file
//! export.
//!
//! Exit codes: 0 success, 2 parse/validation failure, 3 dimension mismatch,
//! 4 unknown family or bad range.

mod report;
mod scan;
mod statefile;
mod tables;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use entwit::statezoo::{Family, FamilySpec};
use entwit::Error;

/// CLI-level error carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: String) -> Self {
        Self { code: 2, message }
    }

    pub fn bad_range(message: String) -> Self {
        Self { code: 4, message }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::DimensionMismatch { .. } => 3,
            Error::UnknownFamily { .. } | Error::BadRange { .. } | Error::EmptyGrid => 4,
            _ => 2,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "entwit",
    version,
    about = "Entanglement detection: PPT, CCNR, dV and CT criteria plus a Choi-matrix witness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every criterion and the witness on a state file
    Analyze(AnalyzeArgs),
    /// Sweep a state family over parameter ranges
    Scan(ScanArgs),
    /// Regenerate the detection-range summary tables or the Choi spectrum
    Reproduce(ReproduceArgs),
    /// Write a family state to a JSON state file
    Export(ExportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct MapArgs {
    /// Map parameter alpha (partial-transpose weight)
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Map parameter beta (realignment weight)
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Args)]
struct CtGridArgs {
    /// Comma list of CT filter values (default 0,0.5,1,2,5,10); without
    /// --ct-cross the scan uses the diagonal points x = y
    #[arg(long, value_delimiter = ',')]
    ct_grid: Option<Vec<f64>>,
    /// Expand the CT value list to its full cross product
    #[arg(long)]
    ct_cross: bool,
}

impl CtGridArgs {
    fn grid(&self) -> Vec<(f64, f64)> {
        match &self.ct_grid {
            None => entwit::criteria::default_ct_grid(),
            Some(values) => {
                if self.ct_cross {
                    let mut grid = Vec::with_capacity(values.len() * values.len());
                    for &x in values {
                        for &y in values {
                            grid.push((x, y));
                        }
                    }
                    grid
                } else {
                    values.iter().map(|&v| (v, v)).collect()
                }
            }
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to a JSON state file
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    map: MapArgs,
    /// Fixed witness shift; omitted means the state-tailored rule
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Numeric tolerance (ENTWIT_TOL overrides the default 1e-9)
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    ct: CtGridArgs,
    #[arg(long, value_enum, default_value_t = OutFormat::Table)]
    out: OutFormat,
}

#[derive(Args)]
struct FamilyParamArgs {
    /// t1 for bell_diagonal: value or range start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<String>,
    /// t2 for bell_diagonal
    #[arg(long, allow_hyphen_values = true)]
    t2: Option<String>,
    /// t3 for bell_diagonal
    #[arg(long, allow_hyphen_values = true)]
    t3: Option<String>,
    /// p for bes_4x4 / kye
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// q for bes_4x4
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// r for kye
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Re(z) for kye
    #[arg(long, allow_hyphen_values = true)]
    z_re: Option<String>,
    /// Im(z) for kye
    #[arg(long, allow_hyphen_values = true)]
    z_im: Option<String>,
    /// lambda for noisy_bes
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

impl FamilyParamArgs {
    fn given(&self) -> Vec<(&'static str, &String)> {
        [
            ("t1", &self.t1),
            ("t2", &self.t2),
            ("t3", &self.t3),
            ("p", &self.p),
            ("q", &self.q),
            ("r", &self.r),
            ("z_re", &self.z_re),
            ("z_im", &self.z_im),
            ("lambda", &self.lambda),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.as_ref().map(|s| (name, s)))
        .collect()
    }
}

#[derive(Args)]
struct ScanArgs {
    /// Family name: bell_diagonal, bes_4x4, kye or noisy_bes
    #[arg(long)]
    family: String,
    #[command(flatten)]
    params: FamilyParamArgs,
    #[command(flatten)]
    map: MapArgs,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    ct: CtGridArgs,
    #[arg(long, value_enum, default_value_t = OutFormat::Table)]
    out: OutFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReproduceTarget {
    /// Detection ranges for the PPT-entangled r family
    Table1,
    /// Detection thresholds for the noisy bound-entangled family
    Table2,
    /// Choi spectrum against its closed form
    ChoiSpectrum,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_enum)]
    target: ReproduceTarget,
    #[command(flatten)]
    map: MapArgs,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ExportArgs {
    /// Family name: bell_diagonal, bes_4x4, kye or noisy_bes
    #[arg(long)]
    family: String,
    #[command(flatten)]
    params: FamilyParamArgs,
    /// Output path for the JSON state file
    #[arg(long)]
    out: PathBuf,
}

/// Tolerance precedence: --tol flag, then ENTWIT_TOL, then 1e-9.
fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("ENTWIT_TOL") {
        Ok(text) => text
            .parse::<f64>()
            .map_err(|e| CliError::parse(format!("ENTWIT_TOL={text}: {e}"))),
        Err(_) => Ok(entwit::DEFAULT_TOL),
    }
}

fn parse_family(name: &str) -> Result<Family, CliError> {
    name.parse::<Family>().map_err(CliError::from)
}

/// Builds a family spec from fixed-value flags (ranges rejected here).
fn fixed_family_spec(family: Family, params: &FamilyParamArgs) -> Result<FamilySpec, CliError> {
    let mut overrides = BTreeMap::new();
    for (name, text) in params.given() {
        let value = text.parse::<f64>().map_err(|e| {
            CliError::parse(format!("parameter {name}={text} is not a number: {e}"))
        })?;
        overrides.insert(name.to_string(), value);
    }
    FamilySpec::new(family, &overrides).map_err(CliError::from)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => {
            let tol = resolve_tol(args.tol)?;
            let state = statefile::load(&args.state, tol)?;
            let grid = args.ct.grid();
            let rep = report::evaluate(
                &state,
                args.map.alpha,
                args.map.beta,
                args.gamma,
                tol,
                &grid,
            )?;
            match args.out {
                OutFormat::Json => println!("{}", rep.to_json()),
                _ => print!("{}", rep.render_table(&args.state.display().to_string())),
            }
            Ok(())
        }
        Command::Scan(args) => {
            let tol = resolve_tol(args.tol)?;
            let family = parse_family(&args.family)?;
            let grid = args.ct.grid();
            let table = scan::run_scan(
                family,
                &args.params,
                args.map.alpha,
                args.map.beta,
                tol,
                &grid,
            )?;
            match args.out {
                OutFormat::Table => print!("{}", table.render_table()),
                OutFormat::Csv => print!("{}", table.render_csv()),
                OutFormat::Json => println!("{}", table.render_json()),
            }
            Ok(())
        }
        Command::Reproduce(args) => {
            let tol = resolve_tol(args.tol)?;
            let text = match args.target {
                ReproduceTarget::Table1 => {
                    tables::reproduce_table1(args.map.alpha, args.map.beta, tol)?
                }
                ReproduceTarget::Table2 => {
                    tables::reproduce_table2(args.map.alpha, args.map.beta, tol)?
                }
                ReproduceTarget::ChoiSpectrum => {
                    tables::reproduce_choi_spectrum(args.map.alpha, args.map.beta)?
                }
            };
            print!("{text}");
            Ok(())
        }
        Command::Export(args) => {
            let family = parse_family(&args.family)?;
            let spec = fixed_family_spec(family, &args.params)?;
            let state = spec.build().map_err(CliError::from)?;
            statefile::save(&args.out, &state)?;
            println!("wrote {} ({}x{})", args.out.display(), state.dim_a(), state.dim_b());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
