//! Command-line front-end. Exit codes: 0 ok, 1 assertion failure, 2 usage,
//! 3 guard exceeded.

pub mod svg;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rmi_core::divisor::{z_asymptotic, z_count, z_count_bruteforce, BRUTE_FORCE_GUARD};
use rmi_core::experiments::{
    run_experiment, write_csv, write_jsonl, write_outputs, ExperimentConfig, ExperimentName,
    ExperimentOutcome, Table1Mode,
};
use rmi_core::pairs::{enumerate_standard_pairs_with, CensusOptions, DEFAULT_PAIR_CAP};
use rmi_core::sampler::SampledIdeal;
use rmi_core::staircase::{max_staircase_product_guarded, DEFAULT_GUARD};
use rmi_core::{Error, MonomialIdeal, ModelParams, PSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rmi", version, about = "Random monomial ideals: invariants, standard pairs, experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw an ideal from I(n, D, p) and print it as JSON.
    Sample(SampleCmd),
    /// Dimension, degree, arithmetic degree and pair counts of an ideal.
    Invariants(InvariantsCmd),
    /// Full standard pair census of an ideal.
    StdPairs(StdPairsCmd),
    /// Lattice points under the hyperbolic surface prod (a_i + 1) = d.
    Zcount(ZcountCmd),
    /// Run an experiment from a config file and/or flags.
    Experiment(ExperimentCmd),
    /// Render the staircase of a 2- or 3-variable ideal as SVG.
    StaircaseSvg(SvgCmd),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args, Clone)]
pub struct ModelArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "max-degree", alias = "D")]
    pub max_degree: Option<u64>,
    #[arg(long, conflicts_with_all = ["k", "c"])]
    pub p: Option<f64>,
    #[arg(long, conflicts_with = "c")]
    pub k: Option<f64>,
    #[arg(long, requires = "t")]
    pub c: Option<f64>,
    #[arg(long, requires = "c")]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, CliError> {
        let (Some(n), Some(d)) = (self.n, self.max_degree) else {
            return Err(CliError::Usage("sampling needs --n and --max-degree".into()));
        };
        let spec = match (self.p, self.k, self.c, self.t) {
            (Some(p), None, None, None) => PSpec::Explicit { p },
            (None, Some(k), None, None) => PSpec::Exponent { k },
            (None, None, Some(c), Some(t)) => PSpec::Scaled { c, t },
            _ => return Err(CliError::Usage("give exactly one of --p, --k, --c/--t".into())),
        };
        Ok(ModelParams::from_spec(n, d, spec, self.seed)?)
    }
}

#[derive(Debug, Args)]
pub struct IdealSource {
    /// Ideal JSON file (`-` for stdin); otherwise an ideal is sampled.
    #[arg(long)]
    pub ideal: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

impl IdealSource {
    fn load(&self) -> Result<MonomialIdeal, CliError> {
        match &self.ideal {
            Some(path) => {
                let text = if path.as_os_str() == "-" {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                } else {
                    std::fs::read_to_string(path)?
                };
                Ok(MonomialIdeal::from_json_str(&text)?)
            }
            None => Ok(SampledIdeal::draw(&self.model.params()?, self.model.trial)?.ideal),
        }
    }
}

#[derive(Debug, Args)]
pub struct SampleCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvariantsCmd {
    #[command(flatten)]
    pub source: IdealSource,
    /// Degree cap for the largest staircase product (defaults to --max-degree).
    #[arg(long = "product-degree")]
    pub product_degree: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StdPairsCmd {
    #[command(flatten)]
    pub source: IdealSource,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    #[arg(long = "pair-cap", default_value_t = DEFAULT_PAIR_CAP)]
    pub pair_cap: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZcountCmd {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: f64,
    /// Also print the main term d (ln d)^(n-1) / (n-1)!.
    #[arg(long)]
    pub asymptotic: bool,
    /// Count by direct enumeration instead.
    #[arg(long = "brute-force")]
    pub brute_force: bool,
    #[arg(long, default_value_t = BRUTE_FORCE_GUARD)]
    pub guard: u64,
}

#[derive(Debug, Args)]
pub struct ExperimentCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "d-grid", value_delimiter = ',')]
    pub d_grid: Option<Vec<u64>>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub guard: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long = "f-grid", value_delimiter = ',')]
    pub f_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub jsonl: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Failing verdicts exit with the assertion code.
    #[arg(long)]
    pub strict: bool,
    /// Summary format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SvgCmd {
    #[command(flatten)]
    pub source: IdealSource,
    /// Hyperbola levels c, drawn as (x+1)(y+1) = c.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<f64>,
    #[arg(long, default_value_t = 480.0)]
    pub size: f64,
    #[arg(long = "axis-cap")]
    pub axis_cap: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Assertion(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_guard() => EXIT_GUARD,
            CliError::Core(e) if e.is_assertion() => EXIT_ASSERTION,
            CliError::Assertion(_) => EXIT_ASSERTION,
            CliError::Io(_) | CliError::Usage(_) | CliError::Core(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Assertion(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn emit(output: &Option<PathBuf>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Sample(cmd) => {
            let sampled = SampledIdeal::draw(&cmd.model.params()?, cmd.model.trial)?;
            let text = serde_json::to_string(&sampled.to_json())? + "\n";
            emit(&cmd.output, out, &text)?;
        }
        Command::Invariants(cmd) => {
            let ideal = cmd.source.load()?;
            let text = invariants_report(&ideal, &cmd)?;
            emit(&cmd.output, out, &text)?;
        }
        Command::StdPairs(cmd) => {
            let ideal = cmd.source.load()?;
            let census = enumerate_standard_pairs_with(
                &ideal,
                &CensusOptions {
                    guard: cmd.guard,
                    pair_cap: cmd.pair_cap,
                },
            )?;
            let text = serde_json::to_string(&census.to_json())? + "\n";
            emit(&cmd.output, out, &text)?;
        }
        Command::Zcount(cmd) => {
            let z = if cmd.brute_force {
                z_count_bruteforce(cmd.n, cmd.d, cmd.guard)?
            } else {
                z_count(cmd.n, cmd.d)?
            };
            let mut report = json!({ "n": cmd.n, "d": cmd.d, "z": z.to_string() });
            if cmd.asymptotic {
                report["asymptotic"] = json!(z_asymptotic(cmd.n, cmd.d)?);
            }
            writeln!(out, "{report}")?;
        }
        Command::Experiment(cmd) => return experiment(cmd, out),
        Command::StaircaseSvg(cmd) => {
            let ideal = cmd.source.load()?;
            let spec = svg::RenderSpec {
                levels: cmd.levels.clone(),
                size: cmd.size,
                axis_cap: cmd.axis_cap,
                ..svg::RenderSpec::default()
            };
            emit(&cmd.output, out, &svg::render(&ideal, &spec)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn invariants_report(ideal: &MonomialIdeal, cmd: &InvariantsCmd) -> Result<String, CliError> {
    let census = enumerate_standard_pairs_with(ideal, &CensusOptions::counts_only(cmd.guard))?;
    let product_degree = cmd.product_degree.or(cmd.source.model.max_degree);
    let max_product = match product_degree {
        Some(d) => Some(max_staircase_product_guarded(ideal, d, cmd.guard)?.to_string()),
        None => None,
    };
    Ok(match cmd.format {
        Format::Json => {
            let mut v = json!({
                "n": ideal.n(),
                "min_gens": ideal.num_generators(),
                "dim": census.dim,
                "deg": census.deg,
                "adeg": census.adeg,
                "sp_by_dim": census.sp_by_dim,
            });
            if let Some(m) = max_product {
                v["max_staircase_product"] = json!(m);
            }
            serde_json::to_string(&v)? + "\n"
        }
        Format::Csv => {
            let sp: Vec<String> = census.sp_by_dim.iter().map(u64::to_string).collect();
            let head: Vec<String> = (0..sp.len()).map(|i| format!("sp{i}")).collect();
            format!(
                "n,min_gens,dim,deg,adeg,{},max_staircase_product\n{},{},{},{},{},{},{}\n",
                head.join(","),
                ideal.n(),
                ideal.num_generators(),
                census.dim,
                census.deg,
                census.adeg,
                sp.join(","),
                max_product.unwrap_or_default()
            )
        }
    })
}

fn experiment_config(cmd: &ExperimentCmd) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&cmd.config, &cmd.name) {
        (Some(path), _) => ExperimentConfig::from_path(path)?,
        (None, Some(name)) => ExperimentConfig::new(name.parse()?),
        (None, None) => return Err(CliError::Usage("give --config or --name".into())),
    };
    if let (Some(name), Some(_)) = (&cmd.name, &cmd.config) {
        cfg.name = name.parse::<ExperimentName>()?;
    }
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = cmd.$field.clone() { cfg.$field = v.into(); } )* };
    }
    set!(n, d_grid, trials, seed, guard, f_grid);
    if cmd.p.is_some() || cmd.k.is_some() || cmd.c.is_some() || cmd.t.is_some() {
        // A model given on the command line replaces the configured one.
        if cfg.name != ExperimentName::LAsymptotics {
            cfg.p = None;
            cfg.k = None;
            cfg.c = None;
            cfg.t = None;
        }
        set!(p, k, c, t);
    }
    set!(epsilon, threads, jsonl, csv);
    if let Some(mode) = &cmd.mode {
        cfg.mode = match mode.as_str() {
            "verify" => Table1Mode::Verify,
            "sample" => Table1Mode::Sample,
            other => return Err(CliError::Usage(format!("unknown table mode {other:?}"))),
        };
    }
    cfg.strict |= cmd.strict;
    Ok(cfg)
}

fn experiment(cmd: ExperimentCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = experiment_config(&cmd)?;
    let outcome = run_experiment(&cfg)?;
    write_outputs(&cfg, &outcome)?;
    let text = experiment_report(&cfg, &outcome, cmd.format)?;
    emit(&cmd.output, out, &text)?;
    let hard = cfg.name == ExperimentName::Table1 && cfg.mode == Table1Mode::Verify;
    if (hard || cfg.strict) && !outcome.all_passed() {
        return Err(CliError::Assertion(format!(
            "{} verdict(s) failed",
            outcome.verdicts.iter().filter(|v| !v.passed).count()
        )));
    }
    Ok(EXIT_OK)
}

fn experiment_report(
    cfg: &ExperimentConfig,
    outcome: &ExperimentOutcome,
    format: Format,
) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, cfg, outcome)?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => {
            let mut buf = Vec::new();
            if matches!(cfg.name, ExperimentName::Table1 | ExperimentName::LAsymptotics) {
                write_jsonl(&mut buf, cfg, outcome)?;
            }
            let mut text = String::from_utf8(buf).expect("json is utf-8");
            for row in &outcome.summaries {
                text += &(serde_json::to_string(&json!({ "summary": row }))? + "\n");
            }
            for v in &outcome.verdicts {
                text += &(serde_json::to_string(&json!({ "verdict": v }))? + "\n");
            }
            Ok(text)
        }
    }
}
