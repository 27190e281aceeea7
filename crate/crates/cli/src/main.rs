//! `spherangle`: seeded solid-angle computations and verification suites.
//!
//! Exit status: 0 when every check passes, 1 on a threshold violation,
//! 2 on bad input.

mod commands;
mod report;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spherangle::conjectures::SearchConfig;
use spherangle::io::body_to_json;

use crate::report::{emit, Report};

#[derive(Parser)]
#[command(name = "spherangle", version, about = "Solid angles, polar cones and local extremal checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Body (or config) JSON file; `probe --target ridge` takes two.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Base seed; defaults to 0 (search: the config file's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples (directions or lines).
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override a named threshold, e.g. `two-crofton=1e-8`.
    #[arg(long = "threshold", global = true, value_parser = parse_threshold)]
    thresholds: Vec<(String, f64)>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Identities,
    Conjectures,
    Crofton,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex solid angles, edge figures and dihedral angles of a body.
    Angles,
    /// Normal cones of a body's vertices and their total measure.
    Polar,
    /// Seeded verification suites judged against fixed thresholds.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Maximize the minimum vertex solid angle over simplex shapes.
    Search {
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Perturbation probes: bohm, simplex4, ridge, or a regular solid name.
    Probe {
        #[arg(long, default_value = "bohm")]
        target: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Reference values of the regular solids.
    Table {
        /// `all` or a comma-separated list of names.
        #[arg(long, default_value = "all")]
        solids: String,
    },
    /// Write a body JSON: regular, flat, needle, random, perturbed, or a solid name.
    Fixtures {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
}

fn parse_threshold(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    if !suites::THRESHOLD_KEYS.contains(&key) {
        return Err(format!("unknown threshold `{key}`; known: {}", suites::THRESHOLD_KEYS.join(", ")));
    }
    let v: f64 = value.parse().map_err(|e| format!("threshold `{key}`: {e}"))?;
    Ok((key.to_string(), v))
}

enum Failure {
    Input(String),
}

impl From<spherangle::Error> for Failure {
    fn from(e: spherangle::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SPHERANGLE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("SPHERANGLE_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("thread pool: {e}")))
}

fn load_search_config(cli: &Cli) -> Result<SearchConfig, Failure> {
    let mut config = match cli.input.as_slice() {
        [] => SearchConfig::default(),
        [path] => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Input(format!("Parse: search config: {e}")))?
        }
        _ => return Err(Failure::Input("Parse: field `--input`: expected one search config".into())),
    };
    // explicit flags win over the file
    if let Some(r) = cli.restarts {
        config.restarts = r;
    }
    if let Some(n) = cli.samples {
        config.samples = n;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let seed = cli.seed.unwrap_or(0);
    let out = cli.out.as_deref();
    let (name, mut report) = match &cli.command {
        Command::Angles => ("angles", Report::new("angles", seed, cli.samples.unwrap_or(0))),
        Command::Polar => ("polar", Report::new("polar", seed, cli.samples.unwrap_or(0))),
        Command::Verify { .. } => ("verify", Report::new("verify", seed, cli.samples.unwrap_or(100_000))),
        Command::Search { .. } => ("search", Report::new("search", seed, 0)),
        Command::Probe { .. } => ("probe", Report::new("probe", seed, cli.samples.unwrap_or(1_000_000))),
        Command::Table { .. } => ("table", Report::new("table", seed, 0)),
        Command::Fixtures { name, dim } => {
            let body = commands::fixture(name, *dim, cli.epsilon, seed)?;
            emit(&body_to_json(&body), out).map_err(|e| Failure::Input(format!("cannot write output: {e}")))?;
            return Ok(true);
        }
    };
    match &cli.command {
        Command::Angles => commands::angles(&mut report, &cli.input, cli.samples, seed)?,
        Command::Polar => commands::polar(&mut report, &cli.input, cli.samples, seed)?,
        Command::Verify { suite } => {
            let settings = suites::Settings {
                seed,
                samples: report.samples,
                restarts: cli.restarts.unwrap_or(5),
                epsilon: cli.epsilon,
                thresholds: cli.thresholds.iter().cloned().collect::<BTreeMap<_, _>>(),
            };
            let mut rows = Vec::new();
            if matches!(suite, Suite::Identities | Suite::All) {
                rows.extend(suites::identities(&settings)?);
            }
            if matches!(suite, Suite::Conjectures | Suite::All) {
                rows.extend(suites::conjectures(&settings)?);
            }
            if matches!(suite, Suite::Crofton | Suite::All) {
                rows.extend(suites::crofton(&settings)?);
            }
            for r in rows {
                report.push(r);
            }
        }
        Command::Search { dim } => {
            let config = load_search_config(&cli)?;
            report.seed = config.seed;
            report.samples = if *dim == 4 { config.samples } else { 0 };
            commands::search(&mut report, config, *dim)?;
        }
        Command::Probe { target, trials } => {
            let args = commands::ProbeArgs {
                target,
                inputs: &cli.input,
                epsilon: cli.epsilon,
                trials: *trials,
                samples: report.samples,
                seed,
            };
            commands::probe(&mut report, args)?;
        }
        Command::Table { solids } => commands::table(&mut report, solids)?,
        Command::Fixtures { .. } => unreachable!(),
    }
    let text = match (cli.format, name) {
        (Format::Json, _) => report.to_json(),
        (Format::Csv, "table") => report.to_table_csv(),
        (Format::Csv, _) => report.to_csv(),
    };
    emit(&text, out).map_err(|e| Failure::Input(format!("cannot write output: {e}")))?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("spherangle: threshold violated");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("spherangle: {msg}");
            ExitCode::from(2)
        }
    }
}
