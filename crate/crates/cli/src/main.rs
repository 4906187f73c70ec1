mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::Report;
use config::ExperimentConfig;

#[derive(Parser, Debug)]
#[command(
    name = "graphlim",
    version,
    about = "Graph sequence limits: densities, spectra, root measures, Cantor-set graphonings"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory. Reports go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Cap overrides, e.g. `max_vertices=8192,chromatic_edges=30`.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// TOML experiment file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct FamilyArgs {
    /// hypercube, projective, grid, config, complete, cycle, star or kdd.
    #[arg(long)]
    family: Option<String>,
    /// Family parameters: `4..10`, `2,3,5` or a single value.
    #[arg(long)]
    d: Option<String>,
    /// Grid dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Projective space dimension.
    #[arg(long)]
    r: Option<usize>,
    /// Configuration-model degree (default: cube root of the vertex count).
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write edge lists for a graph family.
    Gen(FamilyArgs),
    /// Density table of patterns along a family.
    Density {
        #[command(flatten)]
        family: FamilyArgs,
        /// Pattern names separated by `,`, or by `;` when a name has a comma (`K2;K3,3`).
        #[arg(long)]
        patterns: Option<String>,
        /// hom or inj.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Degree regularity and cycle density profile.
    Converge {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Scaled spectral measures.
    Spectra(FamilyArgs),
    /// Matching polynomials and root measures.
    Matching(FamilyArgs),
    /// Chromatic polynomials, root measures and the value identity.
    Chromatic {
        #[command(flatten)]
        family: FamilyArgs,
        /// Real evaluation point, at least 8.
        #[arg(long)]
        xi: Option<f64>,
    },
    /// Cantor-set graphoning checks for a gauge.
    Graphoning {
        #[command(flatten)]
        family: FamilyArgs,
        /// cube, proj or mixed.
        #[arg(long)]
        gauge: Option<String>,
        /// Mixed-radix digit radices, comma-separated.
        #[arg(long, value_delimiter = ',')]
        gamma: Option<Vec<u64>>,
        /// Mixed-radix digit choices, comma-separated.
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<u64>>,
        #[arg(long)]
        samples: Option<usize>,
        /// Truncation depth in blocks for sums, in digits for points.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run the acceptance criteria.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        /// Criterion ids, comma-separated.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u32>>,
    },
}

/// Why a run stopped. Each variant has its own exit code.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Cap(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<graphlim::Error> for Failure {
    fn from(e: graphlim::Error) -> Self {
        use graphlim::Error as E;
        match e {
            E::CapExceeded { .. } | E::Infeasible(_) => Failure::Cap(e.into()),
            E::Numerical(_) | E::Overflow => Failure::Runtime(e.into()),
            _ => Failure::Config(e.into()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Config(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Config(e) | Failure::Cap(e) | Failure::Runtime(e) => e,
        }
    }
}

fn family_config(f: FamilyArgs) -> ExperimentConfig {
    ExperimentConfig {
        family: f.family,
        d: f.d,
        dim: f.dim,
        r: f.r,
        degree: f.degree,
        ..Default::default()
    }
}

fn split_patterns(text: &str) -> Vec<String> {
    let sep = if text.contains(';') { ';' } else { ',' };
    text.split(sep)
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn command_config(cmd: Command) -> ExperimentConfig {
    match cmd {
        Command::Gen(f) | Command::Spectra(f) | Command::Matching(f) => family_config(f),
        Command::Density {
            family,
            patterns,
            kind,
        } => ExperimentConfig {
            patterns: patterns.as_deref().map(split_patterns),
            kind,
            ..family_config(family)
        },
        Command::Converge { family, k_max } => ExperimentConfig {
            k_max,
            ..family_config(family)
        },
        Command::Chromatic { family, xi } => ExperimentConfig {
            xi,
            ..family_config(family)
        },
        Command::Graphoning {
            family,
            gauge,
            gamma,
            delta,
            samples,
            depth,
        } => ExperimentConfig {
            gauge,
            gamma,
            delta,
            samples,
            depth,
            ..family_config(family)
        },
        Command::Verify { suite, criteria } => ExperimentConfig {
            suite,
            criteria,
            ..Default::default()
        },
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Gen(_) => "gen",
        Command::Density { .. } => "density",
        Command::Converge { .. } => "converge",
        Command::Spectra(_) => "spectra",
        Command::Matching(_) => "matching",
        Command::Chromatic { .. } => "chromatic",
        Command::Graphoning { .. } => "graphoning",
        Command::Verify { .. } => "verify",
    }
}

/// The configuration as echoed into reports. Output location and thread
/// count do not affect results, so they are left out.
fn echoed(cfg: &ExperimentConfig) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    if let Value::Object(m) = &mut v {
        m.remove("out");
        m.remove("workers");
        m.retain(|_, x| !x.is_null());
    }
    v
}

fn document(report: &Report, cfg: &ExperimentConfig) -> Value {
    let assertions: serde_json::Map<String, Value> = report
        .assertions
        .iter()
        .map(|(k, ok)| (k.clone(), json!(ok)))
        .collect();
    json!({
        "command": report.name,
        "config": echoed(cfg),
        "version": env!("CARGO_PKG_VERSION"),
        "assertions": assertions,
        "passed": report.passed(),
        "results": report.results,
    })
}

fn emit(report: &Report, cfg: &ExperimentConfig) -> Result<(), Failure> {
    let doc = document(report, cfg);
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    let Some(dir) = &cfg.out else {
        print!("{text}");
        for line in &report.summary {
            eprintln!("{line}");
        }
        if !report.files.is_empty() {
            eprintln!(
                "{} data files not written; pass --out to keep them",
                report.files.len()
            );
        }
        return Ok(());
    };
    let io = |e: anyhow::Error| Failure::Runtime(e);
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(io)?;
    let header = format!(
        "# config={}\n",
        serde_json::to_string(&echoed(cfg)).expect("json")
    );
    let mut written = vec![dir.join(format!("{}.json", report.name))];
    std::fs::write(&written[0], text)
        .with_context(|| format!("writing {}", written[0].display()))
        .map_err(io)?;
    for (name, body) in &report.files {
        let path = dir.join(name);
        let body = if name.ends_with(".csv") {
            format!("{header}{body}")
        } else {
            body.clone()
        };
        std::fs::write(&path, body)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(io)?;
        written.push(path);
    }
    for line in &report.summary {
        println!("{line}");
    }
    println!("wrote {} files to {}", written.len(), dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let name = command_name(&cli.command);
    let base = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let flags = ExperimentConfig {
        seed: cli.seed,
        out: cli.out,
        workers: cli.workers,
        ..command_config(cli.command)
    };
    let cfg = base.overridden_by(flags, cli.caps.as_deref())?;
    if let Some(w) = cfg.workers {
        if w == 0 {
            return Err(Failure::Config(anyhow::anyhow!(
                "--workers must be positive"
            )));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::Runtime(e.into()))?;
    }
    let report = match name {
        "gen" => commands::gen(&cfg)?,
        "density" => commands::density(&cfg)?,
        "converge" => commands::converge(&cfg)?,
        "spectra" => commands::spectra(&cfg)?,
        "matching" => commands::matching(&cfg)?,
        "chromatic" => commands::chromatic(&cfg)?,
        "graphoning" => commands::graphoning(&cfg)?,
        _ => commands::verify(&cfg)?,
    };
    emit(&report, &cfg)?;
    for (what, ok) in &report.assertions {
        if !ok {
            eprintln!("assertion failed: {what}");
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.exit_code())
        }
    }
}
