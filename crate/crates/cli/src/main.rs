use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod corpus;
mod svg;

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "growthlab", version, about = "Toric growth conditions, Okounkov bodies and ball gluing")]
struct Cli {
    /// Seed for every sampled computation; GROWTHLAB_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Polytope JSON: {"dim": n, "vertices": [...]} and/or "facets".
    #[arg(long)]
    pub polytope: PathBuf,
    /// Vertex to normalize at, e.g. `0,0` or `1/2,0`. Defaults to the origin.
    #[arg(long)]
    pub vertex: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Order {
    Lex,
    Deglex,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Delzant verdict per vertex.
    CheckDelzant {
        #[arg(long)]
        polytope: PathBuf,
    },
    /// Unimodular normalization at a vertex.
    Normalize(Target),
    /// Growth condition report: volumes, Seshadri constant, equivalence certificates.
    Growth {
        #[command(flatten)]
        target: Target,
        /// Approximation levels.
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 4])]
        k: Vec<u32>,
        /// Add a Monte-Carlo Monge–Ampère volume at the largest level.
        #[arg(long)]
        monte_carlo: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Draw the polytope with the largest inscribed simplex (n = 2 only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exact and Monte-Carlo Monge–Ampère volume.
    Volume {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Seshadri constant by simplex inclusion and by growth domination.
    Seshadri(Target),
    /// Loghomogeneous components of the support function.
    Decompose {
        #[command(flatten)]
        target: Target,
        /// Levels λ; defaults to the vertex levels of the normalized polytope.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<String>>,
    },
    /// Okounkov body of a toric or user-supplied monomial series.
    Okounkov {
        #[arg(long, conflicts_with = "series", required_unless_present = "series")]
        polytope: Option<PathBuf>,
        #[arg(long)]
        vertex: Option<String>,
        /// Series JSON: {"degrees": {"1": [[a, b], ...], ...}}.
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Order::Deglex)]
        order: Order,
        /// Flag permutation, e.g. `1,0`.
        #[arg(long, value_delimiter = ',')]
        perm: Option<Vec<usize>>,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        /// Volume of the line bundle, for series input.
        #[arg(long)]
        vol_l: Option<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Chebyshev transform of a potential at points of its slope polytope.
    Chebyshev {
        #[arg(long, required_unless_present = "fs_lambda")]
        polytope: Option<PathBuf>,
        #[arg(long)]
        vertex: Option<String>,
        /// Log-sum-exp level; omit for the support function.
        #[arg(long)]
        k: Option<u32>,
        /// Use λ·ln(1 + Σeˣⁱ) instead of a polytope.
        #[arg(long, conflicts_with = "polytope", requires = "dim")]
        fs_lambda: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        /// Evaluation point; repeat for several.
        #[arg(long, required = true)]
        at: Vec<String>,
    },
    /// Glue λ·ln(1 + Σeˣⁱ) on a ball into the growth representative.
    EmbedBall {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        fs_lambda: String,
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        /// Radial profile CSV along x = t·𝟙.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Gromov width lower bound from the Seshadri constant.
    Gromov(Target),
    /// Summary table over the built-in corpus and an optional directory.
    Corpus {
        /// Extra polytope JSON files (optionally with a "vertex" field).
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn seed(cli: &Cli) -> std::result::Result<u64, Failure> {
    match std::env::var("GROWTHLAB_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Input(format!("GROWTHLAB_SEED={s:?} is not an unsigned integer"))),
        Err(_) => Ok(cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = seed(&cli).and_then(|seed| commands::run(&cli.command, seed).map(|out| (seed, out)));
    match result {
        Ok((seed, out)) => {
            let text = match out {
                commands::Output::Json(result) => {
                    let doc = serde_json::json!({ "command": cli.command.name(), "seed": seed, "result": result });
                    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
                }
                commands::Output::Text(text) => text,
            };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        return report(&Failure::Input(format!("cannot write {}: {e}", path.display())));
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => report(&f),
    }
}

fn report(f: &Failure) -> ExitCode {
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "error": f.to_json() })).expect("serializable"));
    eprintln!("growthlab: {f}");
    ExitCode::from(f.exit_code())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckDelzant { .. } => "check-delzant",
            Command::Normalize(_) => "normalize",
            Command::Growth { .. } => "growth",
            Command::Volume { .. } => "volume",
            Command::Seshadri(_) => "seshadri",
            Command::Decompose { .. } => "decompose",
            Command::Okounkov { .. } => "okounkov",
            Command::Chebyshev { .. } => "chebyshev",
            Command::EmbedBall { .. } => "embed-ball",
            Command::Gromov(_) => "gromov",
            Command::Corpus { .. } => "corpus",
        }
    }
}
