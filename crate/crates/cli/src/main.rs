mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exact laminations, their dendrite quotients and piecewise-linear tree maps.
///
/// Exit status: 0 when every exact invariant holds, 1 when one is violated,
/// 2 when the input is invalid or outside the supported bounds.
#[derive(Parser, Debug)]
#[command(name = "laminar", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Pullback depth; defaults to the depth named in the spec file.
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    /// Iterates per stream seed, or per sample for `verify center`.
    #[arg(long, global = true, default_value_t = 2000)]
    pub budget: u64,
    /// Digits used to resolve stream angles.
    #[arg(long, global = true, default_value_t = 20)]
    pub precision: u32,
    /// Period bound; repeat for a sequence of bounds.
    #[arg(long = "max-period", global = true)]
    pub max_period: Vec<u32>,
    /// A seed class such as `{1/7,2/7,4/7}` or `{sturmian(alpha=4181/6765,rho=1/7)}`; repeatable.
    #[arg(long, global = true)]
    pub seed: Vec<String>,
    /// Directory for the report and any figures; the report goes to stdout otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Audit a spec or built lamination against the lamination axioms.
    Validate { file: PathBuf },
    /// Close a spec under pullback and write the lamination, tree and figures.
    Build { spec: PathBuf },
    /// Omega-limit records of each seed.
    Orbit { spec: PathBuf },
    /// Arc or non-separating type of each omega-limit point.
    Classify { spec: PathBuf },
    /// Stored periodic cutpoints up to the period bound.
    PeriodicCutpoints { spec: PathBuf },
    #[command(subcommand)]
    Verify(Verify),
    /// Draw the disk picture and the tree of a lamination.
    Render { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Limit points of persistent cutpoints against the periodic cutpoints.
    Limdend { spec: PathBuf },
    /// Recurrent points of arc type against the periodic points.
    Recdend { spec: PathBuf },
    /// Dynamical core stability and the absorption table.
    Core { spec: PathBuf },
    /// Exact period set of a map file or builtin (`tent`, `stefan:5`, ...).
    Sharkovskiy { map: String },
    /// Limit points of sampled orbits against the periodic points.
    Center {
        map: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "1/256")]
        eps: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = cli.opts;
    let outcome = match cli.command {
        Command::Validate { file } => commands::validate(&opts, &file),
        Command::Build { spec } => commands::build(&opts, &spec),
        Command::Orbit { spec } => commands::orbit(&opts, &spec, false),
        Command::Classify { spec } => commands::orbit(&opts, &spec, true),
        Command::PeriodicCutpoints { spec } => commands::cutpoints(&opts, &spec),
        Command::Verify(Verify::Limdend { spec }) => commands::recurrence(&opts, &spec, "limdend"),
        Command::Verify(Verify::Recdend { spec }) => commands::recurrence(&opts, &spec, "recdend"),
        Command::Verify(Verify::Core { spec }) => commands::core(&opts, &spec),
        Command::Verify(Verify::Sharkovskiy { map }) => commands::sharkovskiy(&opts, &map),
        Command::Verify(Verify::Center { map, samples, eps }) => {
            commands::center(&opts, &map, samples, &eps)
        }
        Command::Render { file } => commands::render(&opts, &file),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
