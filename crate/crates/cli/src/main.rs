mod commands;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltalab::scalar::{parse_scalar, Scalar};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "deltalab", version, about = "Exact experiments with delta-balls, delta-tubes and their incidences")]
pub struct Cli {
    /// Worker threads; 0 uses every core
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

fn scalar(s: &str) -> Result<Scalar, String> {
    parse_scalar(s).map_err(|e| e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    /// rational-point incidence example
    StCase1,
    /// bushes at the points `(a/W, 0)`
    StCase2,
    /// full lattice strips
    FurstStrips,
    /// strips intersected with a spaced tube family
    FurstIntersected,
    /// irrational-translation family
    FurstSqrt2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Oracle,
    Grid,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RichKind {
    Balls,
    Tubes,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Tubes,
    Balls,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    Direction,
    Position,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dir {
    L1,
    L2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Crossings {
    Bucketed,
    Brute,
    Checked,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub name: ExampleName,
    #[arg(long, value_parser = scalar)]
    pub delta: Scalar,
    #[arg(long = "W", default_value = "1", value_parser = scalar)]
    pub w: Scalar,
    #[arg(long = "X", default_value = "1", value_parser = scalar)]
    pub x: Scalar,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long, value_parser = scalar)]
    pub alpha: Option<Scalar>,
    /// The rational example keeps only heights `p/q` with `q <= X/r`
    #[arg(long)]
    pub separated: bool,
    /// Grid divisor for the irrational-translation family
    #[arg(long, default_value_t = 1)]
    pub divisor: u64,
    /// Instance CSV path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Certificate JSON path (witness lists for Furstenberg families)
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an example family and write its instance CSV and certificate JSON
    GenExample(GenArgs),
    /// Count incidences between the balls and tubes of an instance
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = EngineChoice::Grid)]
        engine: EngineChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List rich balls of the tubes or rich tubes of the balls
    Rich {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = RichKind::Balls)]
        kind: RichKind,
        /// Candidate net spacing for rich tubes; defaults to delta/2
        #[arg(long, value_parser = scalar)]
        net: Option<Scalar>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the spacing condition of the tubes or the ball grid condition
    VerifySpacing {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Tubes)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Orientation::Direction)]
        orientation: Orientation,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map tubes to dual balls (l1) or balls to dual tubes (l2)
    Dualize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        dir: Dir,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the dual balls of the tubes satisfy the grid condition
    TransferCheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Orientation::Direction)]
        orientation: Orientation,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the crossing-graph bound on a Furstenberg instance
    FurstBound {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, value_enum, default_value_t = Crossings::Bucketed)]
        crossings: Crossings,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a `(delta, |B|, L, target)` row, writing the header for a new file
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Compare measured counts with a theorem bound over a parameter grid
    Sweep {
        /// main2, main3, main or furstenberg (a `theorem-` prefix is accepted)
        name: String,
        #[arg(long, value_parser = scalar, value_delimiter = ',', default_value = "1/64,1/128,1/256")]
        deltas: Vec<Scalar>,
        #[arg(long = "W", value_delimiter = ',', default_value = "2,4")]
        ws: Vec<u64>,
        #[arg(long = "X", value_delimiter = ',', default_value = "8,16")]
        xs: Vec<u64>,
        /// Richness thresholds; the smallest admissible one by default
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<u32>>,
        #[arg(long, value_parser = scalar, value_delimiter = ',', default_value = "3/10,1/2,7/10")]
        alpha: Vec<Scalar>,
        #[arg(long, value_parser = scalar, default_value = "1/10")]
        eps: Scalar,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        /// Cell fill probability for random ball grids, as `p/q`
        #[arg(long, value_parser = scalar, default_value = "4/5")]
        fill: Scalar,
        /// TSV output path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON path
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Summarize an instance: sizes, spacing checks and incidence totals
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| commands::run(cli.command)) {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
