//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "splfr", version, about = "Secure and private linear function retrieval from placement delivery arrays")]
pub struct Cli {
    /// Directory for report files and emitted curves.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for every pseudo-random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print JSON-lines reports on stdout; the human summary goes to stderr.
    #[arg(long, global = true)]
    pub json: bool,
    /// TOML file with default flag values; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// More detail in the human summary.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, check and describe placement delivery arrays.
    #[command(subcommand)]
    Pda(PdaCommand),
    /// Run the scheme on a random library.
    #[command(subcommand)]
    Sim(SimCommand),
    /// Exhaustive correctness, security and privacy audits.
    #[command(subcommand)]
    Audit(AuditCommand),
    /// Memory-load curves as CSV and SVG.
    #[command(subcommand)]
    Curves(CurvesCommand),
    /// Converse bounds against the MAN curve.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Ratio checks between the MAN curve and reference curves.
    #[command(subcommand)]
    Gap(GapCommand),
    /// The three-user, four-file walkthrough with all 4096 demand tuples.
    Toy,
}

#[derive(Debug, Subcommand)]
pub enum PdaCommand {
    /// Check a PDA file.
    Validate { file: PathBuf },
    /// Print the MAN array for K users and parameter t.
    Man {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        /// Write the array here instead of stdout.
        #[arg(short = 'o', long = "output", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Parameters, bounds and memory-load pair of a PDA file.
    Info {
        file: PathBuf,
        /// Number of files for the memory-load pair.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    Run(SimArgs),
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// A PDA file or `man:K,t`.
    #[arg(long)]
    pub pda: String,
    /// Number of files.
    #[arg(long)]
    pub n: usize,
    /// File length in field symbols; must be a multiple of F.
    #[arg(long)]
    pub b: usize,
    /// `p:<prime>` or `b:<m>[:poly=<hex>]`.
    #[arg(long, default_value = "p:2")]
    pub field: String,
    #[arg(long, default_value = "splfr")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// `units`, `random`, or a file of K lines with N field values each.
    #[arg(long, default_value = "units")]
    pub demands: String,
    /// Delivery rounds; keys are refreshed between rounds.
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
}

#[derive(Debug, Subcommand)]
pub enum AuditCommand {
    Correctness(AuditArgs),
    Security(AuditArgs),
    Privacy(AuditArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemandSpaceArg {
    All,
    Units,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Sequential,
    Parallel,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Colluding users, 1-based and comma-separated; all subsets if absent.
    #[arg(long)]
    pub subset: Option<String>,
    /// Largest atom count to enumerate, e.g. `2^26` or `1000000`.
    #[arg(long, default_value = "2^26")]
    pub budget: String,
    #[arg(long, value_enum, default_value = "all")]
    pub demand_space: DemandSpaceArg,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
}

#[derive(Debug, Subcommand)]
pub enum CurvesCommand {
    /// Write `curves_N<n>_K<k>.csv` and `.svg` into `--out` (default `.`).
    Emit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "splfr,seckey,privkey-pfr,privkey-plfr,yma,wsjtc,virtual")]
        schemes: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GapCommand {
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Grid points per unit of memory.
        #[arg(long, default_value_t = splfr_core::tradeoff::DEFAULT_DENSITY)]
        density: u64,
    },
}
