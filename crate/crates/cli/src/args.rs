use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kraus-landscape", version, about = "Control landscape of two-level Kraus-map dynamics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Bloch vector of the initial state, as `a,b,g`.
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "A,B,G")]
    pub w: Option<String>,

    /// Seed for every stochastic choice; required by stochastic commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; levelset and scan default to CSV, the rest to JSON.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Tolerance override, repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the objective of a Kraus set in every coordinate system.
    Evaluate {
        #[arg(long)]
        kraus: PathBuf,
        /// General Hermitian target; the default is |0⟩⟨0|.
        #[arg(long)]
        theta: Option<PathBuf>,
    },
    /// Multi-start Riemannian gradient optimization.
    Optimize {
        #[arg(long, value_parser = ["max", "min", "maximize", "minimize"])]
        direction: String,
        #[arg(long, default_value_t = 1)]
        starts: usize,
        /// JSON point, list of points, or a report with a "point" field.
        #[arg(long)]
        start_file: Option<PathBuf>,
        /// Where to write the best run's trajectory CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long, value_parser = ["qr", "polar"], default_value = "qr")]
        retraction: String,
    },
    /// Finite-difference Morse signature at a constructed critical point.
    Morse {
        #[arg(long)]
        manifold: String,
        /// Chart of the mixed saddle, as `re,im`; boundary chart when omitted.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Trace a path inside a level set between two seeded points.
    Levelset {
        #[arg(long)]
        mu: f64,
    },
    /// Unitary dilation of a Kraus set.
    Dilate {
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        kraus: Option<PathBuf>,
        /// Dilate a seeded random set with this many operators.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Objective on a two-parameter slice through a base point.
    Scan {
        /// Base point: a critical manifold name, or `random`.
        #[arg(long, default_value = "global-max")]
        base: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-1,1", value_name = "LO,HI")]
        range1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-1,1", value_name = "LO,HI")]
        range2: String,
        #[arg(long, default_value_t = 101)]
        samples1: usize,
        #[arg(long, default_value_t = 101)]
        samples2: usize,
    },
}
