use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "coaxial",
    version,
    about = "Coaxiality, semi-invertibility and constitutive-inequality checks for isotropic elastic responses"
)]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Sampling seed (falls back to the config file, then COAXIAL_SEED).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test inequalities on seeded samples of stretch states.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        /// Checks to run: be, be+, etss, wetss, bicoax, semi, invert, or all.
        #[arg(long, num_args = 1..)]
        checks: Vec<String>,
        /// Number of random states.
        #[arg(long)]
        n: Option<usize>,
        /// Also audit the implication chain and print the summary table.
        #[arg(long)]
        audit: bool,
    },
    /// Evaluate stress, β, ψ and invariants at one state.
    Stress {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        matrix: MatrixArgs,
    },
    /// Solve for the stretch under uniaxial Cauchy stress diag(s, 0, 0).
    Invert {
        #[command(flatten)]
        model: ModelArgs,
        /// Uniaxial stress magnitude, s ≥ 0.
        #[arg(long)]
        s: f64,
    },
    /// Reproduce the fixed examples and counterexamples.
    Counterexamples {
        /// Run one case only.
        #[arg(long)]
        only: Option<String>,
    },
    /// Fuzz the sum-of-squared-logarithms inequality.
    Ssli {
        /// Number of generated pairs.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// Model tag, e.g. quadratic-hencky, neo-hooke, dev3, marzano.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub khat: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    /// Volumetric part: zero, log-squared or quadratic-j.
    #[arg(long)]
    pub volumetric: Option<String>,
    /// Any parameter by dotted path, e.g. `f.kappa=3` or `w.kind=quadratic`.
    #[arg(long, value_name = "KEY=VALUE")]
    pub param: Vec<String>,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Components xx,yy,zz,xy,xz,yz of B.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Principal stretches l1,l2,l3; B = diag(l1², l2², l3²).
    #[arg(long)]
    pub lambdas: Option<String>,
}
