//! `g2lab`: generators, analyzers and the `g2 <= 1` classifier on the
//! command line. Complexes travel as canonical JSON on stdin/stdout.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "g2lab", version, about = "Simplicial complexes, g2, homology, rigidity and classification")]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, env = "G2LAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Suppress diagnostics on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Complex file; stdin when omitted or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summary: f-vector, g2, purity, primality.
    Info(Input),
    /// Print g2.
    G2(Input),
    /// Reduced integral homology as JSON.
    Homology(Input),
    /// Generic rigidity report of the 1-skeleton as JSON.
    Rigidity {
        #[command(flatten)]
        input: Input,
        /// Ambient dimension; defaults to the largest face size.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = g2lab::rigidity::DEFAULT_TRIALS)]
        trials: usize,
        /// Also test which single edges can be removed keeping rigidity.
        #[arg(long)]
        edge_experiment: bool,
        /// Also compute a floating-point rank from singular values.
        #[arg(long)]
        float_check: bool,
    },
    /// Classify a homology sphere with g2 <= 1.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Verify the homology-sphere property first.
        #[arg(long)]
        check_sphere: bool,
    },
    /// Generate a complex.
    #[command(subcommand)]
    Gen(Generator),
    /// Contract an edge `u,v` onto `v`.
    Contract {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', required = true)]
        edge: Vec<u32>,
    },
    /// Stellar subdivision at a ridge.
    Subdivide {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', required = true)]
        ridge: Vec<u32>,
    },
    /// Connected sum of two complexes.
    Sum {
        first: PathBuf,
        second: PathBuf,
        /// Facet of the first complex; defaults to its first facet.
        #[arg(long, value_delimiter = ',')]
        facet_k: Option<Vec<u32>>,
        /// Facet of the second complex, glued vertex by vertex in increasing order.
        #[arg(long, value_delimiter = ',')]
        facet_l: Option<Vec<u32>>,
    },
    /// Prime decomposition.
    Decompose(Input),
    /// Run the acceptance checks.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum Generator {
    /// Stacked sphere: boundary of the d-simplex stacked over random facets.
    Stacked {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        stacks: usize,
    },
    /// Join of the boundaries of an a-simplex and a b-simplex.
    Join2 {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// n-gon joined with the boundary of a (d-2)-simplex.
    Polyjoin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Boundary of the d-dimensional cross-polytope.
    Crosspoly {
        #[arg(long)]
        d: usize,
    },
    /// Boundary of the m-simplex.
    Simplex {
        #[arg(long)]
        m: usize,
    },
    /// The n-cycle.
    Polygon {
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("g2lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
