mod commands;
mod doc;
mod error;
mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qgraph", version, about = "Build, verify and twist quantum graphs")]
pub struct Cli {
    /// Emit JSON documents instead of tables
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomised presets
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numerical tolerance
    #[arg(long, global = true, env = "QG_TOL", default_value_t = qgraph_core::DEFAULT_TOL)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Frobenius identities of a quantum set
    SetCheck {
        /// quantum-set or quantum-graph document, `-` for stdin
        file: Option<String>,
        /// Block sizes, e.g. 1,2,3
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["file", "orders"])]
        blocks: Option<Vec<usize>>,
        /// Cyclic orders of a twisted set, e.g. 2,2,2
        #[arg(long, value_delimiter = ',', conflicts_with = "file", requires = "bichar")]
        orders: Option<Vec<u64>>,
        /// Bicharacter preset (trivial, clifford, weyl) or bicharacter document
        #[arg(long)]
        bichar: Option<String>,
    },
    /// Report the properties of a quantum graph
    GraphCheck { file: String },
    /// Convert between adjacency operators and edge projections
    Rotate { file: String },
    /// Classical Cayley graph of a finite abelian group
    Cayley {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        /// Connection set, e.g. "100;010;001"
        #[arg(long, default_value = "")]
        gens: String,
        /// Attach the Cayley spectrum
        #[arg(long)]
        spectrum: bool,
    },
    /// Twisted Cayley graph over a bicharacter
    Twist {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        #[arg(long, default_value = "")]
        gens: String,
        /// trivial, clifford, weyl, or a bicharacter document
        #[arg(long, default_value = "trivial")]
        bichar: String,
        #[arg(long)]
        spectrum: bool,
    },
    /// Named graphs and maps
    Catalog {
        /// m2-empty, m2-edge, m2-two, m2-full, m2-partial, m2-random, anticommutative-square,
        /// gell-mann, rook, hypercube, folded, squared, cube, diagonal-embedding,
        /// folded-embedding, weyl-isomorphism, su2-conjugation, clifford-bicharacter,
        /// weyl-bicharacter, list
        preset: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        gens: Option<String>,
    },
    /// Quotient of a graph along a unital *-homomorphism
    Quotient { graph: String, map: String },
    /// Induced subgraph on a list of blocks
    Subgraph {
        graph: String,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
    },
    /// Search for a Schur non-commutativity certificate
    Obstruct {
        graph: String,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Check that a map is an isomorphism between two graphs
    IsoCheck { graph1: String, graph2: String, map: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("qgraph: {e}");
            match e {
                CliError::Input(_) => ExitCode::from(2),
                CliError::Internal(_) => ExitCode::from(1),
            }
        }
    }
}
