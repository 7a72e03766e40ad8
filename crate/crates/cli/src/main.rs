//! `superorbit`: batch command-line surface over `superorbit-core`.
//!
//! Exit codes: 0 success, 1 a checked property is false, 2 usage or parse error,
//! 3 a mathematical precondition does not hold.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use superorbit_core::orbit::AlgebraKind;

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated integers, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad integer `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad integer `{b}`"))?;
    Ok((a, b))
}

#[derive(Parser, Debug)]
#[command(name = "superorbit", version, about = "Exact supercommutative algebra and coadjoint-orbit quantization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Polynomial ring k[x1..xM, t1..tN]; inferred from the input when omitted.
    #[arg(long, global = true, value_parser = parse_pair, value_name = "M,N")]
    pub ring: Option<(usize, usize)>,
    /// Block shape of supermatrices or the defining representation.
    #[arg(long, global = true, value_parser = parse_pair, value_name = "m,n")]
    pub shape: Option<(usize, usize)>,
    /// Built-in Lie superalgebra family.
    #[arg(long, global = true, value_name = "gl|sl|osp")]
    pub algebra: Option<AlgebraKind>,
    /// Truncation order of power series in h.
    #[arg(long = "h-order", global = true, default_value_t = 2, value_name = "H")]
    pub h_order: usize,
    /// Filtration cutoff for quotient computations.
    #[arg(long = "deg-cutoff", global = true, default_value_t = 2, value_name = "d")]
    pub deg_cutoff: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print JSON instead of a text report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Eigenvalues of the orbit representative, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Option<Vec<String>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, expand and print polynomial expressions.
    Eval { exprs: Vec<String> },
    /// Berezinian of an even supermatrix (matrix JSON from a file or stdin).
    Ber { input: Option<PathBuf> },
    /// Supertraces of the powers of an even supermatrix.
    Strpow {
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long)]
        even_only: bool,
        input: Option<PathBuf>,
    },
    /// Inverse of an even supermatrix.
    Inv { input: Option<PathBuf> },
    /// Structure constants of a built-in algebra, or of a JSON table.
    BracketTable { input: Option<PathBuf> },
    /// Graded antisymmetry and super-Jacobi identity.
    CheckAxioms { input: Option<PathBuf> },
    /// Killing form and its nondegeneracy.
    Killing {
        /// Exit 1 unless the form has this property.
        #[arg(long, value_parser = ["degenerate", "nondegenerate"])]
        expect: Option<String>,
        input: Option<PathBuf>,
    },
    /// Kirillov-Kostant bracket of two coordinate polynomials.
    Poisson { f: String, g: String },
    /// Order-by-order diagonalization of W (matrix JSON) onto diag(lambda).
    Diagonalize { input: Option<PathBuf> },
    /// Signed Vandermonde determinant of lambda.
    Vandermonde,
    /// Ad-invariance of the supertrace power sums under a random group element.
    AdInvariance {
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Extra odd parameters in the group element.
        #[arg(long, default_value_t = 1)]
        thetas: usize,
    },
    /// Verify an antisymmetric syzygy certificate {"q", "f", "F"}.
    SyzygyVerify { input: Option<PathBuf> },
    /// Supersymmetrization into U_h, or its inverse with --inverse.
    Symmetrize {
        expr: Option<String>,
        /// Read an enveloping-algebra element as JSON and return its symbol.
        #[arg(long)]
        inverse: bool,
    },
    /// Star product f * g and the graded star commutator.
    Star { f: String, g: String },
    /// Casimir element P_k and its classical symbol.
    Casimir {
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Centrality of P_1..P_kmax in U_h.
    Central {
        #[arg(long, default_value_t = 2)]
        kmax: u32,
    },
    /// Monomial basis of U_h/I_h at the orbit of diag(lambda); reduces given expressions.
    QuotientBasis { exprs: Vec<String> },
    /// Star-product axioms on generator pairs and random samples.
    StarAxioms {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            println!("{}", out.render(cli.json));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
