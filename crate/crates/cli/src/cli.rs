use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "wittkit", version, about = "Witt vectors, lattices over W_s, Ore modules and restricted Lie algebras")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    /// Residue field is F_{p^m}.
    #[arg(long, global = true, default_value_t = 1)]
    pub m: u32,
    #[arg(long, global = true, default_value_t = 2)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub r: usize,
    /// Witt truncation length.
    #[arg(long, global = true)]
    pub s: Option<u32>,
    /// Comma-separated type, e.g. 2,0.
    #[arg(long = "type", global = true)]
    pub ty: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the machine report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the machine report instead of the table.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON input: a file path or inline JSON.
    #[arg(long, global = true)]
    pub input: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    #[command(subcommand)]
    Witt(WittCmd),
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Ore(OreCmd),
    #[command(subcommand)]
    Plin(PlinCmd),
    #[command(subcommand)]
    Rla(RlaCmd),
    /// Acceptance suite: all, or one of witt homdim orbits transport plin
    /// jacobson model weight ci family transition (or 1..11).
    Verify {
        #[arg(default_value = "all")]
        which: String,
    },
    /// Orbit table, specialization edges and point counts.
    Atlas,
}

#[derive(Debug, Subcommand)]
pub enum WittCmd {
    /// Sum of two digit vectors.
    Add {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Product of two digit vectors.
    Mul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Witt digits of a Galois-ring element given by its coefficients.
    Digits {
        #[arg(long)]
        coeffs: String,
    },
    /// p-adic logarithm of a unit congruent to 1.
    Log {
        #[arg(long)]
        a: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    Smith,
    Canon,
    /// Solve U x = v; v is a JSON list of digit lists.
    Member {
        #[arg(long)]
        vec: String,
        /// Determinant valuation; defaults to that of the input.
        #[arg(long)]
        nr: Option<u32>,
    },
    Enumerate {
        #[arg(long)]
        colength: u32,
    },
    Lie,
    Homdim,
    /// Specialization chain, or the explicit family for --type.
    Deform,
    CiCheck,
}

#[derive(Debug, Subcommand)]
pub enum OreCmd {
    Smith,
    OrbitDim,
    StabDim,
}

#[derive(Debug, Subcommand)]
pub enum PlinCmd {
    Nilpotent,
    Lattice,
    Inverse,
    /// Conjugate by an invertible matrix (JSON rows).
    Conjugate {
        #[arg(long)]
        by: String,
    },
    Dual,
}

#[derive(Debug, Subcommand)]
pub enum RlaCmd {
    Jacobson,
    Check,
    /// Structure constants; depth defaults to n·r.
    Model {
        #[arg(long)]
        depth: Option<usize>,
    },
    Beta {
        #[arg(long)]
        depth: Option<usize>,
    },
    CanonicalWeight,
    Modular,
}
