use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "sfunc", version, about = "Exact checks for s-sequences and rational 2-functions")]
pub struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write tabular records (checks, coefficients, values) as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Print a one-line summary to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    /// Do not print the JSON report to stdout.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the local s-function property on a finite window.
    Verify(VerifyArgs),
    /// Decide whether P/Q is a rational 2-function.
    Classify(ClassifyArgs),
    /// Convert between the a-, b- and q-representations.
    Convert(ConvertArgs),
    /// Expand P/Q as a power series, optionally applying operators.
    Expand(ExpandArgs),
    /// Integrality of exp(-∫V).
    Dwork(DworkArgs),
    /// Finite-precision experiments with ρ_n(m) and κ.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Built-in sequences and CSV files.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

/// Where a sequence comes from.
#[derive(Args, Debug, Serialize)]
pub struct SeqArgs {
    /// apery, domb, almkvist-zudilin, all-ones, geometric:<c>, periodic:<P>:<A_1>,...
    #[arg(long, value_name = "SPEC", required_unless_present = "from_csv", conflicts_with = "from_csv")]
    pub seq: Option<String>,
    /// Read `n,value` lines instead of a named sequence.
    #[arg(long, value_name = "FILE")]
    pub from_csv: Option<PathBuf>,
    /// Replace the sequence by its coefficient-wise product with another.
    #[arg(long, value_name = "SPEC")]
    pub hadamard: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct WindowArgs {
    /// Largest prime tested.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(2..))]
    pub pmax: u64,
    /// Largest m in n = m·p^r.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub mmax: u64,
    /// Largest r; capped per prime so that m·p^r stays within the horizon.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub rmax: u32,
    /// Largest sequence index computed.
    #[arg(long, default_value_t = 3000, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: u64,
    /// Test exactly these primes instead of all primes up to --pmax.
    #[arg(long, value_delimiter = ',', value_name = "P,...")]
    pub primes: Option<Vec<u64>>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    Cartier,
    B,
    Q,
    /// All four, with an agreement flag.
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub s: u32,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    pub method: Method,
}

#[derive(Args, Debug, Serialize)]
pub struct FunctionArgs {
    /// Numerator coefficients, constant term first; elements are rationals
    /// or `M:[c_0,...]` field elements.
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    pub num: String,
    /// Denominator coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    pub den: String,
    /// Apply ε_L^(S) first, written `L` or `L:S`.
    #[arg(long, value_name = "L[:S]")]
    pub epsilon: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub f: FunctionArgs,
    /// Bound for the period search.
    #[arg(long, default_value_t = 720, value_parser = clap::value_parser!(u64).range(1..))]
    pub nmax: u64,
    /// Include the partial-fraction form when the denominator splits.
    #[arg(long)]
    pub minton: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Repr {
    A,
    B,
    Q,
}

#[derive(Args, Debug, Serialize)]
pub struct ConvertArgs {
    #[arg(long, value_enum, default_value_t = Repr::A)]
    pub from: Repr,
    #[arg(long, value_enum)]
    pub to: Repr,
    /// Input sequence (only with --from a).
    #[arg(long, value_name = "SPEC", conflicts_with = "values")]
    pub seq: Option<String>,
    /// Explicit input values x_1,x_2,...
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    pub values: Option<String>,
    /// Weight s of the b-representation.
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// Number of terms (defaults to all given values, or 20 for --seq).
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub f: FunctionArgs,
    #[arg(long, env = "SFUNC_TRUNCATION", default_value_t = 128)]
    pub truncation: usize,
    /// Operators applied in order: delta, int:S, cartier:K, epsilon:L:S,
    /// frobenius:P, exp, log.
    #[arg(long = "apply", value_name = "OP")]
    pub ops: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["seq", "num"])))]
pub struct DworkArgs {
    #[arg(long, value_name = "SPEC", conflicts_with_all = ["num", "den"])]
    pub seq: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "den", value_name = "LIST")]
    pub num: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "num", value_name = "LIST")]
    pub den: Option<String>,
    #[arg(long, env = "SFUNC_TRUNCATION", default_value_t = 128)]
    pub truncation: usize,
    /// Denominator primes up to this bound are identified individually.
    #[arg(long, default_value_t = 50)]
    pub pmax: u64,
    /// Primes allowed in denominators.
    #[arg(long, value_delimiter = ',', value_name = "P,...")]
    pub exclude: Vec<u64>,
}

#[derive(Subcommand, Debug)]
pub enum LabCommand {
    /// ρ_n(m) modulo p^(K-n).
    Rho(RhoArgs),
    /// κ = ord_p ρ_1(1).
    Kappa(UnitArgs),
    /// ρ_{n+1}(m) ≡ ρ_n(m) mod p^(n+2κ).
    Stability(StabilityArgs),
    /// ρ_n(m) ≡ m x^((m-1)p^(n-1)) ρ_n(1) mod p^(n+2κ).
    Scaling(ScalingArgs),
    /// x^(p^n) ≡ x^(p^(n-1)) mod p^(2n) for n <= nmax.
    Probe(ProbeArgs),
    /// Teichmüller lift of x modulo p^K.
    Teichmuller(UnitArgs),
    /// Σ B_i (x_i^(mp^n) − x_i^(mp^(n-1))) ≡ 0 mod p^(2n) and its Vandermonde system.
    Vandermonde(VandermondeArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct UnitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long = "K", default_value_t = 16)]
    pub k: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct RhoArgs {
    #[command(flatten)]
    pub unit: UnitArgs,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct StabilityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long)]
    pub p: u64,
    /// Precision; defaults to 2·nmax + 2·κ + 4.
    #[arg(long = "K")]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 4)]
    pub mmax: u64,
    #[arg(long, default_value_t = 3)]
    pub nmax: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct ScalingArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long = "K", default_value_t = 16)]
    pub k: u32,
    #[arg(long, default_value_t = 4)]
    pub mmax: u64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub unit: UnitArgs,
    #[arg(long, default_value_t = 4)]
    pub nmax: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct VandermondeArgs {
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub xs: Vec<String>,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub bs: Vec<String>,
    #[arg(long)]
    pub p: u64,
    #[arg(long = "K", default_value_t = 16)]
    pub k: u32,
    #[arg(long, default_value_t = 4)]
    pub mmax: u64,
    #[arg(long, default_value_t = 3)]
    pub nmax: u32,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Named sequences with metadata.
    List,
    /// The first n values of a sequence.
    Show {
        spec: String,
        #[arg(long, default_value_t = 10)]
        n: u64,
    },
    /// Write `n,value` lines for 1..=n.
    Export {
        spec: String,
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Validate a CSV file and summarise it.
    Ingest { file: PathBuf },
}
