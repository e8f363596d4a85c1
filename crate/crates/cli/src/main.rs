mod commands;
mod config;
mod error;
mod setup;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::setup::{FamilyKind, FieldArgs};

/// Certified experiments on unit-twisted rational approximation in number
/// fields. Every inequality verdict is HOLDS, FAILS or UNDECIDED.
#[derive(Parser, Debug)]
#[command(name = "unit-twist-lab", version, arg_required_else_help = true)]
pub struct Cli {
    /// TOML experiment configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Precision ceiling in bits (also UNIT_TWIST_LAB_MAX_BITS).
    #[arg(long, global = true)]
    pub max_bits: Option<u32>,
    /// Omit the timestamp line from CSV output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Treat UNDECIDED verdicts as fatal (exit 2).
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field data: embeddings, element invariants.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Unit groups: families, exponent recovery, kappa8, bounded sequences.
    #[command(subcommand)]
    Units(UnitsCmd),
    /// Approximation searches and inequality checks.
    #[command(subcommand)]
    Approx(ApproxCmd),
    /// Twisted forms and Thue equations in a box.
    #[command(subcommand)]
    Thue(ThueCmd),
    /// Linear-form-in-logarithms gap bounds.
    #[command(subcommand)]
    Effective(EffectiveCmd),
    /// Re-render or validate saved reports.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// Degree, signature, unit rank and certified embeddings.
    Info {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimal polynomial, norm, trace, house, height and conjugates.
    Element {
        #[command(flatten)]
        field: FieldArgs,
        /// Power-basis coordinates, e.g. "4,2,1" or "1/2,0,3".
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum UnitsCmd {
    /// One of the built-in families with its units.
    Family {
        #[arg(value_enum)]
        kind: FamilyKind,
        #[arg(long = "D", short = 'D', default_value_t = 2)]
        d: i64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exponents of a unit in the basis, and the norm lemma check.
    Recover {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The norm-equivalence constant of the basis.
    Kappa8 {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Units eps1^a eps2^-b in [1/2, 2] from convergents of log eps2 / log eps1.
    Sequence {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 8)]
        count: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct UnitSel {
    /// Exponent n of the selected unit, or a full vector "b1,...,br".
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub unit_power: String,
    /// Basis index of the unit raised to a single exponent.
    #[arg(long, default_value_t = 0)]
    pub unit_index: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RangeSel {
    /// Unit exponents "a..b" (inclusive).
    #[arg(long = "unit-power-range", visible_alias = "n", allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Basis index of the unit raised to each exponent.
    #[arg(long, default_value_t = 0)]
    pub unit_index: usize,
}

#[derive(Subcommand, Debug)]
pub enum ApproxCmd {
    /// Per-exponent minimum of q^d house^(d-1) |e alpha - p/q| over convergent
    /// candidates, with hits below kappa.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeSel,
        #[arg(long)]
        qmax: Option<u64>,
        /// Threshold, exact decimal or p/q.
        #[arg(long)]
        kappa: Option<String>,
        /// Scan every q <= qmax instead of convergents.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
        /// Also write the full hit list here (CSV).
        #[arg(long)]
        hits_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The unit-twisted Liouville inequality on every convergent.
    Liouville {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeSel,
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hurwitz witnesses among the convergents (real quadratic fields).
    Hurwitz {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        n: i64,
        /// Number of convergents to scan.
        #[arg(long, default_value_t = 30)]
        scan: usize,
        /// Print only the first `count` witnesses instead of the scan.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hypotheses and verdict of the pseudo-Pisot-excluded inequality.
    CzCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        unit: UnitSel,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "1")]
        eta: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Certified pseudo-Pisot test of an element.
    PisotCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ThueCmd {
    /// Solve F_e(x, y) = k with |x|, |y| <= box.
    Enum {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        unit: UnitSel,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long = "box")]
        bound: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solution counts over a range of unit exponents and several k.
    Family {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        range: RangeSel,
        /// Comma-separated right-hand sides.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[arg(long = "box")]
        bound: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct KappaArgs {
    #[arg(long)]
    pub kappa4: Option<f64>,
    /// Default: exp(max(h(alpha), |log|alpha||) + pi + 1).
    #[arg(long)]
    pub kappa5: Option<f64>,
    /// Default: max(kappa8, 4).
    #[arg(long)]
    pub kappa6: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum EffectiveCmd {
    /// Lower bound for |e alpha - p/q| with every intermediate enclosure.
    Gap {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        unit: UnitSel,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        q: String,
        #[command(flatten)]
        kappas: KappaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// `gap` on every convergent with q <= qmax.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        unit: UnitSel,
        #[arg(long)]
        qmax: u64,
        #[command(flatten)]
        kappas: KappaArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReportCmd {
    /// Render a saved approximation JSON report as CSV or JSON.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Parse a saved JSON report and confirm it re-renders identically.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    commands::dispatch(&cli, &cfg)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
