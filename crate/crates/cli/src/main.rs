//! `modcurve`: exact computations for congruence subgroups Γ₁(N₁)∩Γ(N₂),
//! their theta characters and lifted groups, eigenform expansions at
//! cusps, weight-one dimension bookkeeping, and Sp₄ plus-structures.
//!
//! All outputs are deterministic JSON or TSV; randomized searches take an
//! explicit seed and embed it in the report. Exit codes: 0 success, 2
//! usage/input, 3 non-membership, 4 cap/budget exhausted, 5 series
//! obstruction, 6 internal inconsistency, 7 I/O.

mod cache;
mod commands;
mod failure;
mod render;

use cache::Cache;
use clap::{Args, Parser, Subcommand};
use failure::Failure;
use modcurve::sl2::GroupSpec;

/// Group selection shared by curve-level commands.
#[derive(Args, Debug)]
struct SpecArgs {
    /// Shorthand for --n1 N --n2 1.
    #[arg(long, conflicts_with_all = ["n1", "n2"])]
    gamma1: Option<u64>,
    /// First level N₁ (the Γ₁ part).
    #[arg(long)]
    n1: Option<u64>,
    /// Second level N₂ (the principal part); defaults to 1.
    #[arg(long)]
    n2: Option<u64>,
}

impl SpecArgs {
    fn resolve(&self) -> Result<GroupSpec, Failure> {
        match (self.gamma1, self.n1) {
            (Some(n), None) => Ok(GroupSpec::gamma1(n)?),
            (None, Some(n1)) => Ok(GroupSpec::new(n1, self.n2.unwrap_or(1))?),
            _ => Err(Failure::usage(
                "select a group with --gamma1 N or --n1 A [--n2 B]".into(),
            )),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "modcurve", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Curve-level invariants.
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Cusps of the quotient curve as TSV.
    Cusps {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Theta characters and congruence verdicts.
    Theta {
        #[command(subcommand)]
        cmd: ThetaCmd,
    },
    /// q-expansion of an eigenform combination at a cusp.
    Expand {
        /// Eigenform JSON file (single record or list).
        #[arg(long)]
        form: String,
        /// Cusp label "M1:a:b".
        #[arg(long)]
        cusp: String,
        /// Precision bound in j-units (default 4·M₁ − 1).
        #[arg(long)]
        prec: Option<i64>,
        /// Rational weights "c1,c2,..." over the file's records.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// Emit the full JSON series schema instead of TSV.
        #[arg(long)]
        json: bool,
    },
    /// Vanishing orders of a combination at all cusps.
    Vanishing {
        /// Eigenform JSON file (single record or list).
        #[arg(long)]
        form: String,
        /// Expansion precision per cusp.
        #[arg(long, default_value_t = 8)]
        prec: u64,
        /// Rational weights "c1,c2,..." over the file's records.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
    },
    /// Weight-one bookkeeping.
    Weight1 {
        #[command(subcommand)]
        cmd: Weight1Cmd,
    },
    /// Formal weight-one square root of a weight-two combination.
    Sqrt {
        /// Eigenform JSON file (single record or list).
        #[arg(long)]
        form: String,
        /// Rational weights "c1,c2,..." over the file's records.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// Precision at ∞ in j-units.
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Brill-Noether specialty.
    Bn {
        #[command(subcommand)]
        cmd: BnCmd,
    },
    /// Sp₄(Z) membership and plus-type level structures.
    Sp4 {
        #[command(subcommand)]
        cmd: Sp4Cmd,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        cmd: CacheCmd,
    },
}

#[derive(Subcommand, Debug)]
enum CurveCmd {
    /// Genus, cusp count, index, widths, general level.
    Info {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Subcommand, Debug)]
enum ThetaCmd {
    /// Serialized characters, one per line.
    List {
        #[command(flatten)]
        spec: SpecArgs,
        /// Maximum characters to print.
        #[arg(long, default_value_t = 4096)]
        limit: usize,
    },
    /// Dimension and cardinality of the character space.
    Count {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Congruence verdicts by the direct and shear-span methods.
    Congruence {
        #[command(flatten)]
        spec: SpecArgs,
        /// Stream every character (guarded at 2^20).
        #[arg(long)]
        all: bool,
        /// Sample this many characters instead of streaming all.
        #[arg(long, conflicts_with = "all")]
        sample: Option<usize>,
        /// RNG seed for sampling; embedded in the report.
        #[arg(long, default_value_t = 0x5eed_0002)]
        seed: u64,
        /// Element cap for finite quotient enumeration.
        #[arg(long, default_value_t = 5_000_000)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Weight1Cmd {
    /// Dimension formulas; optionally the rank trick for dim S₁.
    Dim {
        #[command(flatten)]
        spec: SpecArgs,
        /// Weight.
        #[arg(long)]
        k: u64,
        /// JSON matrix of first cusp coefficients of an S₁₃ basis.
        #[arg(long)]
        s13_matrix: Option<String>,
        /// dim S₁₃ to subtract the rank from.
        #[arg(long)]
        dim_s13: Option<u64>,
    },
    /// Discriminant coefficients τ(n), disk-cached by precision.
    Delta {
        /// Exclusive precision bound on n.
        #[arg(long, default_value_t = 32)]
        prec: i64,
    },
}

#[derive(Subcommand, Debug)]
enum BnCmd {
    /// Specialty verdict by the three criteria.
    Check {
        #[command(flatten)]
        spec: SpecArgs,
        /// Ingested dim S₁ datum.
        #[arg(long)]
        dim_s1: Option<u64>,
        /// Supergroup "N1" or "N1,N2"; repeatable.
        #[arg(long = "supergroup")]
        supergroups: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum Sp4Cmd {
    /// Symplectic and congruence membership of a 4×4 integer matrix.
    Member {
        /// Matrix as JSON [[a,b,c,d],...] (4 rows).
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Congruence modulus N.
        #[arg(long)]
        modulus: u64,
        /// Congruence shape: gamma or gamma1.
        #[arg(long, default_value = "gamma1")]
        kind: String,
    },
    /// Validate a plus-type level structure and its swap behavior.
    StructureCheck {
        /// Congruence shape: gamma or gamma1.
        #[arg(long, default_value = "gamma1")]
        kind: String,
        /// Modulus N.
        #[arg(long)]
        modulus: u64,
        /// Points as JSON [[x1,x2,x3,x4],...] (2 or 4 rows).
        #[arg(long)]
        points: String,
    },
}

#[derive(Subcommand, Debug)]
enum CacheCmd {
    /// Remove all cache entries.
    Purge,
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cache = Cache::open();
    match cli.cmd {
        Cmd::Curve {
            cmd: CurveCmd::Info { spec },
        } => commands::curve_info(&spec.resolve()?, &cache),
        Cmd::Cusps { spec } => commands::cusps_tsv(&spec.resolve()?, &cache),
        Cmd::Theta { cmd } => match cmd {
            ThetaCmd::List { spec, limit } => {
                commands::theta_list(&spec.resolve()?, limit, &cache)
            }
            ThetaCmd::Count { spec } => commands::theta_count(&spec.resolve()?, &cache),
            ThetaCmd::Congruence {
                spec,
                all,
                sample,
                seed,
                cap,
            } => {
                let selection = match (all, sample) {
                    (_, Some(count)) => commands::CharSelection::Sample { count, seed },
                    _ => commands::CharSelection::All,
                };
                commands::theta_congruence(&spec.resolve()?, selection, cap, &cache)
            }
        },
        Cmd::Expand {
            form,
            cusp,
            prec,
            coeffs,
            json,
        } => commands::expand(&form, &cusp, prec, coeffs.as_deref(), json),
        Cmd::Vanishing { form, prec, coeffs } => {
            commands::vanishing(&form, prec, coeffs.as_deref())
        }
        Cmd::Weight1 { cmd } => match cmd {
            Weight1Cmd::Dim {
                spec,
                k,
                s13_matrix,
                dim_s13,
            } => commands::weight1_dim(&spec.resolve()?, k, s13_matrix.as_deref(), dim_s13),
            Weight1Cmd::Delta { prec } => commands::weight1_delta(prec, &cache),
        },
        Cmd::Sqrt { form, coeffs, prec } => {
            commands::sqrt(&form, coeffs.as_deref(), prec, &cache)
        }
        Cmd::Bn {
            cmd: BnCmd::Check {
                spec,
                dim_s1,
                supergroups,
            },
        } => commands::bn_check(&spec.resolve()?, dim_s1, &supergroups),
        Cmd::Sp4 { cmd } => match cmd {
            Sp4Cmd::Member {
                matrix,
                modulus,
                kind,
            } => commands::sp4_member_cmd(&matrix, modulus, &kind),
            Sp4Cmd::StructureCheck {
                kind,
                modulus,
                points,
            } => commands::sp4_structure_check(&kind, modulus, &points),
        },
        Cmd::Cache { cmd: CacheCmd::Purge } => commands::cache_purge(&cache),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => print!("{out}"),
        Err(f) => {
            eprintln!("error: {f}");
            std::process::exit(f.code);
        }
    }
}
