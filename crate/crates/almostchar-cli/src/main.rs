//! Command line for the exact representation-theory toolkit: Fourier
//! matrices, almost-character combinations, the packaged Sp₄(𝔽₂)
//! verification, CTAB interchange, class-fusion search and ζ
//! determination.
//!
//! Exit codes: 0 verified/success, 1 verification mismatch, 2 input or
//! format error, 3 fusion-search budget exhausted.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use almostchar::chartab;
use almostchar::chevalley::{self, LieType};
use almostchar::ctabio::{self, CTabDocument, CtabError};
use almostchar::cyclotomic::Cyc;
use almostchar::families::{self, FamiliesError, FamilyType, GammaId};
use almostchar::gf2group::GroupHandle;
use almostchar::verify::{self, SpecOverrides, VerifyError};

#[derive(Parser)]
#[command(
    name = "almostchar",
    version,
    about = "Exact nonabelian Fourier matrices, almost characters and ζ-scalar verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact Fourier matrix of M(Γ).
    Fourier {
        /// Γ: Z2, Z3, Z4, S3, S4 or S5.
        #[arg(long)]
        gamma: String,
    },
    /// Built-in family data.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// The packaged Sp₄(𝔽₂) reproduction.
    Sp4 {
        #[command(subcommand)]
        cmd: Sp4Cmd,
    },
    /// Character-table interchange (CTAB).
    Table {
        #[command(subcommand)]
        cmd: TableCmd,
    },
    /// Enumerate class fusions of a subgroup table into an ambient table.
    Fusion {
        /// Subgroup CTAB file.
        #[arg(long)]
        sub: PathBuf,
        /// Ambient-group CTAB file.
        #[arg(long)]
        big: PathBuf,
        /// Pinned assignment subclass=ambientclass (repeatable).
        #[arg(long = "pin")]
        pins: Vec<String>,
        /// Search-node budget; exhaustion exits with code 3.
        #[arg(long, default_value_t = ctabio::DEFAULT_FUSION_BUDGET)]
        budget: u64,
    },
    /// Solve for ζ on an ingested table, or extrapolate a known scalar.
    Zeta(ZetaArgs),
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Print an almost-character combination R_x over the family members.
    Row {
        /// Family type: B2, D4, F4 or E6.
        #[arg(long = "type")]
        family: String,
        /// Pair x, e.g. "(g3,theta)".
        #[arg(long)]
        pair: String,
    },
}

#[derive(Subcommand)]
enum Sp4Cmd {
    /// Run the end-to-end verification; exit 0 iff every stage passes.
    Verify,
}

#[derive(Subcommand)]
enum TableCmd {
    /// Compute a built-in table and print it in CTAB form.
    Compute {
        /// One of: sp4f2, s6, gamma:<Z2|Z3|Z4|S3|S4|S5>.
        #[arg(long)]
        group: String,
    },
    /// Validate a CTAB file; violations exit with code 1.
    Validate {
        /// CTAB file.
        file: PathBuf,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ZetaArgs {
    #[command(subcommand)]
    cmd: Option<ZetaCmd>,

    /// Family type: F4, E6 or D4.
    #[arg(long = "type")]
    family: Option<String>,
    /// CTAB file with the ingested table.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Pair label, e.g. "(g3,theta)".
    #[arg(long)]
    pair: Option<String>,
    /// Designated class name, e.g. "12o".
    #[arg(long)]
    class: Option<String>,
    /// Override the prime power q (default 2).
    #[arg(long)]
    q: Option<u64>,
    /// Override dim G.
    #[arg(long)]
    dim_g: Option<u32>,
    /// Override dim C.
    #[arg(long)]
    dim_c: Option<u32>,
    /// Override the support class names, comma-separated in λ-power order
    /// (class of g_a for a = 1, g, g², …).
    #[arg(long)]
    support: Option<String>,
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// ζ^m — the scalar for G(q^m) given the base-case scalar for G(q).
    Extrapolate {
        /// Base-case scalar as a cyclotomic string, e.g. "E(3)".
        #[arg(long)]
        zeta: String,
        /// Extension degree m.
        #[arg(long)]
        m: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Fourier { gamma } => {
            let id: GammaId = gamma.parse()?;
            let matrix = families::fourier_matrix(id)?;
            print_fourier(&matrix);
            Ok(ExitCode::SUCCESS)
        }
        Command::Family {
            cmd: FamilyCmd::Row { family, pair },
        } => {
            let t: FamilyType = family.parse()?;
            let gamma = families::gamma_group(families::family_data(t).gamma);
            let p = gamma.parse_pair(&pair)?;
            let row = families::almost_character_row(t, &p)?;
            println!("R_{} over the {} family:", gamma.pair_label(&p), t);
            for (name, coeff) in row {
                println!("  {coeff} * {name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sp4 {
            cmd: Sp4Cmd::Verify,
        } => {
            let outcome = verify::verify_sp4()?;
            for line in &outcome.audit {
                println!("{line}");
            }
            print_report(&outcome.report);
            println!("verified: ζ = {}", outcome.report.zeta);
            Ok(ExitCode::SUCCESS)
        }
        Command::Table {
            cmd: TableCmd::Compute { group },
        } => {
            let doc = compute_table(&group)?;
            print!("{}", ctabio::serialize_ctab(&doc));
            Ok(ExitCode::SUCCESS)
        }
        Command::Table {
            cmd: TableCmd::Validate { file },
        } => {
            let doc = read_table(&file)?;
            let report = ctabio::validate_ctab(&doc);
            if report.is_clean() {
                println!(
                    "table {}: clean ({} classes, order {})",
                    doc.name,
                    doc.class_count(),
                    doc.order
                );
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &report.violations {
                    println!("violation: {v}");
                }
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Fusion {
            sub,
            big,
            pins,
            budget,
        } => {
            let sub_doc = read_table(&sub)?;
            let big_doc = read_table(&big)?;
            let pins = parse_pins(&pins)?;
            let maps = ctabio::possible_fusions(&sub_doc, &big_doc, &pins, budget)?;
            for m in &maps {
                println!("{}", m.describe(&sub_doc, &big_doc));
            }
            println!(
                "{} fusion(s) of {} into {}",
                maps.len(),
                sub_doc.name,
                big_doc.name
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Zeta(args) => run_zeta(args),
    }
}

fn run_zeta(args: ZetaArgs) -> Result<ExitCode> {
    if let Some(ZetaCmd::Extrapolate { zeta, m }) = args.cmd {
        let base = Cyc::parse(&zeta).map_err(|e| anyhow!("bad cyclotomic {zeta:?}: {e}"))?;
        println!("{}", verify::zeta_extrapolate(&base, m));
        return Ok(ExitCode::SUCCESS);
    }
    let family: FamilyType = args
        .family
        .as_deref()
        .ok_or_else(|| anyhow!("--type is required (F4, E6 or D4)"))?
        .parse()?;
    let table = args
        .table
        .as_deref()
        .ok_or_else(|| anyhow!("--table is required"))?;
    let pair = args
        .pair
        .as_deref()
        .ok_or_else(|| anyhow!("--pair is required"))?;
    let class = args
        .class
        .as_deref()
        .ok_or_else(|| anyhow!("--class is required"))?;
    let doc = read_table(table)?;
    let overrides = SpecOverrides {
        q: args.q,
        dim_g: args.dim_g,
        dim_c: args.dim_c,
        support: args
            .support
            .map(|s| s.split(',').map(|n| n.trim().to_string()).collect()),
    };
    let outcome = verify::verify_from_table(family, &doc, pair, class, &overrides)?;
    for line in &outcome.audit {
        println!("{line}");
    }
    print_report(&outcome.report);
    println!("verified: ζ = {}", outcome.report.zeta);
    Ok(ExitCode::SUCCESS)
}

fn print_report(report: &verify::ZetaReport) {
    println!("family: {}", report.family);
    println!("pair: {}", report.pair);
    println!("class: {}", report.class_name);
    println!("almost-character value: {}", report.almost_value);
    println!("characteristic-function value: {}", report.char_fn_value);
    println!("sign: {}", if report.sign >= 0 { "+1" } else { "-1" });
    println!("zeta: {}", report.zeta);
    println!("extrapolation: {}", report.extrapolation);
}

fn print_fourier(matrix: &families::FourierMatrix) {
    let labels = matrix.labels();
    println!("pairs of M({}):", matrix.gamma);
    for (i, label) in labels.iter().enumerate() {
        println!("  {:>3}  {label}", i + 1);
    }
    let cells: Vec<Vec<String>> = matrix
        .entries
        .iter()
        .map(|row| row.iter().map(Cyc::to_string).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    println!("matrix ({n} x {n}):", n = labels.len());
    for row in &cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        println!("  {}", line.join(" "));
    }
}

fn compute_table(group: &str) -> Result<CTabDocument> {
    if let Some(id) = group.strip_prefix("gamma:") {
        let id: GammaId = id.parse()?;
        let mut doc = ctabio::document_from_table(families::gamma_group(id).group_table());
        doc.name = id.to_string();
        return Ok(doc);
    }
    match group {
        "sp4f2" => {
            let handle = GroupHandle::new(chevalley::adjoint_group_generators(LieType::C2))?;
            let table = chartab::character_table(&handle, "Sp4(F2)")?;
            Ok(ctabio::document_from_table(&table))
        }
        "s6" => Ok(ctabio::document_from_table(&chartab::symmetric_table(6)?)),
        other => Err(anyhow!(
            "unknown group {other:?}: expected sp4f2, s6 or gamma:<Z2|Z3|Z4|S3|S4|S5>"
        )),
    }
}

fn read_table(path: &std::path::Path) -> Result<CTabDocument> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ctabio::parse_ctab(&bytes)?)
}

fn parse_pins(pins: &[String]) -> Result<Vec<(String, String)>> {
    pins.iter()
        .map(|p| {
            p.split_once('=')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| anyhow!("pin {p:?} is not of the form subclass=ambientclass"))
        })
        .collect()
}

/// Maps an error chain to the documented exit codes: 3 for an exhausted
/// fusion budget, 2 for input/format problems, 1 for verification
/// mismatches.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CtabError>() {
            return match e {
                CtabError::BudgetExhausted(_) => 3,
                _ => 2,
            };
        }
        if let Some(e) = cause.downcast_ref::<VerifyError>() {
            return match e {
                VerifyError::Ctab(CtabError::BudgetExhausted(_)) => 3,
                VerifyError::Ctab(_)
                | VerifyError::ClassNotFound(_)
                | VerifyError::ZeroCharFnValue(_) => 2,
                VerifyError::Stage { stage, .. } if stage == "validate" => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<FamiliesError>().is_some()
            || cause.downcast_ref::<std::io::Error>().is_some()
        {
            return 2;
        }
    }
    2
}
