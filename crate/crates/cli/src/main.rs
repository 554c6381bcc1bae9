use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ctlframe::controlled::{controlled_gram, gram_row_bound, ControlledSystem};
use ctlframe::linalg::{inverse, ComplexMatrix, DEFAULT_TOLERANCE};
use ctlframe::riesz::{
    dual_type1, dual_type2, recover_m, riesz_diagnose_seeded, DEFAULT_SAMPLING_SEED,
};
use ctlframe::workbench::{
    gen_example24, gen_random_system, read_document, run_battery_seeded, GenMode, SystemDocument,
};
use ctlframe::{ControlledRieszSpec, Error};
use serde_json::json;

/// Diagnostics for (U, C)-controlled frames and controlled Riesz bases.
///
/// System documents are JSON: `dim`, `vectors` (one row of `[re, im]` pairs
/// per family member) and optional row-major `U`, `C` (identity if absent).
#[derive(Parser)]
#[command(name = "ctlframe", version)]
struct Cli {
    /// Tolerance override (default: the document's `tolerances.tol`, else 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Also write the command's JSON output to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Write the spectra of a `diagnose` run as CSV.
    #[arg(long = "spectrum-csv", global = true)]
    spectrum_csv: Option<PathBuf>,
    /// Seed for sampling (`diagnose`, `riesz`) or generation (`gen`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full diagnostic battery.
    Diagnose { file: PathBuf },
    /// Print the controlled Gram matrix and its norms.
    Gram { file: PathBuf },
    /// Controlled Riesz basis diagnosis only.
    Riesz { file: PathBuf },
    /// Emit the canonical dual of a controlled Riesz basis as a system document.
    Dual {
        file: PathBuf,
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=2))]
        kind: u8,
    },
    /// Emit the alternating-sign example with N 2x2 blocks (d = 2N).
    Example24 {
        #[arg(long)]
        blocks: usize,
    },
    /// Emit a seeded random system.
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        /// general | commuting_positive | riesz_spec
        #[arg(long, default_value = "general")]
        mode: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ctlframe: {e}");
            ExitCode::from(2)
        }
    }
}

struct Loaded {
    sys: ControlledSystem,
    tol: f64,
    seed: u64,
}

fn load(cli: &Cli, path: &Path) -> Result<Loaded, Error> {
    let doc = read_document(path)?;
    let tol = cli
        .tol
        .or(doc.tolerance_override())
        .unwrap_or(DEFAULT_TOLERANCE);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Parse(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let seed = cli.seed.or(doc.seed).unwrap_or(DEFAULT_SAMPLING_SEED);
    Ok(Loaded {
        sys: doc.to_system()?,
        tol,
        seed,
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    println!("{text}");
    if let Some(path) = &cli.report {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(())
}

fn pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

/// `Ok(false)` is a negative verdict (exit 1); errors are input errors (exit 2).
fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Diagnose { file } => {
            let l = load(cli, file)?;
            let report = run_battery_seeded(&l.sys, l.tol, l.seed);
            emit(cli, &report.to_json())?;
            if let Some(path) = &cli.spectrum_csv {
                std::fs::write(path, report.spectrum_csv())?;
            }
            Ok(report.exit_code == 0)
        }
        Command::Gram { file } => {
            let l = load(cli, file)?;
            let g = controlled_gram(&l.sys);
            let out = json!({
                "tolerance": l.tol,
                "size": g.size,
                "matrix": pairs(g.matrix()),
                "op_norm": g.op_norm,
                "hs_norm": g.hs_norm,
                "trace_norm": g.trace_norm,
                "min_singular": g.min_singular,
                "rank": g.rank(),
                "column_bound": gram_row_bound(&g),
                "singular_values": g.singular_values,
            });
            emit(cli, &serde_json::to_string_pretty(&out)?)?;
            Ok(true)
        }
        Command::Riesz { file } => {
            let l = load(cli, file)?;
            let d = riesz_diagnose_seeded(&l.sys, l.tol, l.seed);
            emit(cli, &serde_json::to_string_pretty(&d)?)?;
            Ok(d.is_controlled_riesz)
        }
        Command::Dual { file, kind } => {
            let l = load(cli, file)?;
            let d = riesz_diagnose_seeded(&l.sys, l.tol, l.seed);
            let m = match recover_m(&l.sys) {
                Some(m) if d.is_controlled_riesz => m,
                _ => {
                    eprintln!("ctlframe: family is not a controlled Riesz basis; no dual emitted");
                    return Ok(false);
                }
            };
            let (u, c) = (l.sys.u(), l.sys.c());
            let spec = ControlledRieszSpec::new(u.clone(), c.clone(), m)?;
            // Controllers under which the dual is again of the form U'^{-1} C' M' e_k.
            let (family, du, dc) = if *kind == 1 {
                (
                    dual_type1(&spec)?,
                    inverse(&u.adjoint(), "U*")?,
                    inverse(&c.adjoint(), "C*")?,
                )
            } else {
                (
                    dual_type2(&spec)?,
                    &c.adjoint() * u,
                    &u.adjoint() * &inverse(c, "C")?.adjoint(),
                )
            };
            let dual = ControlledSystem::new(family, du, dc)?;
            emit(cli, &SystemDocument::from_system(&dual).to_json())?;
            Ok(true)
        }
        Command::Example24 { blocks } => {
            let sys = gen_example24(*blocks)?;
            emit(cli, &SystemDocument::from_system(&sys).to_json())?;
            Ok(true)
        }
        Command::Gen { dim, count, mode } => {
            let mode: GenMode = mode.parse()?;
            let seed = cli.seed.unwrap_or(0);
            let sys = gen_random_system(*dim, *count, seed, mode)?;
            let mut doc = SystemDocument::from_system(&sys);
            doc.seed = Some(seed);
            emit(cli, &doc.to_json())?;
            Ok(true)
        }
    }
}
