//! `qmaps` — reproducible spectral-bound experiments on matrix maps.
//!
//! Subcommands: `zoo verify`, `scan`, `tightness`, `falsify`. Exit codes:
//! 0 = all expectations met, 1 = inequality violation or reference
//! mismatch, 2 = usage or IO error. Thread count comes from the
//! `QMAPS_THREADS` environment variable (default: available parallelism).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qmaps::positivity::{self, EnsembleConfig, EnsembleId};
use qmaps::scan;
use qmaps::superop::{ChoiMatrix, Superoperator};
use qmaps::transition::Rank2Witness;
use qmaps::zoo;
use qmaps::{InequalityId, Tolerances};

#[derive(Parser)]
#[command(
    name = "qmaps",
    version,
    about = "Spectral bounds on matrix maps: reference checks, ensemble scans, tightness constructions, positivity falsification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reference checks on the named example maps
    Zoo {
        #[command(subcommand)]
        command: ZooCommand,
    },
    /// Sample an ensemble and evaluate inequality checks
    Scan(ScanArgs),
    /// Build the tightness map for a coefficient c > d and report both bounds
    Tightness(TightnessArgs),
    /// Run the k-positivity falsifier on a Choi matrix file
    Falsify(FalsifyArgs),
}

#[derive(Subcommand)]
enum ZooCommand {
    /// Run every reference-value check and emit a pass/fail manifest
    Verify {
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 0xE3)]
        seed: u64,
        /// Grid spacing for the closed-form spectrum sweep
        #[arg(long = "alpha-grid", default_value_t = 0.1)]
        alpha_grid: f64,
        /// Manifest output path (default ./out/zoo-verify-<seed>.json)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Ensemble: cptp | cp | decomposable | unitary | gksl (alias:
    /// generators), or a canonical id like CPTP_GINIBRE
    #[arg(long, conflicts_with = "config")]
    ensemble: Option<String>,
    /// Matrix dimension d
    #[arg(long, conflicts_with = "config")]
    d: Option<usize>,
    /// Number of samples
    #[arg(long, conflicts_with = "config")]
    n: Option<usize>,
    /// Base seed; sample i uses sub-seed mix64(seed + (i+1)·golden)
    #[arg(long, conflicts_with = "config")]
    seed: Option<u64>,
    /// Choi/Kraus rank (map ensembles) or jump count (gksl); default d²
    #[arg(long)]
    rank: Option<usize>,
    /// Comma-separated inequality ids (default depends on the ensemble)
    #[arg(long, value_delimiter = ',')]
    inequalities: Vec<String>,
    /// Load the ensemble configuration from a JSON or TOML file instead
    #[arg(long)]
    config: Option<PathBuf>,
    /// Evaluate samples serially (rows are identical to parallel runs)
    #[arg(long)]
    serial: bool,
    /// Output directory (default ./out)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TightnessArgs {
    /// Matrix dimension d
    #[arg(long)]
    d: usize,
    /// Coefficient c; must exceed d
    #[arg(long)]
    c: f64,
}

#[derive(Args)]
struct FalsifyArgs {
    /// Path to a Choi matrix JSON file {"dim": d, "entries": [[re, im], ...]}
    #[arg(long)]
    choi: PathBuf,
    /// Schmidt rank bound of the witness search (1 or 2)
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Seesaw restarts
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    /// Seed for the seesaw starting points
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit 0 exactly when a certified witness is found
    #[arg(long, conflicts_with = "expect_pass")]
    expect_falsify: bool,
    /// Exit 0 exactly when no certified witness is found
    #[arg(long)]
    expect_pass: bool,
    /// Verdict output path (default: stdout only)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("QMAPS_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: QMAPS_THREADS must be a positive integer, got {threads}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let tol = Tolerances::default();
    match cli.command {
        Command::Zoo {
            command:
                ZooCommand::Verify {
                    seed,
                    alpha_grid,
                    out,
                },
        } => {
            let manifest = zoo::verify(seed, alpha_grid, &tol)?;
            let path = out.unwrap_or_else(|| default_out_path("zoo-verify", seed, "json"));
            write_file(&path, &manifest.to_json())?;
            println!("{}", manifest.to_json());
            if manifest.all_passed() {
                eprintln!(
                    "manifest: all {} checks passed ({})",
                    manifest.entries.len(),
                    path.display()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("manifest: failing checks: {:?}", manifest.failing_keys());
                Ok(ExitCode::from(1))
            }
        }
        Command::Scan(args) => run_scan(args, &tol),
        Command::Tightness(args) => {
            let (params, map) = zoo::tightness_map(args.d, args.c)?;
            let spectrum = qmaps::spectral::spectrum(&map)?;
            let bound = qmaps::spectral::check_map_bound(&map, &tol)?;
            let optimality = qmaps::spectral::check_optimality(&map, args.c, &tol)?;
            let report = serde_json::json!({
                "d": params.dim,
                "c": params.c,
                "x": params.x,
                "alpha": params.alpha,
                "trace": map.trace(&tol)?,
                "min_re": spectrum.min_re,
                "map_bound": bound,
                "optimality": optimality,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if optimality.satisfied && bound.satisfied {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Falsify(args) => run_falsify(args, &tol),
    }
}

fn run_scan(args: ScanArgs, tol: &Tolerances) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let config = if let Some(path) = &args.config {
        let mut config = EnsembleConfig::load(path)?;
        if let Some(rank) = args.rank {
            config.rank = rank;
        }
        config
    } else {
        let ensemble = args
            .ensemble
            .as_deref()
            .ok_or("either --config or --ensemble/--d/--n/--seed is required")?;
        let ensemble = parse_ensemble(ensemble)?;
        let d = args.d.ok_or("--d is required")?;
        let n = args.n.ok_or("--n is required")?;
        let seed = args.seed.ok_or("--seed is required")?;
        let mut config = EnsembleConfig::new(ensemble, d, n, seed);
        if let Some(rank) = args.rank {
            config.rank = rank;
        }
        config
    };
    config.validate()?;

    let inequalities = if args.inequalities.is_empty() {
        scan::default_inequalities(config.ensemble)
    } else {
        args.inequalities
            .iter()
            .map(|s| {
                InequalityId::parse(s.trim()).ok_or_else(|| format!("unknown inequality id {s}"))
            })
            .collect::<Result<Vec<_>, _>>()?
    };

    let result = scan::run_scan_with_mode(&config, &inequalities, tol, !args.serial)?;

    let dir = args.out.unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir)?;
    let stem = format!(
        "scan-{}-d{}-{}",
        config.ensemble.as_str().to_lowercase(),
        config.dim,
        config.seed
    );
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    write_file(&csv_path, &result.to_csv())?;
    write_file(&json_path, &result.summary_json())?;

    println!("{}", result.summary_json());
    eprintln!("rows: {} ({})", result.rows.len(), csv_path.display());

    let violations: usize = result.summaries.iter().map(|s| s.violations).sum();
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{violations} violated rows");
        ExitCode::from(1)
    })
}

fn run_falsify(
    args: FalsifyArgs,
    tol: &Tolerances,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if args.k != 1 && args.k != 2 {
        return Err("--k must be 1 or 2".into());
    }
    let text =
        std::fs::read_to_string(&args.choi).map_err(|e| format!("{}: {e}", args.choi.display()))?;
    let choi = ChoiMatrix::from_json(&text)?;
    let phi = Superoperator::from_choi(&choi);

    let cp = positivity::is_cp(&phi, tol)?;
    let outcome = positivity::falsify_k_positivity(&phi, args.k, args.restarts, args.seed, tol)?;
    let verdict = serde_json::json!({
        "dim": phi.dim(),
        "is_tp": phi.is_trace_preserving(tol),
        "is_hp": phi.is_hermiticity_preserving(tol),
        "is_cp": cp.is_cp,
        "min_choi_eigenvalue": cp.min_choi_eigenvalue,
        "k": outcome.k,
        "restarts": outcome.restarts,
        "seed": outcome.seed,
        "min_found": outcome.best_value,
        "falsified": outcome.witness.is_some(),
        "unconverged_restarts": outcome.unconverged_restarts,
        "witness": outcome.witness.as_ref().map(witness_json),
    });
    let text = serde_json::to_string_pretty(&verdict)?;
    println!("{text}");
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }

    let falsified = outcome.witness.is_some();
    Ok(if args.expect_falsify {
        if falsified {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    } else if args.expect_pass {
        if falsified {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    } else {
        ExitCode::SUCCESS
    })
}

fn witness_json(w: &Rank2Witness) -> serde_json::Value {
    let pairs =
        |v: &qmaps::linalg::CVector| -> Vec<[f64; 2]> { v.iter().map(|z| [z.re, z.im]).collect() };
    serde_json::json!({
        "a1": pairs(&w.a1),
        "a2": pairs(&w.a2),
        "b1": pairs(&w.b1),
        "b2": pairs(&w.b2),
        "psi": pairs(&w.psi),
        "value": w.value,
    })
}

fn parse_ensemble(name: &str) -> Result<EnsembleId, String> {
    if let Some(id) = EnsembleId::parse(name) {
        return Ok(id);
    }
    match name.to_ascii_lowercase().as_str() {
        "cptp" => Ok(EnsembleId::CptpGinibre),
        "cp" => Ok(EnsembleId::CpGinibre),
        "decomposable" => Ok(EnsembleId::Decomposable),
        "unitary" => Ok(EnsembleId::Unitary),
        "gksl" | "generators" => Ok(EnsembleId::Gksl),
        _ => Err(format!(
            "unknown ensemble {name}; expected cptp, cp, decomposable, unitary, or gksl"
        )),
    }
}

fn default_out_path(command: &str, seed: u64, extension: &str) -> PathBuf {
    PathBuf::from("out").join(format!("{command}-{seed}.{extension}"))
}

fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, contents)
}
