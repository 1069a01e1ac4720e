//! `stegafly` command line: embed, extract, metrics, and bench subcommands.
//!
//! Exit codes: 0 success, 1 validation failure, 2 runtime failure
//! (corruption or decryption). Every failure prints a single
//! machine-parseable `error=<code> msg=...` line to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stegafly_core::bench::{run_experiment, Algorithm, ExperimentSpec};
use stegafly_core::error::{CodecError, StegoError};
use stegafly_core::stego;
use stegafly_core::{EmbedRequest, ImageBuffer, QualityReport};

/// Environment variable consulted when --passphrase is absent, keeping
/// secrets out of shell history.
const PASSPHRASE_ENV: &str = "STEGAFLY_PASSPHRASE";

#[derive(Parser)]
#[command(name = "stegafly", version, about = "LSB image steganography with an optimizer-chosen pixel placement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a payload file and hide it in a cover image
    Embed(EmbedArgs),
    /// Recover a payload from a stego image
    Extract(ExtractArgs),
    /// Score a cover/stego pair
    Metrics(MetricsArgs),
    /// Run the FA/DE/HFA comparison on the benchmark suite
    Bench(BenchArgs),
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    payload: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    passphrase: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 40)]
    population: usize,
    #[arg(long, default_value_t = 200)]
    iterations: usize,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    stego: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    passphrase: Option<String>,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    stego: PathBuf,
    /// Additionally print the report as a single CSV row
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated subset of FA,DE,HFA
    #[arg(long, default_value = "FA,DE,HFA", value_delimiter = ',')]
    algorithms: Vec<String>,
    /// Comma-separated subset of sphere,rosenbrock,rastrigin,ackley
    #[arg(long, default_value = "sphere,rosenbrock,rastrigin,ackley", value_delimiter = ',')]
    functions: Vec<String>,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long, default_value_t = 2000)]
    iterations: usize,
    #[arg(long, default_value_t = 40)]
    population: usize,
    #[arg(long, default_value_t = 30)]
    dimension: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: PathBuf,
}

struct Failure {
    code: &'static str,
    message: String,
    exit: u8,
}

impl Failure {
    fn validation(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            exit: 1,
        }
    }

    fn runtime(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            exit: 2,
        }
    }
}

impl From<StegoError> for Failure {
    fn from(err: StegoError) -> Self {
        match &err {
            StegoError::Codec(CodecError::CrcMismatch) => {
                Failure::runtime("corrupted", err.to_string())
            }
            StegoError::Codec(CodecError::WrongKey) => {
                Failure::runtime("decryption_failed", err.to_string())
            }
            StegoError::Capacity { .. } => Failure::validation("capacity", err.to_string()),
            StegoError::NotStego(_) => Failure::validation("not_a_stego_image", err.to_string()),
            StegoError::LossyFormat(_) => Failure::validation("lossy_format", err.to_string()),
            StegoError::Metrics(_) => Failure::validation("metrics", err.to_string()),
            StegoError::Image(_) | StegoError::Io(_) => {
                Failure::validation("io", err.to_string())
            }
            _ => Failure::validation("invalid_input", err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Embed(args) => cmd_embed(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error={} msg={}", failure.code, failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

fn resolve_passphrase(flag: Option<String>) -> Result<String, Failure> {
    flag.or_else(|| std::env::var(PASSPHRASE_ENV).ok())
        .filter(|p| !p.is_empty())
        .ok_or_else(|| {
            Failure::validation(
                "missing_passphrase",
                format!("pass --passphrase or set {PASSPHRASE_ENV}"),
            )
        })
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.unwrap_or_else(rand::random)
}

/// Writes through a temp sibling and renames, so failures leave no partial
/// output file behind.
fn write_atomic(path: &Path, write: impl FnOnce(&Path) -> Result<(), StegoError>) -> Result<(), Failure> {
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Failure::validation("io", format!("bad output path {}", path.display())))?;
    // Prefix keeps the extension intact so format-sniffing writers still work.
    let tmp = path.with_file_name(format!(".tmp.{file_name}"));
    match write(&tmp) {
        Ok(()) => std::fs::rename(&tmp, path).map_err(|e| {
            let _ = std::fs::remove_file(&tmp);
            Failure::validation("io", e.to_string())
        }),
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e.into())
        }
    }
}

fn print_report(report: &QualityReport) {
    println!("mse={}", report.mse);
    println!("psnr_db={}", report.psnr_db);
    println!("ssim={}", report.ssim);
    match report.q_index {
        Some(q) => println!("q_index={q}"),
        None => println!("q_index=undefined"),
    }
    println!("fitness_z={}", report.fitness_z);
}

fn cmd_embed(args: EmbedArgs) -> Result<(), Failure> {
    let passphrase = resolve_passphrase(args.passphrase)?;
    let cover = ImageBuffer::load(&args.cover)?;
    let payload = std::fs::read(&args.payload)
        .map_err(|e| Failure::validation("io", format!("{}: {e}", args.payload.display())))?;

    let max_bytes = stego::capacity(&cover)?;
    if payload.len() > max_bytes {
        return Err(Failure::validation(
            "capacity",
            format!(
                "payload is {} bytes but this cover holds at most {} bytes",
                payload.len(),
                max_bytes
            ),
        ));
    }

    let seed = resolve_seed(args.seed);
    let mut request = EmbedRequest::new(cover, payload, passphrase, seed);
    request.optimizer.population_size = args.population;
    request.optimizer.max_iterations = args.iterations;

    let outcome = stego::embed(&request)?;
    write_atomic(&args.out, |tmp| outcome.stego.save_png(tmp))?;

    println!("seed={seed}");
    print_report(&outcome.report);
    println!("baseline_fitness={}", outcome.baseline_fitness);
    println!("best_fitness={}", outcome.trace.best_solution.fitness);
    println!("evaluations={}", outcome.trace.evaluations);
    println!("scan_start={}", outcome.header.scan_start);
    println!("scan_stride={}", outcome.header.scan_stride);
    println!("out={}", args.out.display());
    Ok(())
}

fn cmd_extract(args: ExtractArgs) -> Result<(), Failure> {
    let passphrase = resolve_passphrase(args.passphrase)?;
    let stego_img = ImageBuffer::load(&args.stego)?;
    let payload = stego::extract(&stego_img, &passphrase)?;
    write_atomic(&args.out, |tmp| {
        std::fs::write(tmp, &payload)?;
        Ok(())
    })?;
    println!("bytes={}", payload.len());
    println!("out={}", args.out.display());
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), Failure> {
    let cover = ImageBuffer::load(&args.cover)?;
    let stego_img = ImageBuffer::load(&args.stego)?;
    let report = QualityReport::compute(&cover, &stego_img).map_err(StegoError::from)?;
    print_report(&report);
    if args.csv {
        let q = report
            .q_index
            .map(|q| q.to_string())
            .unwrap_or_else(|| "nan".into());
        println!(
            "{},{},{},{},{}",
            report.mse, report.psnr_db, report.ssim, q, report.fitness_z
        );
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let mut algorithms = Vec::new();
    for name in &args.algorithms {
        algorithms.push(Algorithm::parse(name).ok_or_else(|| {
            Failure::validation(
                "unknown_algorithm",
                format!("'{name}' is not one of FA, DE, HFA"),
            )
        })?);
    }
    let mut functions = Vec::new();
    for name in &args.functions {
        functions.push(
            stegafly_core::bench::function_by_name(name, args.dimension).ok_or_else(|| {
                Failure::validation(
                    "unknown_function",
                    format!("'{name}' is not one of sphere, rosenbrock, rastrigin, ackley"),
                )
            })?,
        );
    }

    let spec = ExperimentSpec {
        algorithms,
        functions,
        runs: args.runs,
        iterations: args.iterations,
        population: args.population,
        base_seed: resolve_seed(args.seed),
    };
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::validation("io", e.to_string()))?;

    let results = run_experiment(&spec);
    let summary_path = args.out_dir.join("summary.csv");
    let convergence_path = args.out_dir.join("convergence.csv");
    write_atomic(&summary_path, |tmp| {
        std::fs::write(tmp, results.summary_csv())?;
        Ok(())
    })?;
    write_atomic(&convergence_path, |tmp| {
        std::fs::write(tmp, results.convergence_csv())?;
        Ok(())
    })?;
    println!("seed={}", spec.base_seed);
    println!("summary={}", summary_path.display());
    println!("convergence={}", convergence_path.display());
    Ok(())
}
