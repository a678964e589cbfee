use clap::{Args, Parser, Subcommand};
use gfscma::scma::load_codebook;
use gfscma::scma::{builtin_codebook, BuiltinCodebook};
use gfscma_cli::{render_csv, run_asep, run_psuc, run_verify_with, Mode, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gfscma", version, about = "Grant-free SCMA network analysis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Success probability and ASE along the configured sweep.
    Psuc(RunArgs),
    /// Same table as `psuc`.
    Ase(RunArgs),
    /// Average symbol error probability along the configured sweep.
    Asep(RunArgs),
    /// `psuc` with the simulator only.
    Simulate(RunArgs),
    /// Run the invariant suite; exits nonzero if any check fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; stdout when neither this nor the config names one.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    n_real: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// JSON report destination; the text report always goes to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra codebook files to check alongside the built-ins.
    #[arg(long)]
    codebook: Vec<PathBuf>,
}

fn threads() -> Result<Option<usize>, String> {
    match std::env::var("GFSCMA_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .map(Some)
            .ok_or_else(|| format!("GFSCMA_THREADS must be a positive integer, got `{v}`")),
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: RunArgs, name: &str, forced: Option<Mode>) -> Result<(), String> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p),
        None => RunConfig::parse("{}"),
    }
    .map_err(|e| e.to_string())?;
    if let Some(s) = args.seed {
        cfg.set_seed(s);
    }
    if let Some(n) = args.n_real {
        cfg.set_n_real(n).map_err(|e| e.to_string())?;
    }
    if let Some(m) = forced.or(args.mode) {
        cfg.set_mode(m);
    }
    if let Some(o) = args.out {
        cfg.set_output(o);
    }
    let table = if name == "asep" { run_asep(&cfg) } else { run_psuc(&cfg) }.map_err(|e| e.to_string())?;
    write_out(cfg.file.output.as_ref(), &render_csv(&cfg, name, &table))
}

fn verify(args: VerifyArgs) -> Result<bool, String> {
    let mut cbs: Vec<(String, _)> = BuiltinCodebook::ALL
        .into_iter()
        .map(|b| (b.name().to_owned(), builtin_codebook(b)))
        .collect();
    let mut load_errors = Vec::new();
    for path in &args.codebook {
        let name = path.display().to_string();
        match load_codebook(path) {
            Ok(cb) => cbs.push((name, cb)),
            Err(e) => load_errors.push((name, e.to_string())),
        }
    }
    let report = run_verify_with(args.seed, &cbs, &load_errors);
    eprint!("{}", report.to_text());
    write_out(args.out.as_ref(), &(report.to_json() + "\n"))?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads().and_then(|n| {
        if let Some(n) = n {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())?;
        }
        match cli.command {
            Command::Psuc(a) => run(a, "psuc", None).map(|()| true),
            Command::Ase(a) => run(a, "ase", None).map(|()| true),
            Command::Asep(a) => run(a, "asep", None).map(|()| true),
            Command::Simulate(a) => run(a, "simulate", Some(Mode::Simulate)).map(|()| true),
            Command::Verify(a) => verify(a),
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
