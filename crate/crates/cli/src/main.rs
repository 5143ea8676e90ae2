mod json;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand, ValueEnum};

use canring::alpha::{check_central_minors, AlphaCase};
use canring::elim;
use canring::pipeline::{self, PipelineConfig, PipelineRun};
use canring::resources::peak_memory_kb;
use canring::verify::{self, Context, Golden, SpecialSurface, CHECK_NAMES};

#[derive(Parser)]
#[command(
    name = "canring",
    version,
    about = "Canonical-ring matrix families: elimination pipeline and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the rank condition for one family and write its artifacts.
    Pipeline {
        #[arg(long = "alpha", value_parser = clap::value_parser!(u8).range(1..=3))]
        alpha: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        c: u8,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run verification checks.
    Verify {
        /// Check names, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all", value_parser = check_names())]
        check: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON file `{"g", "q": [4], "conic"}` replacing the expected final border.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Check one special surface of the `α1, c=1` family.
    Special {
        #[arg(long, value_enum)]
        surface: SurfaceArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SurfaceArg {
    By,
    Bf,
}

fn check_names() -> PossibleValuesParser {
    PossibleValuesParser::new(std::iter::once("all").chain(CHECK_NAMES))
}

const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Pipeline {
            alpha,
            c,
            out,
            max_rounds,
            seed,
        } => cmd_pipeline(alpha, c, &out, max_rounds, seed),
        Command::Verify { check, seed, golden } => cmd_verify(&check, seed, golden.as_deref()),
        Command::Special { surface } => cmd_special(surface),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), String> {
    fs::write(dir.join(name), text).map_err(|e| format!("{}: {e}", dir.join(name).display()))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Structural checks on a solved run; the first failure.
fn structural_failure(run: &PipelineRun) -> Option<String> {
    if let Err(e) = run.alpha.check_pattern() {
        return Some(format!("degree/sign pattern: {e}"));
    }
    if let Err(e) = check_central_minors(&run.alpha, run.alpha.get(0, 5)) {
        return Some(format!("central minors: {e}"));
    }
    let bad = elim::soundness_failures(&run.setup.system.f, &run.resolved);
    if !bad.is_empty() {
        return Some(format!("{} equations nonzero after back-substitution", bad.len()));
    }
    None
}

fn cmd_pipeline(j: u8, c: u8, out: &Path, max_rounds: usize, seed: u64) -> Result<u8, String> {
    let t0 = Instant::now();
    let case = AlphaCase::new(j, c).map_err(|e| e.to_string())?;
    let config = PipelineConfig { case, max_rounds };
    let run = pipeline::run(&config).map_err(|e| e.to_string())?;
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;

    write(out, "alpha.json", &pretty(&json::alpha_file(&run)))?;
    write(out, "equations.json", &pretty(&json::equations_file(&run)))?;
    let mut deps = String::new();
    for d in &run.outcome.state.deps {
        deps.push_str(&d.to_line());
        deps.push('\n');
    }
    write(out, "deps.log", &deps)?;

    let failure = if run.solved() {
        structural_failure(&run)
    } else {
        let mut dump = String::new();
        for p in &run.outcome.state.f {
            dump.push_str(&p.to_text());
            dump.push('\n');
        }
        write(out, "residual_f.txt", &dump)?;
        let head: Vec<String> = run.outcome.state.f.iter().take(5).map(|p| p.to_text()).collect();
        Some(format!(
            "{} equations left (all in residual_f.txt); first:\n  {}",
            run.outcome.state.f.len(),
            head.join("\n  ")
        ))
    };
    let mut stats = json::stats_file(&run, t0.elapsed().as_secs_f64(), peak_memory_kb());
    // the pipeline itself draws no random numbers
    stats["seed"] = seed.into();
    write(out, "stats.json", &pretty(&stats))?;

    println!(
        "{case}: {} equations, {} parameters",
        run.setup.system.f.len(),
        run.setup.system.param_count()
    );
    println!("survivors: {}", run.survivors.join(", "));
    match failure {
        None => {
            println!("solved in {:.2}s", t0.elapsed().as_secs_f64());
            Ok(0)
        }
        Some(f) => {
            eprintln!("{case} failed: {f}");
            Ok(1)
        }
    }
}

fn cmd_verify(checks: &[String], seed: u64, golden: Option<&Path>) -> Result<u8, String> {
    let mut ctx = Context::new(seed);
    if let Some(path) = golden {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return Ok(USAGE);
            }
        };
        ctx.golden = match serde_json::from_str::<Golden>(&text) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return Ok(USAGE);
            }
        };
    }
    let names: Vec<&str> = if checks.iter().any(|c| c == "all") {
        CHECK_NAMES.to_vec()
    } else {
        checks.iter().map(String::as_str).collect()
    };
    let mut failed = 0;
    for name in names {
        let report = verify::run_named(name, &ctx).expect("validated name");
        println!("{}", report.line());
        if report.status == verify::Status::Fail {
            failed += 1;
        }
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_special(surface: SurfaceArg) -> Result<u8, String> {
    let surface = match surface {
        SurfaceArg::By => SpecialSurface::By,
        SurfaceArg::Bf => SpecialSurface::Bf,
    };
    let ctx = Context::new(0);
    let report = verify::verify_special(&ctx, surface);
    println!("{}", report.line());
    Ok(if report.passed() { 0 } else { 1 })
}
