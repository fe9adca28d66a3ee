//! Command-line front end: code construction, Monte Carlo campaigns,
//! bound tables, and the embedded selftest.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::Config;
use polar::{run_campaign, CodeSpec};

#[derive(Parser)]
#[command(
    name = "polar",
    version,
    about = "Polar-code construction, SC/LSC/LCLSC decoding, and seeded FER simulation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a code and write its specification file
    Construct(JobArgs),
    /// Run a Monte Carlo campaign; writes results.csv and manifest.toml
    Simulate(SimulateArgs),
    /// Print the per-rate bounds table (CSV on stdout)
    Bounds(JobArgs),
    /// Run the embedded oracle suite
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct JobArgs {
    /// TOML configuration file
    config: PathBuf,
    /// Override a config key: --set section.key=value (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    job: JobArgs,
    /// Also emit a gnuplot script next to the CSV
    #[arg(long)]
    gnuplot: bool,
    /// Verbose diagnostics: write trace.csv with per-frame outcome and
    /// per-bit decoding modes for the first FRAMES frames of every cell
    #[arg(long, value_name = "FRAMES", default_value_t = 0)]
    trace: u64,
}

#[derive(Args)]
struct SelftestArgs {
    /// Negative control: corrupt the f-combine kernel; the suite must fail
    #[arg(long)]
    corrupt_f: bool,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Construct(args) => cmd_construct(&args),
        Cmd::Simulate(args) => cmd_simulate(&args),
        Cmd::Bounds(args) => cmd_bounds(&args),
        Cmd::Selftest(args) => cmd_selftest(&args),
    }
}

fn load(args: &JobArgs) -> Result<Config> {
    Config::load(&args.config, &args.set)
}

fn build_pool(cfg: &Config) {
    let workers = if cfg.sim.workers > 0 {
        cfg.sim.workers
    } else {
        std::env::var("POLAR_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    };
    if workers > 0 {
        // Ignore "already initialized", which only happens in-process twice.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
}

fn cmd_construct(args: &JobArgs) -> Result<ExitCode> {
    let cfg = load(args)?;
    let k = cfg.single_info_len()?;
    let ch = cfg.channel()?;
    let code = CodeSpec::construct(cfg.code.block_len, k, &ch, cfg.p_mode()?)?;
    let dir = PathBuf::from(&cfg.output.dir);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output.dir {}", dir.display()))?;
    let path = dir.join("codespec.toml");
    std::fs::write(&path, output::codespec_toml(&code, &ch))
        .with_context(|| format!("cannot write {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let cfg = load(&args.job)?;
    build_pool(&cfg);
    let campaign = cfg.campaign()?;
    eprintln!(
        "simulating {} over {} at N={}: {} rates, {} trials, seed {}",
        campaign
            .decoders
            .iter()
            .map(|d| d.name())
            .collect::<Vec<_>>()
            .join("/"),
        campaign.channel,
        campaign.block_len,
        campaign.info_lens.len(),
        campaign.trials,
        campaign.seed,
    );
    let stats = run_campaign(&campaign)?;
    let dir = PathBuf::from(&cfg.output.dir);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create output.dir {}", dir.display()))?;
    let csv_path = dir.join("results.csv");
    std::fs::write(&csv_path, output::results_csv(&stats, campaign.list_size))?;
    let manifest_path = dir.join("manifest.toml");
    std::fs::write(&manifest_path, output::manifest_toml(&cfg, &stats)?)?;
    if args.gnuplot || cfg.output.gnuplot {
        std::fs::write(dir.join("plot.gp"), output::gnuplot_script())?;
    }
    if args.trace > 0 {
        let trace_path = dir.join("trace.csv");
        std::fs::write(&trace_path, output::trace_csv(&campaign, args.trace)?)?;
        eprintln!("wrote {}", trace_path.display());
    }
    eprintln!("wrote {}", csv_path.display());
    eprintln!("wrote {}", manifest_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(args: &JobArgs) -> Result<ExitCode> {
    let cfg = load(args)?;
    let ch = cfg.channel()?;
    let p_mode = cfg.p_mode()?;
    println!("k,rate,ml_lower,union_upper,z_th,a");
    for k in cfg.info_grid()? {
        let code = CodeSpec::construct(cfg.code.block_len, k, &ch, p_mode)?;
        println!(
            "{},{},{},{},{},{}",
            k,
            k as f64 / cfg.code.block_len as f64,
            code.ml_fer_lower_bound(),
            code.sc_fer_upper_bound(),
            code.z_threshold(),
            code.split_index()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(args: &SelftestArgs) -> Result<ExitCode> {
    let report = polar::selftest::run(polar::selftest::SelftestOptions {
        corrupt_f: args.corrupt_f,
    });
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        if check.detail.is_empty() {
            println!("{status} {}", check.name);
        } else {
            println!("{status} {} ({})", check.name, check.detail);
        }
    }
    if report.all_passed() {
        println!("selftest: all {} checks passed", report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("selftest: FAILURES present");
        Ok(ExitCode::FAILURE)
    }
}
