//! Command-line front end: `run`, `gen` and `verify`.

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use symbreak::bench::{BuildOptions, Family, GenParams, Instance, Method};
use symbreak::harness::{run_trials, verify, write_records, Format, RunConfig, Suite, VerifyParams};
use symbreak::search::{Status, ValueOrder};
use symbreak::symmetry::AisSymmetry;
use symbreak::{Error, Result};

#[derive(Parser)]
#[command(name = "symbreak", version, about = "Symmetry breaking experiments on a finite-domain solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance file or a generated instance and print one record per trial.
    Run(RunArgs),
    /// Write a generated instance to stdout or a file.
    Gen(GenArgs),
    /// Run an oracle verification suite and print its report as JSON.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenSpec {
    /// Generate an instance of this family instead of reading --instance.
    #[arg(long, value_enum)]
    gen: Option<Family>,
    /// Series length, vertices or applications.
    #[arg(long, default_value_t = 11)]
    n: usize,
    /// Number of halls (concert only).
    #[arg(long, default_value_t = 3)]
    halls: usize,
    /// Largest variable block.
    #[arg(long, default_value_t = 8)]
    max_part: usize,
    /// Generator seed (defaults to --seed).
    #[arg(long)]
    gen_seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "gen")]
    instance: Option<PathBuf>,
    #[command(flatten)]
    spec: GenSpec,
    #[arg(long, value_enum, default_value = "static-lex")]
    method: Method,
    #[arg(long, value_enum, default_value = "lex")]
    value_order: ValueOrder,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Branch cutoff per restart (restarts only).
    #[arg(long)]
    cutoff: Option<u64>,
    /// Wall-clock budget per trial in seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Enumerate all solutions; `opt` then holds their number.
    #[arg(long)]
    count_all: bool,
    /// Independent trials with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Image of the series set posted by static-lex.
    #[arg(long, value_parser = parse_ais_symmetry)]
    ais_symmetry: Option<AisSymmetry>,
    /// Disable the forced rule's commitment at the first solution.
    #[arg(long)]
    no_patch: bool,
    /// Print the last solution of each trial to stderr.
    #[arg(long)]
    show_solution: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    spec: GenSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Series lengths checked against the oracle.
    #[arg(long, value_delimiter = ',', default_values_t = [5, 6, 7])]
    series: Vec<usize>,
    /// Number of seeded piecewise toy CSPs.
    #[arg(long, default_value_t = 50)]
    toys: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_ais_symmetry(s: &str) -> std::result::Result<AisSymmetry, String> {
    AisSymmetry::parse(s).ok_or_else(|| format!("expected one of id, rev, inv, inv-rev; got `{s}`"))
}

fn generate(spec: &GenSpec, seed: u64) -> Result<(Instance, String)> {
    let family = spec.gen.ok_or_else(|| Error::Config("either --instance or --gen is required".into()))?;
    let seed = spec.gen_seed.unwrap_or(seed);
    let p = GenParams { family, n: spec.n, halls: spec.halls, max_part: spec.max_part, seed };
    let name = match family {
        Family::Ais => format!("ais-{}", spec.n),
        Family::Coloring => format!("coloring-n{}-p{}-s{seed}", spec.n, spec.max_part),
        Family::Concert => format!("concert-n{}-m{}-p{}-s{seed}", spec.n, spec.halls, spec.max_part),
    };
    Ok((p.generate()?, name))
}

fn cmd_run(a: RunArgs) -> Result<ExitCode> {
    let (instance, name) = match &a.instance {
        Some(path) => {
            let name = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
            (Instance::read(path)?, name)
        }
        None => generate(&a.spec, a.seed)?,
    };
    if !(a.time_limit > 0.0 && a.time_limit.is_finite()) {
        return Err(Error::Config("--time-limit must be a positive number of seconds".into()));
    }
    if a.trials == 0 {
        return Err(Error::Config("--trials must be at least 1".into()));
    }
    let mut build = BuildOptions::new(a.method, a.value_order, a.seed);
    build.ais_symmetry = a.ais_symmetry;
    build.patch = !a.no_patch;
    let cfg = RunConfig {
        instance,
        name,
        build,
        cutoff: a.cutoff,
        time_limit: Some(Duration::from_secs_f64(a.time_limit)),
        count_all: a.count_all,
    };
    let records = run_trials(&cfg, a.trials)?;
    if a.show_solution {
        for r in &records {
            if let Some(s) = &r.solution {
                let s: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                eprintln!("seed {}: {}", r.seed, s.join(","));
            }
        }
    }
    write_records(&records, a.format, io::stdout().lock())?;
    let exhausted = records.iter().any(|r| r.status != Status::Complete);
    Ok(if exhausted { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn cmd_gen(a: GenArgs) -> Result<ExitCode> {
    let (inst, _) = generate(&a.spec, a.seed)?;
    match a.output {
        Some(p) => inst.write(&p)?,
        None => print!("{inst}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let rep = verify(a.suite, &VerifyParams { series: a.series, toys: a.toys, seed: a.seed })?;
    serde_json::to_writer_pretty(io::stdout().lock(), &rep).map_err(|e| Error::Internal(e.to_string()))?;
    println!();
    Ok(if rep.all_pass() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
