use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use silofill::harness::{
    builtin_examples, find_example, parse_h_list, run_experiment, ExperimentConfig, ExperimentReport, Mode,
};
use silofill::{Error, Result};

#[derive(Parser)]
#[command(name = "silofill", version, about = "Silo filling with a standing and a rolling layer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discrete similarity profiles for every spacing.
    Similarity(RunArgs),
    /// Evolve from rest until the profile stops changing shape.
    Evolve(RunArgs),
    /// Exact (1D), discrete and evolved profiles with an error table.
    Compare(RunArgs),
    /// List the built-in experiments, print one, or run it.
    Examples(ExampleArgs),
}

#[derive(Args)]
struct Overrides {
    /// Output directory (replaces output.directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated spacings, e.g. `0.01,0.005` or `1/64,1/128`.
    #[arg(long)]
    h_list: Option<String>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Print nothing but errors.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct ExampleArgs {
    /// Example to run; lists all when omitted.
    name: Option<String>,
    /// Print the example's config instead of running it.
    #[arg(long)]
    dump: bool,
    #[command(flatten)]
    overrides: Overrides,
}

fn apply(mut cfg: ExperimentConfig, o: &Overrides) -> Result<ExperimentConfig> {
    if let Some(dir) = &o.out {
        cfg = cfg.with_directory(dir);
    }
    if let Some(text) = &o.h_list {
        cfg = cfg.with_h_list(parse_h_list(text)?)?;
    }
    if let Some(n) = o.max_steps {
        cfg = cfg.with_max_steps(n)?;
    }
    Ok(cfg)
}

fn print_report(cfg: &ExperimentConfig, rep: &ExperimentReport) {
    if !cfg.name.is_empty() {
        println!("# {}", cfg.name);
    }
    print!("{}", rep.table.to_csv());
    for (k, r) in rep.rows.iter().enumerate() {
        let fd = r.fd.as_ref().map_or(String::new(), |s| {
            format!(" steps={} c_fd={:.6} max_du={:.6}", s.steps, s.c_obs, s.max_du)
        });
        let fe = r.c_fe.map_or(String::new(), |c| format!(" c_fe={c:.6}"));
        let status = match (&r.failure, r.ok()) {
            (Some(msg), _) => format!("FAILED ({msg})"),
            (None, true) => "ok".into(),
            (None, false) => "ALARM".into(),
        };
        println!("row{k:02} h={} mean={:.6}{fe}{fd} {status}", r.h, r.source_mean);
    }
    println!("output: {}", rep.directory.display());
}

fn execute(cfg: ExperimentConfig, mode: Mode, quiet: bool) -> Result<bool> {
    let rep = run_experiment(&cfg, mode)?;
    if !quiet {
        print_report(&cfg, &rep);
    }
    Ok(rep.success())
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Similarity(a) => execute(apply(ExperimentConfig::load(&a.config)?, &a.overrides)?, Mode::Similarity, a.overrides.quiet),
        Command::Evolve(a) => execute(apply(ExperimentConfig::load(&a.config)?, &a.overrides)?, Mode::Evolve, a.overrides.quiet),
        Command::Compare(a) => execute(apply(ExperimentConfig::load(&a.config)?, &a.overrides)?, Mode::Compare, a.overrides.quiet),
        Command::Examples(a) => {
            let Some(name) = a.name else {
                for e in builtin_examples() {
                    println!("{:<20} {:<10} {}", e.name, format!("{:?}", e.mode).to_lowercase(), e.about);
                }
                return Ok(true);
            };
            let ex = find_example(&name).ok_or_else(|| Error::Config(format!("no built-in example {name:?}")))?;
            let cfg = apply(ex.config()?, &a.overrides)?;
            if a.dump {
                print!("{}", cfg.to_toml_string()?);
                return Ok(true);
            }
            execute(cfg, ex.mode, a.overrides.quiet)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
