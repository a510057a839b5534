use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wsubreg::admissible::Mode;
use wsubreg_cli::commands::{cmd_enumerate, cmd_fusion, cmd_qdims, cmd_report, cmd_smatrix, Output};
use wsubreg_cli::config::{init_threads, CliError, CliResult, Format, RunConfig, DEFAULT_CAP};
use wsubreg_cli::verify::{self, Target};

#[derive(Parser)]
#[command(name = "wsubreg", version, about = "Exact modular data of rational subregular W-algebras")]
struct Cli {
    /// Worker threads; defaults to WSUBREG_THREADS, then the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Level {
    /// Type such as A3, D5, E6.
    system: String,
    #[arg(long)]
    p: i64,
    #[arg(long)]
    q: i64,
    /// subreg or typeA.
    #[arg(long, default_value = "subreg")]
    mode: String,
    /// 1-based distinguished node (type A only).
    #[arg(long)]
    star: Option<usize>,
    /// Lift the Weyl-group size cap (needed for E8 S-matrices).
    #[arg(long)]
    allow_huge: bool,
    /// Seed for a random auxiliary weight x instead of ρ.
    #[arg(long)]
    x_seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// List one label per class of irreducible modules.
    Enumerate(Level),
    /// Exact S-matrix.
    Smatrix(Level),
    /// Fusion rules from the Verlinde formula.
    Fusion(Level),
    /// Quantum dimensions.
    Qdims(Level),
    /// Sporadic identification for one level, or the whole table when no type is given.
    Report {
        system: Option<String>,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long)]
        allow_huge: bool,
    },
    /// Compare against bundled reference data.
    Verify {
        #[arg(value_enum, default_value_t = Target::All)]
        target: Target,
    },
}

fn config(l: &Level, format: Format, threads: Option<usize>) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::new(&l.system, l.p, l.q);
    cfg.mode = Mode::parse(&l.mode)?;
    cfg.star = l.star;
    cfg.threads = threads;
    cfg.cap = if l.allow_huge { None } else { Some(DEFAULT_CAP) };
    cfg.format = format;
    cfg.x_seed = l.x_seed;
    Ok(cfg)
}

fn emit(out: CliResult<Output>, format: Format) -> CliResult<()> {
    let text = out?.render(format)?;
    if text.ends_with('\n') {
        print!("{text}");
    } else {
        println!("{text}");
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    let f = cli.format;
    match &cli.command {
        Command::Enumerate(l) => emit(cmd_enumerate(&config(l, f, cli.threads)?), f)?,
        Command::Smatrix(l) | Command::Fusion(l) | Command::Qdims(l) => {
            let cfg = config(l, f, cli.threads)?;
            let rs = cfg.level()?.rs;
            if let Err(e) = cfg.check_cap(&rs) {
                emit(cmd_enumerate(&cfg), f)?;
                return Err(e);
            }
            let out = match &cli.command {
                Command::Smatrix(_) => cmd_smatrix(&cfg),
                Command::Fusion(_) => cmd_fusion(&cfg),
                _ => cmd_qdims(&cfg),
            };
            emit(out, f)?;
        }
        Command::Report { system, p, q, allow_huge } => match (system, p, q) {
            (None, None, None) => emit(cmd_report(None), f)?,
            (Some(s), Some(p), Some(q)) => {
                let mut cfg = RunConfig::new(s, *p, *q);
                cfg.cap = if *allow_huge { None } else { Some(DEFAULT_CAP) };
                emit(cmd_report(Some(&cfg)), f)?;
            }
            _ => return Err(CliError::Invalid("report takes either no level or a type with --p and --q".into())),
        },
        Command::Verify { target } => {
            let checks = verify::run(*target, Some(DEFAULT_CAP));
            match f {
                Format::Json => println!("{}", serde_json::to_string_pretty(&checks).map_err(|e| CliError::Invariant(e.to_string()))?),
                _ => checks.iter().for_each(|c| println!("{}", c.line())),
            }
            return Ok(checks.iter().all(|c| c.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
