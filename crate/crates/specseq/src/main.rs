use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use specseq::config::Config;
use specseq::pipeline::{run_pipeline, Stage};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Rep,
    Jimage,
    Cohom,
    Hfpss,
    Picalg,
    Pic,
    All,
}

/// Picard groups of the C4 homotopy fixed points at height 2.
#[derive(Parser, Debug)]
#[command(name = "specseq", version)]
struct Cli {
    command: Command,
    /// TOML configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write `report.json` to the output directory.
    #[arg(long)]
    json: bool,
    /// Write SVG charts to the output directory.
    #[arg(long)]
    svg: bool,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print every check, not only failures.
    #[arg(long, short)]
    verbose: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        None => Config::default(),
    };
    if let Some(o) = &cli.out {
        cfg.output = o.clone();
    }
    let stages = match cli.command {
        Command::Rep => vec![Stage::Rep],
        Command::Jimage => vec![Stage::Jimage],
        Command::Cohom => vec![Stage::Cohom],
        Command::Hfpss => vec![Stage::Hfpss],
        Command::Picalg => vec![Stage::Picalg],
        Command::Pic => vec![Stage::Pic],
        Command::All => Stage::ALL.to_vec(),
    };
    let bundle = match run_pipeline(&cfg, &stages) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    for c in &bundle.report.checks {
        if cli.verbose || !c.ok {
            let mark = if c.ok { "ok  " } else { "FAIL" };
            let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
            println!("{mark} [{}] {}{detail}", c.criterion, c.name);
        }
    }
    for line in &bundle.report.summary {
        println!("{line}");
    }
    if cli.json || cli.svg {
        match bundle.write(&cfg.output, cli.json, cli.svg) {
            Ok(paths) => {
                for p in paths {
                    println!("wrote {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("cannot write to {}: {e}", cfg.output.display());
                return ExitCode::from(2);
            }
        }
    }
    if bundle.report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
