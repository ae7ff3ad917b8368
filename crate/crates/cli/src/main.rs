//! Command-line front end for the DDR controller simulator.
//!
//! Exit codes: 0 = clean run, 1 = violations or timeout, 2 = bad usage,
//! config or trace.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use ddrsim_core::ahb::parse_trace;
use ddrsim_core::sim::{parse_config, random_traffic, SimConfig, Simulation};

#[derive(Parser)]
#[command(name = "ddrsim", about = "Cycle-accurate DDR SDRAM controller simulator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a bus trace and report latencies, bandwidth and violations.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Print the per-cycle state of both state machines.
        #[arg(long)]
        fsm_trace: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Drive deterministic random traffic and fail on any violation.
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Number of random transfers.
        #[arg(long)]
        random: usize,
        /// Overrides the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the initialization command sequence with cycle numbers.
    Inittrace {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load_config(path: &PathBuf) -> Result<SimConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn print_summary(sim: &Simulation) {
    let report = sim.report();
    println!("cycles:        {}", report.cycles);
    println!("transactions:  {} ({} reads, {} writes)", report.reads + report.writes, report.reads, report.writes);
    println!("refreshes:     {}", report.refresh_count);
    println!("splits:        {} ({} retried)", report.splits, report.retries);
    println!("bus errors:    {}", report.bus_errors);
    println!("bytes:         {}", report.bytes_transferred);
    println!("bandwidth:     {:.3} MB/s", report.bandwidth_mbytes_per_s);
    println!("violations:    {}", report.violations.len());
    for v in &report.violations {
        println!("{v}");
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Cmd::Run { config, trace, fsm_trace, report } => {
            let cfg = load_config(&config)?;
            let text = fs::read_to_string(&trace)
                .with_context(|| format!("reading trace {}", trace.display()))?;
            let entries = parse_trace(&text)
                .with_context(|| format!("parsing trace {}", trace.display()))?;
            let mut sim = Simulation::new(cfg, entries);
            if fsm_trace {
                sim.enable_fsm_trace();
            }
            let outcome = sim.run();
            if let Some(lines) = sim.fsm_trace() {
                for line in lines {
                    println!("{line}");
                }
            }
            print_summary(&sim);
            if let Err(err) = outcome {
                eprintln!("error: {err}");
                return Ok(ExitCode::from(1));
            }
            let json = sim.report().to_json();
            match report {
                Some(path) => fs::write(&path, json)
                    .with_context(|| format!("writing report {}", path.display()))?,
                None => println!("{json}"),
            }
            Ok(exit_for(sim.violations().is_empty()))
        }
        Cmd::Check { config, random, seed } => {
            let cfg = load_config(&config)?;
            let seed = seed.unwrap_or(cfg.seed);
            let entries = random_traffic(seed, random, &cfg.geometry());
            let mut sim = Simulation::new(cfg, entries);
            let outcome = sim.run();
            print_summary(&sim);
            if let Err(err) = outcome {
                eprintln!("error: {err}");
                return Ok(ExitCode::from(1));
            }
            Ok(exit_for(sim.violations().is_empty()))
        }
        Cmd::Inittrace { config } => {
            let cfg = load_config(&config)?;
            let mut sim = Simulation::new(cfg, Vec::new());
            if let Err(err) = sim.run_until_init_done() {
                eprintln!("error: {err}");
                return Ok(ExitCode::from(1));
            }
            println!("format=1");
            for record in sim.pin_log() {
                println!("{record}");
            }
            Ok(exit_for(sim.violations().is_empty()))
        }
    }
}

fn exit_for(clean: bool) -> ExitCode {
    if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
