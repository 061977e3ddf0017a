use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use curvelab_cli::{emit_plots, load_spec, presets, run_scenario, sweep_scenario, verify_suite};

/// Numerical laboratory for curve diffusion and elastic flow between two
/// parallel lines.
#[derive(Parser)]
#[command(name = "curvelab", version, about)]
struct Cli {
    /// Output root directory (env: CURVELAB_OUT, default ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Master seed override for the generators.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (a preset name or a scenario file path).
    Run {
        spec: String,
        /// Also emit the SVG plot set for the finished trajectory.
        #[arg(long)]
        plot: bool,
    },
    /// Run a verification suite.
    Verify { suite: String },
    /// Run a scenario over a grid of values for one key.
    Sweep {
        spec: String,
        /// key=v1,v2,... (one key, comma-separated values).
        #[arg(long)]
        param: String,
    },
    /// Emit SVG plots for a trajectory CSV.
    Plot {
        trajectory: PathBuf,
        /// Output directory (default: plots/ next to the CSV).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List bundled presets and suites.
    Presets,
}

fn out_root(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os("CURVELAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<bool> {
    let out = out_root(cli);
    match &cli.command {
        Command::Run { spec, plot } => {
            let spec = load_spec(spec)?;
            let artifacts = run_scenario(&spec, &out, cli.seed)?;
            print!("{}", artifacts.summary.render());
            if *plot {
                let traj = artifacts.out_dir.join("trajectory.csv");
                let plots = emit_plots(&traj, &artifacts.out_dir.join("plots"))?;
                println!("plots = {} files", plots.len());
            }
            println!("artifacts = {}", artifacts.out_dir.display());
            Ok(artifacts.summary.all_passed())
        }
        Command::Verify { suite } => {
            let reports = verify_suite(suite, &out, cli.seed.unwrap_or(0))?;
            let mut ok = true;
            for report in &reports {
                print!("{}", report.render());
                ok &= report.all_passed();
            }
            Ok(ok)
        }
        Command::Sweep { spec, param } => {
            let results = sweep_scenario(spec, param, &out, cli.seed)?;
            let mut ok = true;
            for (value, summary) in &results {
                println!(
                    "{param} {value}: stop {} after {} steps, checks {}",
                    summary.stop,
                    summary.steps,
                    if summary.all_passed() { "pass" } else { "FAIL" }
                );
                ok &= summary.all_passed();
            }
            Ok(ok)
        }
        Command::Plot { trajectory, out_dir } => {
            let target = out_dir.clone().unwrap_or_else(|| {
                trajectory
                    .parent()
                    .map(|p| p.join("plots"))
                    .unwrap_or_else(|| PathBuf::from("plots"))
            });
            let written = emit_plots(trajectory, &target)?;
            for path in &written {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Presets => {
            println!("scenario presets (run <name>):");
            for (name, _) in presets::SCENARIOS {
                println!("  {name}");
            }
            println!("verification suites (verify <name>):");
            for name in presets::SUITES {
                println!("  {name}");
            }
            Ok(true)
        }
    }
}
