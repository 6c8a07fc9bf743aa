//! Command-line front end: parse a scenario config (or a bundled recipe),
//! run the analytic and/or Monte Carlo pipelines, and emit CSV curve data.

mod config;
mod recipes;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Config, GridSection};
use run::{Mode, RunManifest};

#[derive(Parser)]
#[command(
    name = "sonstat",
    about = "Interference, outage and capacity analysis for two-tier self-organizing networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario config and write curve data.
    Analyze(AnalyzeArgs),
    /// List the bundled reproduction recipes.
    Recipes,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to a JSON scenario config.
    #[arg(long, conflicts_with = "recipe")]
    config: Option<PathBuf>,
    /// Name of a bundled recipe (see `sonstat recipes`).
    #[arg(long)]
    recipe: Option<String>,
    /// Pipelines to run: analytic, montecarlo or both.
    #[arg(long, default_value = "analytic")]
    mode: String,
    /// CSV output path (omit to skip writing curve data).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed of the counter-based Monte Carlo substreams.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo replicates per evaluation (overrides the config).
    #[arg(long)]
    mc_samples: Option<usize>,
    /// Parameter sweep FIELD=START:STOP:POINTS[:log] (overrides the config).
    #[arg(long)]
    sweep: Option<String>,
    /// Gauss-Hermite order for probabilities and capacity.
    #[arg(long)]
    quadrature_order: Option<usize>,
}

fn parse_sweep(text: &str) -> Result<GridSection, String> {
    let (field, rest) = text
        .split_once('=')
        .ok_or_else(|| format!("sweep must look like FIELD=START:STOP:POINTS[:log], got \"{text}\""))?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() < 3 || parts.len() > 4 {
        return Err(format!(
            "sweep must look like FIELD=START:STOP:POINTS[:log], got \"{text}\""
        ));
    }
    let parse_num = |s: &str, what: &str| {
        s.parse::<f64>()
            .map_err(|_| format!("sweep {what} must be a number, got \"{s}\""))
    };
    let start = parse_num(parts[0], "start")?;
    let stop = parse_num(parts[1], "stop")?;
    let points: usize = parts[2]
        .parse()
        .map_err(|_| format!("sweep point count must be an integer, got \"{}\"", parts[2]))?;
    let scale = match parts.get(3) {
        None => config::AxisScale::Linear,
        Some(&"log") => config::AxisScale::Log,
        Some(&"linear") => config::AxisScale::Linear,
        Some(other) => return Err(format!("sweep scale must be linear or log, got \"{other}\"")),
    };
    Ok(GridSection {
        field: Some(field.to_owned()),
        start,
        stop,
        points,
        scale,
    })
}

fn analyze(args: &AnalyzeArgs) -> Result<(), run::RunError> {
    let fail = |message: String| run::RunError {
        message,
        exit_code: 2,
    };
    let text = match (&args.config, &args.recipe) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(name)) => recipes::find(name)
            .ok_or_else(|| fail(format!("unknown recipe \"{name}\" (see `sonstat recipes`)")))?
            .json
            .to_owned(),
        _ => return Err(fail("exactly one of --config or --recipe is required".into())),
    };
    let config = Config::from_json(&text).map_err(fail)?;
    let manifest = RunManifest {
        config,
        mode: Mode::parse(&args.mode).map_err(fail)?,
        output: args.output.clone(),
        seed: args.seed,
        mc_samples: args.mc_samples,
        sweep: args.sweep.as_deref().map(parse_sweep).transpose().map_err(fail)?,
        quadrature_order: args.quadrature_order,
    };
    let out = run::run(&manifest)?;
    print!("{}", out.summary);
    if let Some(path) = &manifest.output {
        std::fs::write(path, &out.csv).map_err(|e| run::RunError {
            message: format!("cannot write {}: {e}", path.display()),
            exit_code: 1,
        })?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn list_recipes() {
    println!("bundled recipes:");
    for recipe in recipes::RECIPES {
        println!("  {:<6} {}", recipe.name, recipe.description);
        if let Ok(cfg) = Config::from_json(recipe.json) {
            for note in cfg.notes {
                println!("         - {note}");
            }
        }
    }
    println!("run one with: sonstat analyze --recipe NAME [--mode both] [--output out.csv]");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Recipes => {
            list_recipes();
            ExitCode::SUCCESS
        }
        Command::Analyze(args) => match analyze(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(err) => {
                eprintln!("error: {}", err.message);
                ExitCode::from(err.exit_code)
            }
        },
    }
}
