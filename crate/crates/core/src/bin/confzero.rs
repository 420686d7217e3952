use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use conformal_zeros::builtin::BUILTIN_NAMES;
use conformal_zeros::commands::{self, CommandOutput, CHECKS, DEMO_CHECKS};
use conformal_zeros::config::{OutputFormat, Overrides, RawConfig};
use conformal_zeros::Result;

#[derive(Parser)]
#[command(name = "confzero", version, about = "Zero sets of conformal vector fields on flat pseudo-Euclidean spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// RNG seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Model-comparison tolerance relative to the radius.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Half-width of the sampling box.
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// json or csv.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every check on the field and zero in CONFIG.
    Verify { config: PathBuf },
    /// Classify the zero `z` of CONFIG.
    Classify { config: PathBuf },
    /// Sample the zero set in the box and report its components.
    Zeroset { config: PathBuf },
    /// Transport the field's jet along a line and write the trajectory.
    Propagate { config: PathBuf },
    /// Run the suite for a built-in example.
    Demo { name: String },
}

fn help_text() -> String {
    let mut s = String::from("Checks run by verify, in order:\n");
    for (name, anchor) in CHECKS {
        s.push_str(&format!("  {name:<28} {anchor}\n"));
    }
    s.push_str("Additional demo checks:\n");
    for (name, anchor) in DEMO_CHECKS {
        s.push_str(&format!("  {name:<28} {anchor}\n"));
    }
    s.push_str(&format!("Built-in examples: {}\n", BUILTIN_NAMES.join(", ")));
    s.push_str("Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.");
    s
}

fn run(cli: &Cli) -> Result<(CommandOutput, OutputFormat)> {
    let overrides = Overrides {
        seed: cli.seed,
        tol: cli.tol,
        radius: cli.radius,
        format: cli.format,
    };
    let load = |path: &Path| RawConfig::load(path)?.validate(&overrides);
    let out = match &cli.command {
        Cmd::Verify { config } => commands::cmd_verify(&load(config)?)?,
        Cmd::Classify { config } => commands::cmd_classify(&load(config)?)?,
        Cmd::Zeroset { config } => {
            let cfg = load(config)?;
            return Ok((commands::cmd_zeroset(&cfg)?, cfg.format));
        }
        Cmd::Propagate { config } => {
            let cfg = load(config)?;
            return Ok((commands::cmd_propagate(&cfg)?, cfg.format));
        }
        Cmd::Demo { name } => commands::cmd_demo(name, &overrides)?,
    };
    Ok((out, OutputFormat::Json))
}

fn main() -> ExitCode {
    let matches = Cli::command().after_long_help(help_text()).get_matches();
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let result = run(&cli).and_then(|(out, format)| {
        commands::emit(&out, format, cli.out.as_deref())?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            for c in out.report.failed() {
                eprintln!("FAIL {}: value {:?}, tol {:?}", c.name, c.value, c.tol);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("confzero: {e}");
            ExitCode::from(commands::error_exit_code(&e) as u8)
        }
    }
}
