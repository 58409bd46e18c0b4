use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use panflow::msh::write_msh;
use panflow::pipeline::config::{Backend, Overrides, PipelineConfig};
use panflow::pipeline::{execute, Command, Outcome, PipelineError};
use panflow_core::samples::desk_aircraft_mesh;

/// Surface mesh to panel-solver results in stages.
#[derive(Parser)]
#[command(name = "panflow", version)]
struct Cli {
    /// Run configuration.
    #[arg(long, short, global = true, default_value = "panflow.toml")]
    config: PathBuf,
    /// Angles of attack in degrees, replacing the configured list.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    /// Write solver decks even when the geometry check fails; the outputs
    /// are watermarked.
    #[arg(long, global = true)]
    force: bool,
    /// Worker threads for the embedded solver.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// More log output; repeat for more.
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Embedded,
    External,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the networks and check abutment and orientation.
    Check,
    /// Check, then write the solver decks.
    Prep,
    /// Solve the cases of the prepared decks.
    Run,
    /// Write plot files, the drag polar and the parasite drag breakdown.
    Post,
    /// prep, run and post.
    All,
    /// Write the bundled test aircraft mesh and a configuration for it.
    Sample {
        /// Directory to write into.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

const SAMPLE_CONFIG: &str = include_str!("../configs/desk_aircraft.toml");

fn sample(out: &std::path::Path) -> Result<(), PipelineError> {
    let io = |path: PathBuf| move |source| PipelineError::Io { path, source };
    std::fs::create_dir_all(out).map_err(io(out.to_path_buf()))?;
    let mesh = out.join("desk_aircraft.msh");
    std::fs::write(&mesh, write_msh(&desk_aircraft_mesh())).map_err(io(mesh.clone()))?;
    let cfg = out.join("desk_aircraft.toml");
    std::fs::write(&cfg, SAMPLE_CONFIG).map_err(io(cfg.clone()))?;
    println!("wrote {} and {}", mesh.display(), cfg.display());
    Ok(())
}

fn report(cmd: Command, o: &Outcome) {
    if let Some(c) = &o.check {
        println!(
            "{} networks, {} mismatched edge(s), orientation {}",
            c.networks.len(),
            c.abutment.mismatched_count(),
            if c.orientation.iter().all(|(_, r)| r.is_compliant()) {
                "ok"
            } else {
                "FAILED"
            }
        );
    }
    if o.forced {
        println!("FORCED: decks were written despite a failed geometry check");
    }
    if let Some(p) = o.panels {
        println!("{p} panels");
    }
    if let (Some(n), true) = (o.cases, matches!(cmd, Command::Run | Command::All)) {
        println!("{n} case(s) solved");
    }
    if let Some(cd0) = o.cd0 {
        println!("CD0 {cd0:.5}");
    }
    println!("{} file(s) in manifest", o.manifest.files.len());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let cmd = match &cli.command {
        Cmd::Sample { out } => {
            return match sample(out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
        Cmd::Check => Command::Check,
        Cmd::Prep => Command::Prep,
        Cmd::Run => Command::Run,
        Cmd::Post => Command::Post,
        Cmd::All => Command::All,
    };
    let overrides = Overrides {
        alphas: cli.alpha.clone(),
        backend: cli.backend.map(|b| match b {
            BackendArg::Embedded => Backend::Embedded,
            BackendArg::External => Backend::External,
        }),
        jobs: cli.jobs,
    };
    let result = PipelineConfig::load(&cli.config, &overrides)
        .map_err(PipelineError::from)
        .and_then(|cfg| execute(cfg, cmd, cli.force));
    match result {
        Ok(o) => {
            report(cmd, &o);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
