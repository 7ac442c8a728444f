use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spcd::{catalog, run_example, PartialConfig, RunConfig};
use spcd_core::TimeMeshKind;

#[derive(Parser)]
#[command(
    name = "spcd",
    version,
    about = "Two-mesh experiments for convection-diffusion problems with discontinuous initial data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep an example over the eps ladder and write tables.
    Run(RunArgs),
    /// Print the available examples.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    example: Option<u32>,
    /// 0 subtracts the jump term, 1 also the slope term.
    #[arg(long)]
    level: Option<u8>,
    #[arg(long)]
    n0: Option<usize>,
    /// Number of difference columns.
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    eps_min_exp: Option<u32>,
    #[arg(long)]
    eps_max_exp: Option<u32>,
    /// `n` (M = N) or `fixed:<M0>` (M0 on the coarsest mesh, doubled with N).
    #[arg(long)]
    m_rule: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the difference tables.
    #[arg(long)]
    no_tables: bool,
    /// `eps=<exp>,n=<int>[,m=<int>]`
    #[arg(long)]
    surfaces: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> spcd::Result<RunConfig> {
        let file = match &self.config {
            Some(p) => PartialConfig::from_file(p)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            example: self.example,
            level: self.level,
            n0: self.n0,
            levels: self.levels,
            eps_min_exp: self.eps_min_exp,
            eps_max_exp: self.eps_max_exp,
            m_rule: self.m_rule,
            out: self.out,
            tables: self.no_tables.then_some(false),
            surfaces: self.surfaces,
            workers: self.workers,
        };
        RunConfig::from_partial(file.overlay(flags))
    }
}

fn run(args: RunArgs) -> spcd::Result<()> {
    let cfg = args.into_config()?;
    let ex = spcd::examples::example(cfg.example)?;
    if let Some(w) = ex.warning() {
        eprintln!("{w}");
    }
    let outcome = run_example(&cfg)?;
    match outcome.time_mesh {
        TimeMeshKind::Uniform => println!("time mesh: uniform"),
        TimeMeshKind::Shishkin { crossing, tau } => {
            println!("time mesh: shishkin around T* = {crossing:.10}, tau = {tau:.6e}")
        }
    }
    if let Some(report) = &outcome.report {
        print!("{}", spcd::output::table_markdown(report));
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            for e in catalog() {
                println!("{e}");
            }
            Ok(())
        }
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ spcd::Error::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
