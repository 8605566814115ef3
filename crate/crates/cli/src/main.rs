use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edgedom_core::par::Execution;
use edgedom_core::report::{run, Command, RunOptions};
use edgedom_core::spec::OperatorSpec;

/// Natural domains and singular projections of cone and edge operators.
#[derive(Parser)]
#[command(name = "edgedom", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Poles of the inverted principal conormal symbol in the strip
    Analyze(Common),
    /// Full domain description: g_l, B matrices, leading and corrected bases
    Domain(Common),
    /// Projection of E_S onto the corrected asymptotic space
    Project(Common),
    /// Run every oracle invariant and report residuals
    Verify(Common),
    /// Covariable sweep and homogeneity checks for an edge operator
    Edge(Common),
}

#[derive(Args)]
struct Common {
    /// Operator spec (TOML)
    #[arg(long)]
    spec: PathBuf,
    /// Number of random ray directions in the edge sweep
    #[arg(long, default_value_t = 8)]
    eta_rays: usize,
    /// Largest scale factor of the edge sweep (powers of two from 1)
    #[arg(long, default_value_t = 1024.0)]
    lambda_max: f64,
    /// Override the root clustering tolerance
    #[arg(long)]
    tol_cluster: Option<f64>,
    /// Write the machine-readable report here
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Seed for ray directions and random test inputs
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Disable data parallelism
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Analyze(a) => (Command::Analyze, a),
        Cmd::Domain(a) => (Command::Domain, a),
        Cmd::Project(a) => (Command::Project, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Edge(a) => (Command::Edge, a),
    };
    match execute(command, &args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command, args: &Common) -> Result<bool, Box<dyn std::error::Error>> {
    let spec = OperatorSpec::from_path(&args.spec)?;
    let opts = RunOptions {
        eta_rays: args.eta_rays,
        lambda_max: args.lambda_max,
        tol_cluster: args.tol_cluster,
        seed: args.seed,
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let report = run(command, &spec, &opts)?;
    print!("{}", report.render_text());
    if let Some(path) = &args.json_out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    if let Some(name) = &report.first_failure {
        eprintln!("check failed: {name}");
    }
    Ok(report.passed)
}
