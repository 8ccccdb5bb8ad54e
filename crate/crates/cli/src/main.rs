use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpslab_cli::{eval_command, run_suite, Backend, CampaignConfig, CliError, EvalKind, Suite};
use qpslab_core::{Corruption, LieGroup};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "qpslab", version, about = "Exact verification campaigns for quasi-Poisson structures on G x_B B")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded campaign of checks and report the verdicts.
    Verify(VerifyArgs),
    /// Evaluate kappa, Steinberg membership, fiber enumeration or a leaf 2-form.
    Eval(EvalArgs),
}

#[derive(Args)]
struct GroupArg {
    /// sl2, sl3, gl2 or gl3.
    #[arg(long, env = "QPSLAB_DEFAULT_GROUP", default_value = "sl2")]
    group: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: pairing, cartan-dirac, dorfman-closure, double, lemma-kernel,
    /// regact, gs-theorem1, gs-theorem2, bivector, diagram-gs, leaf-form, weyl-fiber.
    suite: Suite,
    #[command(flatten)]
    group: GroupArg,
    #[arg(long, default_value = "exact")]
    backend: Backend,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for the float backend.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, hide = true, default_value = "none")]
    corrupt: Corruption,
}

#[derive(Args)]
struct EvalArgs {
    /// steinberg, fiber-enum, leaf-form or kappa.
    kind: EvalKind,
    #[command(flatten)]
    group: GroupArg,
    /// JSON file with a group element, or a GSPoint for leaf-form (`-` for stdin).
    #[arg(long)]
    input: PathBuf,
    /// JSON file with the torus element for steinberg.
    #[arg(long)]
    torus: Option<PathBuf>,
}

fn read_json(path: &PathBuf) -> Result<Value, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn verify(args: VerifyArgs) -> Result<i32, CliError> {
    let config = CampaignConfig {
        suite: args.suite,
        group: args.group.group,
        backend: args.backend,
        samples: args.samples,
        seed: args.seed,
        tolerance: args.tol,
        jobs: args.jobs,
        corruption: args.corrupt,
    };
    if config.tolerance.is_some() && config.backend != Backend::Float {
        return Err(CliError::Usage("--tol applies to the float backend only".into()));
    }
    let report = run_suite(&config)?;
    let json = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    match args.report.as_deref() {
        Some(p) if p.as_os_str() == "-" => println!("{json}"),
        Some(p) => {
            std::fs::write(p, json + "\n")?;
            print!("{}", report.render_text());
        }
        None => print!("{}", report.render_text()),
    }
    Ok(report.exit_code())
}

fn eval(args: EvalArgs) -> Result<i32, CliError> {
    let ctx = LieGroup::parse(&args.group.group).map_err(|e| CliError::Usage(e.to_string()))?;
    let input = read_json(&args.input)?;
    let torus = args.torus.as_ref().map(read_json).transpose()?;
    let out = eval_command(args.kind, &ctx, &input, torus.as_ref())?;
    println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Eval(a) => eval(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qpslab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
