use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stokesband::harness::{configure_threads, emit_reports, experiment_by_name, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(
    name = "stokesband",
    version,
    about = "Band-limited Stokes flow between no-slip walls: solvers, norms and estimate checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximal-regularity ratio campaign over an R grid.
    Mre(Overrides),
    /// Elementary estimates on the half-line grid.
    Props(Overrides),
    /// Heat-kernel, min-integral, K-bar and Poisson-kernel checks.
    Kernels(Overrides),
    /// Bandedness inequalities on random conforming slices.
    Lemmas(Overrides),
    /// Strip solution localized to each wall versus the half-space solve.
    HalfspaceConsistency(Overrides),
    /// Norm changes under grid refinement.
    Convergence(Overrides),
}

impl Command {
    fn parts(&self) -> (&'static str, &Overrides) {
        match self {
            Command::Mre(o) => ("mre", o),
            Command::Props(o) => ("props", o),
            Command::Kernels(o) => ("kernels", o),
            Command::Lemmas(o) => ("lemmas", o),
            Command::HalfspaceConsistency(o) => ("halfspace-consistency", o),
            Command::Convergence(o) => ("convergence", o),
        }
    }
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML file with experiment settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path (a plotting script is written beside it).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bandwidths, comma separated.
    #[arg(long = "R", value_delimiter = ',', num_args = 1..)]
    r: Option<Vec<f64>>,
    #[arg(long)]
    nz: Option<usize>,
    #[arg(long)]
    nt: Option<usize>,
    #[arg(long)]
    zmax: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Ensemble size.
    #[arg(long)]
    ensemble: Option<usize>,
    /// Cutoff transition half-width.
    #[arg(long)]
    delta: Option<f64>,
    /// Rerun at this many doubled resolutions.
    #[arg(long)]
    refine: Option<usize>,
    #[arg(long)]
    quiet: bool,
}

fn build_config(name: &str, o: &Overrides) -> stokesband::Result<ExperimentConfig> {
    let mut cfg = match &o.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.experiment = name.to_string();
    if let Some(v) = o.seed {
        cfg.ensemble.seed = v;
    }
    if let Some(v) = &o.r {
        cfg.r_grid = v.clone();
    }
    if let Some(v) = o.nz {
        cfg.nz = v;
    }
    if let Some(v) = o.nt {
        cfg.nt = v;
    }
    if let Some(v) = o.zmax {
        cfg.zmax = v;
    }
    if let Some(v) = o.horizon {
        cfg.horizon = v;
    }
    if let Some(v) = o.ensemble {
        cfg.ensemble.samples = v;
        cfg.suite.samples = v;
    }
    if let Some(v) = o.delta {
        cfg.delta = v;
    }
    if let Some(v) = o.refine {
        cfg.refine = v;
    }
    if let Some(p) = &o.out {
        cfg.out = Some(p.display().to_string());
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> stokesband::Result<bool> {
    let (name, o) = cli.command.parts();
    let cfg = build_config(name, o)?;
    let threads = configure_threads()?;
    if !o.quiet {
        eprintln!("{name}: {threads} worker(s)");
    }
    let output = experiment_by_name(name)?.run(&cfg)?;
    if !o.quiet {
        for line in &output.summary {
            println!("{line}");
        }
    }
    for q in &output.quarantined {
        eprintln!(
            "quarantined: R={} level={} sample={}: {}",
            q.r, q.level, q.sample, q.reason
        );
    }
    if let Some(path) = &cfg.out {
        let script = emit_reports(&output.records, path.as_ref())?;
        if !o.quiet {
            println!(
                "wrote {} rows to {path} (plot script {})",
                output.records.len(),
                script.display()
            );
        }
    }
    if !o.quiet {
        println!("{}", if output.pass { "PASS" } else { "FAIL" });
    }
    Ok(output.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
