use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qfi_detect::cli::{
    build_observables, run_reproduce_fig2, run_sweep, run_threshold, run_validate, ObsChoice,
    SweepConfig,
};
use qfi_detect::criterion::{evaluate, Mode};
use qfi_detect::error::Error;
use qfi_detect::states::StateFamily;

const EXIT_USAGE: u8 = 1;
const EXIT_CERTIFICATION: u8 = 2;
const EXIT_NON_MONOTONE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qfi-detect",
    about = "Bipartite entanglement detection via quantum Fisher information criteria",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify an observable set (LOO orthonormality / SIC overlap conditions)
    Validate {
        /// Observable family to certify
        #[arg(long, value_enum)]
        kind: ObsArg,
        /// Local dimension
        #[arg(long)]
        dim: usize,
        /// Fiducial vector file for SIC at dimensions without a built-in
        #[arg(long)]
        fiducial: Option<PathBuf>,
    },
    /// Evaluate both criterion variants on one family state
    Evaluate {
        #[command(flatten)]
        target: TargetArgs,
        /// State parameter eta in [0, 1]
        #[arg(long)]
        eta: f64,
    },
    /// Sweep eta over a grid and write per-point criterion data as CSV
    Sweep {
        #[command(flatten)]
        target: TargetArgs,
        /// Grid as START:STOP:COUNT over [0, 1]
        #[arg(long, default_value = "0:1:101")]
        grid: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Seed recorded in the run configuration
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for grid evaluation
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Locate the smallest eta at which the criterion detects entanglement
    Threshold {
        #[command(flatten)]
        target: TargetArgs,
        /// Criterion variant
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Emit the reference-figure sweep CSVs plus a threshold summary
    ReproduceFig2 {
        /// Output directory for fig2a_isotropic.csv and fig2b_werner.csv
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Worker threads for grid evaluation
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args)]
struct TargetArgs {
    /// State family
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Local dimension d (the state lives on d x d)
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Observable family for both sides
    #[arg(long, value_enum, default_value_t = ObsArg::Loo)]
    obs: ObsArg,
    /// Observable family for side A (overrides --obs)
    #[arg(long, value_enum)]
    obs_a: Option<ObsArg>,
    /// Observable family for side B (overrides --obs)
    #[arg(long, value_enum)]
    obs_b: Option<ObsArg>,
    /// Fiducial vector file for SIC at dimensions without a built-in
    #[arg(long)]
    fiducial: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Isotropic,
    Werner,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObsArg {
    Loo,
    Sic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Unopt,
    Opt,
}

impl From<ObsArg> for ObsChoice {
    fn from(value: ObsArg) -> Self {
        match value {
            ObsArg::Loo => ObsChoice::Loo,
            ObsArg::Sic => ObsChoice::Sic,
        }
    }
}

impl From<ModeArg> for Mode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Unopt => Mode::Unoptimized,
            ModeArg::Opt => Mode::Optimized,
        }
    }
}

impl TargetArgs {
    fn family(&self) -> StateFamily {
        match self.family {
            FamilyArg::Isotropic => StateFamily::Isotropic { local_dim: self.dim },
            FamilyArg::Werner => StateFamily::Werner { local_dim: self.dim },
        }
    }

    fn sides(&self) -> (ObsChoice, ObsChoice) {
        (
            self.obs_a.unwrap_or(self.obs).into(),
            self.obs_b.unwrap_or(self.obs).into(),
        )
    }
}

fn parse_grid(text: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{text}' is not START:STOP:COUNT"));
    }
    let start: f64 = parts[0].parse().map_err(|_| format!("bad grid start '{}'", parts[0]))?;
    let stop: f64 = parts[1].parse().map_err(|_| format!("bad grid stop '{}'", parts[1]))?;
    let count: usize = parts[2].parse().map_err(|_| format!("bad grid count '{}'", parts[2]))?;
    Ok((start, stop, count))
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NonMonotoneViolation { .. } => EXIT_NON_MONOTONE,
        _ => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Validate { kind, dim, fiducial } => {
            let (set, checks) = run_validate(kind.into(), dim, fiducial.as_deref())?;
            println!(
                "observable set: kind={} dim={} members={} bound_s={}",
                set.kind().as_str(),
                set.dim(),
                set.len(),
                set.bound_s().map_or("unknown".to_string(), |s| format!("{s:.12}")),
            );
            let mut all_passed = true;
            for check in &checks {
                let status = if check.passed() { "pass" } else { "FAIL" };
                println!(
                    "  [{status}] {} (deviation {:.3e}, tolerance {:.1e})",
                    check.name, check.deviation, check.tolerance
                );
                all_passed &= check.passed();
            }
            Ok(if all_passed { 0 } else { EXIT_CERTIFICATION })
        }
        Command::Evaluate { target, eta } => {
            let (choice_a, choice_b) = target.sides();
            let obs_a = build_observables(choice_a, target.dim, target.fiducial.as_deref())?;
            let obs_b = build_observables(choice_b, target.dim, target.fiducial.as_deref())?;
            let rho = target.family().state(eta)?;
            let report = evaluate(&rho, &obs_a, &obs_b)?;
            println!("state: {}(d={}, eta={:.6})", target.family().name(), target.dim, eta);
            println!("observables: A={} B={}", choice_a.as_str(), choice_b.as_str());
            println!("unoptimized total QFI: {:.12}", report.unopt_total);
            println!("optimized total QFI:   {:.12}", report.opt_total);
            println!("separability bound:    {:.12}", report.bound);
            println!("xi trace norm:         {:.12}", report.xi_trace_norm);
            println!("unoptimized violation: {}", report.unopt_violated);
            println!("optimized violation:   {}", report.opt_violated);
            Ok(0)
        }
        Command::Sweep { target, grid, out, seed, jobs } => {
            let (start, stop, count) =
                parse_grid(&grid).map_err(Error::InvalidVector)?;
            let (choice_a, choice_b) = target.sides();
            let config = SweepConfig {
                family: target.family(),
                obs_a: choice_a,
                obs_b: choice_b,
                fiducial: target.fiducial.clone(),
                grid_start: start,
                grid_stop: stop,
                grid_count: count,
                out: out.clone(),
                seed,
                jobs,
            };
            config.validate()?;
            let file = std::fs::File::create(&out)
                .map_err(|e| Error::InvalidVector(format!("{}: {e}", out.display())))?;
            let mut writer = std::io::BufWriter::new(file);
            run_sweep(&config, &mut writer)?;
            println!("wrote {} rows to {}", count, out.display());
            Ok(0)
        }
        Command::Threshold { target, mode } => {
            let (choice_a, choice_b) = target.sides();
            let obs_a = build_observables(choice_a, target.dim, target.fiducial.as_deref())?;
            let obs_b = build_observables(choice_b, target.dim, target.fiducial.as_deref())?;
            match run_threshold(target.family(), &obs_a, &obs_b, mode.into())? {
                Some(t) => println!("{t:.5}"),
                None => println!("none"),
            }
            Ok(0)
        }
        Command::ReproduceFig2 { out_dir, jobs } => {
            let summary = run_reproduce_fig2(&out_dir, jobs.max(1))?;
            println!(
                "wrote {} and {}",
                out_dir.join("fig2a_isotropic.csv").display(),
                out_dir.join("fig2b_werner.csv").display()
            );
            println!("threshold summary (computed vs reference +- tolerance):");
            for line in &summary {
                let computed =
                    line.computed.map_or("none".to_string(), |t| format!("{t:.5}"));
                let status = if line.passed() { "pass" } else { "FAIL" };
                println!(
                    "  [{status}] {}: computed {computed}, reference {:.4} +- {:.0e}",
                    line.label, line.reference, line.tolerance
                );
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default exit code is 2; the documented contract reserves
            // 2 for certification failures, so usage problems map to 1.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
