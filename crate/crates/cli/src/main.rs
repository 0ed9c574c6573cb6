use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xcoh_core::experiments::{
    open_output, run_scatter, run_sweep, run_verify, Grid, ScatterConfig, SweepConfig, SweepPreset,
    VerifyConfig, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use xcoh_core::measures::MeasureId;
use xcoh_core::xstates::{Family, FamilyParam};
use xcoh_core::{channels::ChannelSpec, Error};

#[derive(Parser)]
#[command(
    name = "xcoh",
    version,
    about = "Coherence of two-qubit X states under noise"
)]
struct Cli {
    /// Worker threads for parallel runs (default: all cores).
    #[arg(long, global = true, env = "XCOH_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random X states, apply a channel and write one CSV row per state.
    Scatter(ScatterArgs),
    /// Follow one initial state along a preset's noise parameter.
    Sweep(SweepArgs),
    /// Run the consistency checks and report the worst residual of each.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ScatterArgs {
    /// Channel text, e.g. `pd:eta_p=0.3` or `rtn:gamma=1,b=10,t=0.15`.
    #[arg(long)]
    channel: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output CSV path, `-` for standard output.
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated post-channel measures.
    #[arg(long, default_value = "m0,m1,conc,n,fmax,mbell,d2,d2max")]
    measures: String,
    /// Omit the MNMS, Werner and MEMS overlay rows.
    #[arg(long)]
    no_overlays: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// One of pd, nmd, rtn, pln, oun, ad, admem, nmad.
    #[arg(long)]
    preset: String,
    /// Initial state: mnms, werner, mems or bell.
    #[arg(long, default_value = "bell")]
    family: String,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// `start:stop:points`.
    #[arg(long, default_value = "0:1:200")]
    grid: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Break completeness of one Kraus set by this amount.
    #[arg(long, hide = true)]
    inject_fault: Option<f64>,
}

enum Outcome {
    Done,
    ChecksFailed,
}

fn initial_state(family: &str, epsilon: f64) -> Result<FamilyParam, Error> {
    if family.eq_ignore_ascii_case("bell") {
        return Ok(FamilyParam::Bell);
    }
    FamilyParam::new(family.parse::<Family>()?, epsilon)
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Scatter(a) => {
            let channel: ChannelSpec = a.channel.parse()?;
            let cfg = ScatterConfig {
                measures: MeasureId::parse_list(&a.measures)?,
                workers: cli.workers,
                overlays: !a.no_overlays,
                ..ScatterConfig::new(channel, a.samples, a.seed)
            };
            let mut out = open_output(&a.out)?;
            let rows = run_scatter(&cfg, &mut out)?;
            eprintln!("wrote {rows} rows to {}", a.out.display());
        }
        Command::Sweep(a) => {
            let cfg = SweepConfig {
                preset: a.preset.parse::<SweepPreset>()?,
                initial: initial_state(&a.family, a.epsilon)?,
                grid: a.grid.parse::<Grid>()?,
            };
            let mut out = open_output(&a.out)?;
            let rows = run_sweep(&cfg, &mut out)?;
            eprintln!("wrote {rows} rows to {}", a.out.display());
        }
        Command::Verify(a) => {
            let cfg = VerifyConfig {
                samples: a.samples,
                seed: a.seed,
                workers: cli.workers,
                inject_cptp_fault: a.inject_fault,
            };
            if cfg.samples == 0 {
                return Err(Error::Usage("verify needs at least one sample".into()));
            }
            let report = run_verify(&cfg)?;
            println!("{report}");
            if !report.passed() {
                return Ok(Outcome::ChecksFailed);
            }
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("xcoh: {e}");
            ExitCode::from(2)
        }
    }
}
