//! `eqpolar` command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 when a
//! computation fails.

mod commands;
mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use crate::spec::{usage, ExperimentSpec, UsageError};

#[derive(Parser)]
#[command(name = "eqpolar", version, about = "Non-binary polar codes with distance-optimized kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Good/bad distance spectra, equidistance and bound checks for kernels.
    AnalyzeKernel {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        kernels: KernelArgs,
    },
    /// Exhaustive search for the best permutation kernels over a signal set.
    SearchKernel {
        #[command(flatten)]
        common: CommonArgs,
        /// Search all q! permutations instead of fixing pi(0) = 0.
        #[arg(long)]
        full_space: bool,
    },
    /// Monte-Carlo code construction: reliabilities and frozen set.
    Construct {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        kernels: KernelArgs,
        #[command(flatten)]
        code: CodeArgs,
        /// Design SNR (Es/N0) in dB [default: 2].
        #[arg(long = "snr-db", allow_negative_numbers = true)]
        snr_db: Option<f64>,
        /// Monte-Carlo trials [default: 100000].
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Frame error rate over an SNR grid.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        kernels: KernelArgs,
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Frames per SNR point [default: 10000].
        #[arg(long)]
        trials: Option<usize>,
        /// Code files written by `construct` (repeatable); skips construction.
        #[arg(long = "code")]
        codes: Vec<PathBuf>,
        /// Design SNR in dB for codes constructed on the fly [default: 2].
        #[arg(long, allow_negative_numbers = true)]
        design_snr_db: Option<f64>,
        /// Construction trials for codes built on the fly [default: 100000].
        #[arg(long)]
        construction_trials: Option<usize>,
    },
    /// Union bounds of the good channel over an SNR grid.
    Bounds {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        kernels: KernelArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sorted genie-aided reliability curves for several kernel placements.
    PolarizationSpeed {
        #[command(flatten)]
        common: CommonArgs,
        /// Overrides the proposed kernel used by the `*-proposed` variants.
        #[arg(long = "kernel")]
        kernel: Option<String>,
        /// Comma-separated subset of all-proposed, all-sasoglu, all-standard,
        /// channel-stage-only-proposed, channel-stage-only-sasoglu.
        #[arg(long, value_delimiter = ',')]
        variants: Vec<String>,
        /// Block length, a power of two [default: 256].
        #[arg(short = 'N', long = "block-len")]
        block_len: Option<usize>,
        /// SNR (Es/N0) in dB [default: 2].
        #[arg(long = "snr-db", allow_negative_numbers = true)]
        snr_db: Option<f64>,
        /// Monte-Carlo trials per variant [default: 10000].
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// JSON experiment spec; flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Alphabet size.
    #[arg(long)]
    q: Option<usize>,
    /// Signal set: psk, pskN, rotated4, or a JSON file {q, es, points}.
    #[arg(long)]
    set: Option<String>,
    /// Symbol energy [default: 1].
    #[arg(long)]
    es: Option<f64>,
    /// Random seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for JSON and CSV outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON document instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct KernelArgs {
    /// Kernel names (repeatable or comma-separated): standard, sasoglu,
    /// proposed, L3, L4, L5a, L5b, L8, M4.
    #[arg(long = "kernel", value_delimiter = ',')]
    kernels: Vec<String>,
    /// Explicit per-stage kernels, stage 1 first, comma-separated.
    #[arg(long, value_delimiter = ',')]
    stages: Vec<String>,
}

#[derive(Args)]
struct CodeArgs {
    /// Block length, a power of two.
    #[arg(short = 'N', long = "block-len")]
    block_len: Option<usize>,
    /// Information symbols [default: floor(N / log2 q)].
    #[arg(short = 'K', long = "info-len")]
    info_len: Option<usize>,
}

#[derive(Args)]
struct GridArgs {
    /// SNR grid (Es/N0) in dB, comma-separated.
    #[arg(long = "snr-db", value_delimiter = ',', allow_negative_numbers = true)]
    snr_db: Vec<f64>,
}

impl CommonArgs {
    fn base(&self, command: &str) -> ExperimentSpec {
        ExperimentSpec {
            command: Some(command.to_string()),
            q: self.q,
            set: self.set.clone(),
            es: self.es,
            seed: self.seed,
            out: self.out.clone(),
            ..Default::default()
        }
    }

    /// Merges flags over the spec file and checks the command matches.
    fn resolve(&self, flags: ExperimentSpec) -> Result<ExperimentSpec> {
        let file = match &self.spec {
            Some(path) => ExperimentSpec::load(path)?,
            None => ExperimentSpec::default(),
        };
        if let (Some(a), Some(b)) = (&flags.command, &file.command) {
            if a != b {
                return usage(format!("spec file is for `{b}`, not `{a}`"));
            }
        }
        Ok(flags.over(file))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::AnalyzeKernel { common, kernels } => {
            let flags = ExperimentSpec {
                kernels: kernels.kernels,
                stages: kernels.stages,
                ..common.base("analyze-kernel")
            };
            output::emit(commands::analyze(common.resolve(flags)?)?, common.json)
        }
        Command::SearchKernel { common, full_space } => {
            let flags = ExperimentSpec {
                full_space: full_space.then_some(true),
                ..common.base("search-kernel")
            };
            output::emit(commands::search(common.resolve(flags)?)?, common.json)
        }
        Command::Construct {
            common,
            kernels,
            code,
            snr_db,
            trials,
        } => {
            let flags = ExperimentSpec {
                kernels: kernels.kernels,
                stages: kernels.stages,
                block_len: code.block_len,
                info_len: code.info_len,
                design_snr_db: snr_db,
                trials,
                ..common.base("construct")
            };
            output::emit(commands::construct(common.resolve(flags)?)?, common.json)
        }
        Command::Simulate {
            common,
            kernels,
            code,
            grid,
            trials,
            codes,
            design_snr_db,
            construction_trials,
        } => {
            let flags = ExperimentSpec {
                kernels: kernels.kernels,
                stages: kernels.stages,
                block_len: code.block_len,
                info_len: code.info_len,
                snr_db: grid.snr_db,
                trials,
                codes,
                design_snr_db,
                construction_trials,
                ..common.base("simulate")
            };
            output::emit(commands::simulate(common.resolve(flags)?)?, common.json)
        }
        Command::Bounds { common, kernels, grid } => {
            let flags = ExperimentSpec {
                kernels: kernels.kernels,
                stages: kernels.stages,
                snr_db: grid.snr_db,
                ..common.base("bounds")
            };
            output::emit(commands::bounds(common.resolve(flags)?)?, common.json)
        }
        Command::PolarizationSpeed {
            common,
            kernel,
            variants,
            block_len,
            snr_db,
            trials,
        } => {
            let flags = ExperimentSpec {
                kernels: kernel.into_iter().collect(),
                variants,
                block_len,
                design_snr_db: snr_db,
                trials,
                ..common.base("polarization-speed")
            };
            output::emit(commands::polarization_speed(common.resolve(flags)?)?, common.json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
