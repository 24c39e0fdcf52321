use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use entcap_core::{EnsembleKind, Observable, SamplerKind};

mod dims;
mod exact;
mod figure1;
mod record;
mod simulate;
mod verify;

use dims::DimRange;

#[derive(Parser, Debug)]
#[command(name = "entcap", version, about = "Average entanglement capacity of random bipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy, Default)]
#[group(multiple = false)]
pub struct Format {
    /// Emit one JSON document.
    #[arg(long)]
    pub json: bool,
    /// Emit CSV with a header row.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact mean capacity and entropy moments.
    Exact {
        #[arg(long, short = 'e', default_value = "hs")]
        ensemble: EnsembleKind,
        /// Subsystem dimension m, or an inclusive range such as 2..50.
        #[arg(short = 'm')]
        m: DimRange,
        /// Subsystem dimension n (or range); defaults to m + offset.
        #[arg(short = 'n', conflicts_with = "offset")]
        n: Option<DimRange>,
        /// Use n = m + offset for every m.
        #[arg(long)]
        offset: Option<u32>,
        #[command(flatten)]
        format: Format,
    },
    /// Large-dimension limit of the mean capacity.
    Limit {
        ensemble: EnsembleKind,
        /// Print the exact value minus the limit at (m, n) instead.
        #[arg(long, requires_all = ["m", "n"])]
        delta: bool,
        #[arg(short = 'm')]
        m: Option<u32>,
        #[arg(short = 'n')]
        n: Option<u32>,
    },
    /// Monte-Carlo estimates with sampler diagnostics.
    Simulate {
        #[arg(long, short = 'e', default_value = "hs")]
        ensemble: EnsembleKind,
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// matrix (hs only) or mcmc; defaults to matrix for hs, mcmc for bh.
        #[arg(long)]
        sampler: Option<SamplerKind>,
        #[arg(long, default_value_t = 4)]
        chains: u32,
        /// Observables to estimate: S1, S2, C, VarS1 (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "C")]
        observable: Vec<Observable>,
        #[arg(long, default_value_t = 10_000)]
        burn_in: u32,
        /// Sweeps between retained states; defaults to m.
        #[arg(long)]
        thinning: Option<u32>,
        #[arg(long, default_value_t = 0.35)]
        step_scale: f64,
        #[command(flatten)]
        format: Format,
    },
    /// Write hs.csv and bh.csv with exact, limiting and (optionally) simulated capacities.
    Figure1 {
        #[arg(long)]
        out: PathBuf,
        /// Add Monte-Carlo columns (slow for large m).
        #[arg(long)]
        with_mc: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        m_max: u32,
    },
    /// Audit summation identities, oracle agreement and the E[T2] pipeline.
    Verify {
        #[arg(long, default_value = "all")]
        suite: verify::Suite,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("ENTCAP_THREADS") {
        let threads: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&t| t >= 1)
            .with_context(|| format!("ENTCAP_THREADS must be a positive integer, got '{raw}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Exact { ensemble, m, n, offset, format } => exact::run(ensemble, m, n, offset, format),
        Command::Limit { ensemble, delta, m, n } => exact::limit(ensemble, delta, m, n),
        Command::Simulate {
            ensemble,
            m,
            n,
            samples,
            seed,
            sampler,
            chains,
            observable,
            burn_in,
            thinning,
            step_scale,
            format,
        } => simulate::run(simulate::Request {
            ensemble,
            m,
            n,
            samples,
            seed,
            sampler,
            chains,
            observables: observable,
            burn_in,
            thinning,
            step_scale,
            format,
        }),
        Command::Figure1 { out, with_mc, samples, seed, m_max } => figure1::run(&out, with_mc, samples, seed, m_max),
        Command::Verify { suite } => verify::run(suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<entcap_core::Error>() {
                Some(entcap_core::Error::Dimensions(_)) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
