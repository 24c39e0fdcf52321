use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use entcap_core::{asymptotic_capacity, capacity, estimate, ChainConfig, EnsembleKind, EnsembleSpec, Observable};

use crate::simulate::default_sampler;

pub const OFFSETS: [u32; 3] = [0, 5, 10];

const HEADER: [&str; 9] =
    ["m", "n", "alpha_or_beta_offset", "exact_capacity", "limit", "mc_mean", "mc_stderr", "samples", "seed"];

struct Mc {
    samples: u64,
    seed: u64,
}

fn write_table(path: &Path, kind: EnsembleKind, m_max: u32, mc: Option<&Mc>) -> anyhow::Result<()> {
    let limit = asymptotic_capacity(kind);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(HEADER)?;
    for offset in OFFSETS {
        for m in 2..=m_max {
            let spec = EnsembleSpec::new(m, m + offset, kind)?;
            let exact = capacity(spec)?;
            let mut row = vec![
                m.to_string(),
                spec.n().to_string(),
                spec.weight_exponent().to_string(),
                exact.to_string(),
                limit.to_string(),
            ];
            match mc {
                Some(mc) => {
                    let cfg = ChainConfig { n_samples: mc.samples, seed: mc.seed, ..ChainConfig::for_spec(spec) };
                    let e = estimate(spec, Observable::C, &cfg, default_sampler(kind))?;
                    row.extend([e.mean.to_string(), e.std_error.to_string(), e.n_samples.to_string(), e.seed.to_string()]);
                }
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes both tables next to each other under temporary names and renames
/// them only once both are complete.
pub fn run(out: &Path, with_mc: bool, samples: u64, seed: u64, m_max: u32) -> anyhow::Result<ExitCode> {
    if m_max < 2 {
        return Err(entcap_core::Error::Dimensions(format!("--m-max must be >= 2, got {m_max}")).into());
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mc = with_mc.then_some(Mc { samples, seed });
    let targets: Vec<(EnsembleKind, PathBuf, PathBuf)> = [EnsembleKind::HilbertSchmidt, EnsembleKind::BuresHall]
        .into_iter()
        .map(|k| {
            let name = format!("{}.csv", k.short_name());
            (k, out.join(format!(".{name}.partial")), out.join(name))
        })
        .collect();
    let result = targets.iter().try_for_each(|(kind, partial, _)| {
        write_table(partial, *kind, m_max, mc.as_ref()).with_context(|| format!("writing {}", partial.display()))
    });
    if let Err(err) = result {
        for (_, partial, _) in &targets {
            let _ = fs::remove_file(partial);
        }
        return Err(err);
    }
    for (_, partial, fin) in &targets {
        fs::rename(partial, fin).with_context(|| format!("moving {} into place", fin.display()))?;
        eprintln!("wrote {}", fin.display());
    }
    Ok(ExitCode::SUCCESS)
}
