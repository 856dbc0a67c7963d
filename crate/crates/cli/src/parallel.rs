//! Parallel enumeration. Chunks are keyed by the first index of each subset,
//! so merging in chunk order reproduces the sequential result exactly.

use rayon::prelude::*;

use toric_gauss::configuration::{self, PointConfiguration};
use toric_gauss::gaussmap::{self, EnumerationOptions, GaussStructure, SpanningSumData};
use toric_gauss::Result;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "TORIC_GAUSS_THREADS";

fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// [`gaussmap::analyze`] with the chunks spread over a thread pool.
pub fn analyze(config: &PointConfiguration, options: EnumerationOptions) -> Result<GaussStructure> {
    analyze_with_threads(config, options, thread_count())
}

pub fn analyze_with_threads(
    config: &PointConfiguration,
    options: EnumerationOptions,
    threads: Option<usize>,
) -> Result<GaussStructure> {
    let normalization = configuration::normalize(config);
    let input = &normalization.normalized;
    let chunks = gaussmap::chunk_count(input);
    let run = || -> Vec<SpanningSumData> {
        (0..chunks).into_par_iter().map(|first| gaussmap::enumerate_chunk(input, first, options)).collect()
    };
    let parts = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    let data = parts.into_iter().fold(SpanningSumData::empty(), |acc, part| acc.merge(part, options.witness_limit));
    gaussmap::assemble(config, normalization, options.mode, data)
}
