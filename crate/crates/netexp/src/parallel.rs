//! Multi-threaded Monte Carlo driver.
//!
//! Work is cut into fixed chunks of trials per `(horizon, message)` cell and
//! the per-chunk error counts are summed, so the result does not depend on
//! the number of threads.

use netexp_core::analysis::{SimResult, Simulator};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "NETEXP_THREADS";

/// Trials per work unit.
pub const CHUNK: u64 = 4096;

/// Worker count from [`THREADS_ENV`], or `None` for the rayon default.
pub fn thread_limit() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

pub fn run_parallel(sim: &Simulator, threads: Option<usize>) -> netexp_core::Result<SimResult> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");
    pool.install(|| run_in_pool(sim))
}

fn run_in_pool(sim: &Simulator) -> netexp_core::Result<SimResult> {
    use rayon::prelude::*;

    let cfg = sim.config();
    let mut units = Vec::new();
    for h in 0..cfg.horizons.len() {
        for m in 0..cfg.messages {
            let mut start = 0;
            while start < cfg.trials {
                let end = (start + CHUNK).min(cfg.trials);
                units.push((h, m, start..end));
                start = end;
            }
        }
    }
    log::debug!("{} work units on {} threads", units.len(), rayon::current_num_threads());
    let counts = units
        .into_par_iter()
        .map(|(h, m, range)| sim.count_errors(h, m, range).map(|e| (h, m, e)))
        .collect::<netexp_core::Result<Vec<_>>>()?;
    let mut errors = vec![vec![0u64; cfg.messages]; cfg.horizons.len()];
    for (h, m, e) in counts {
        errors[h][m] += e;
    }
    Ok(SimResult::from_counts(cfg, &errors))
}
