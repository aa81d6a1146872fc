//! Monte Carlo estimation of end-to-end error probabilities.
//!
//! Every trial is a pure function of `(seed, horizon index, message, path,
//! trial)`: path `i` draws from a ChaCha8 generator keyed by the first four
//! with the trial index as stream number. Trials can therefore run in any
//! order on any number of threads.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use super::stats::{fit_exponent_points, wilson_interval, ExponentFit, Z95};
use crate::error::{Error, Result};
use crate::graph::ChannelGraph;
use crate::protocol::{exact_block_distribution, ExactScorer, HeuristicScorer, Likelihood, NetworkPlan, Scratch, SeriesSpec};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decoder {
    /// Maximum likelihood from exact block laws (tiny instances).
    Exact,
    #[default]
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MessageMode {
    #[default]
    WorstCase,
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: u64,
    /// Strictly increasing.
    pub horizons: Vec<usize>,
    pub block: usize,
    pub messages: usize,
    pub decoder: Decoder,
    pub message_mode: MessageMode,
    pub likelihood: Likelihood,
    /// Edge-splitting resolution; `None` uses the number of paths.
    pub split: Option<usize>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::ParameterOutOfRange { name: "trials", value: 0.0 });
        }
        if self.horizons.is_empty() {
            return Err(Error::InsufficientData { needed: 1, found: 0 });
        }
        if self.horizons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGraph("horizons must be strictly increasing".into()));
        }
        crate::protocol::codeword(0, 0, self.block, 2).map(|_| ())?;
        if self.messages < 2 {
            return Err(Error::ParameterOutOfRange {
                name: "M",
                value: self.messages as f64,
            });
        }
        Ok(())
    }
}

/// Error count of one `(horizon, message)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: usize,
    /// 0-based message.
    pub message: usize,
    pub errors: u64,
    pub trials: u64,
}

impl Cell {
    pub fn p_hat(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    pub fn interval(&self) -> (f64, f64) {
        wilson_interval(self.errors, self.trials, Z95)
    }
}

/// Aggregate over messages at one horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonSummary {
    pub n: usize,
    pub errors: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub cells: Vec<Cell>,
    pub summaries: Vec<HorizonSummary>,
    pub mode: MessageMode,
}

impl SimResult {
    /// Worst-case summaries report the message with the largest error rate
    /// (lowest index on ties); uniform summaries pool all messages.
    pub fn from_counts(config: &SimConfig, errors: &[Vec<u64>]) -> Self {
        let mut cells = Vec::new();
        let mut summaries = Vec::new();
        for (h, &n) in config.horizons.iter().enumerate() {
            let row: Vec<Cell> = errors[h]
                .iter()
                .enumerate()
                .map(|(m, &e)| Cell {
                    n,
                    message: m,
                    errors: e,
                    trials: config.trials,
                })
                .collect();
            let (e, t) = match config.message_mode {
                MessageMode::WorstCase => {
                    let worst = row.iter().fold(row[0], |a, c| if c.errors > a.errors { *c } else { a });
                    (worst.errors, worst.trials)
                }
                MessageMode::Uniform => (row.iter().map(|c| c.errors).sum(), row.iter().map(|c| c.trials).sum()),
            };
            let (lo, hi) = wilson_interval(e, t, Z95);
            summaries.push(HorizonSummary {
                n,
                errors: e,
                trials: t,
                p_hat: e as f64 / t as f64,
                ci_lo: lo,
                ci_hi: hi,
            });
            cells.extend(row);
        }
        Self {
            cells,
            summaries,
            mode: config.message_mode,
        }
    }
}

/// Least-squares decay rate of the summary error rates.
pub fn fit_exponent(result: &SimResult) -> Result<ExponentFit> {
    let pts: Vec<(usize, f64)> = result.summaries.iter().map(|s| (s.n, s.p_hat)).collect();
    fit_exponent_points(&pts)
}

enum Scoring {
    Exact(ExactScorer),
    Heuristic(Vec<SeriesSpec>),
}

/// A planned network plus decoder, ready to run trials.
pub struct Simulator {
    plan: NetworkPlan,
    scoring: Scoring,
    config: SimConfig,
}

impl Simulator {
    pub fn new(g: &ChannelGraph, config: SimConfig) -> Result<Self> {
        config.validate()?;
        let plan = NetworkPlan::build(g, config.messages, config.block, config.split, config.likelihood)?;
        for &n in &config.horizons {
            plan.blocks_per_path(n)?;
        }
        let scoring = match config.decoder {
            Decoder::Exact => {
                let dists = plan
                    .paths
                    .iter()
                    .map(|p| exact_block_distribution(&p.spec))
                    .collect::<Result<Vec<_>>>()?;
                Scoring::Exact(ExactScorer::new(dists)?)
            }
            Decoder::Heuristic => Scoring::Heuristic(plan.specs()),
        };
        Ok(Self { plan, scoring, config })
    }

    pub fn plan(&self) -> &NetworkPlan {
        &self.plan
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    fn rngs(&self, horizon: usize, m: usize, trial: u64) -> Vec<ChaCha8Rng> {
        (0..self.plan.paths.len())
            .map(|i| {
                let mut r = ChaCha8Rng::seed_from_u64(derive_seed(
                    self.config.seed,
                    &[horizon as u64, m as u64, i as u64],
                ));
                r.set_stream(trial);
                r
            })
            .collect()
    }

    /// Decoded message of one trial.
    pub fn decode_trial(&self, horizon: usize, m: usize, trial: u64, scratch: &mut Scratch) -> Result<usize> {
        let n = self.config.horizons[horizon];
        let mut rngs = self.rngs(horizon, m, trial);
        match &self.scoring {
            Scoring::Exact(s) => self.plan.run_and_decode(n, m, &mut rngs, s, scratch),
            Scoring::Heuristic(specs) => self.plan.run_and_decode(n, m, &mut rngs, &HeuristicScorer::new(specs), scratch),
        }
    }

    /// Whether trial `trial` for message `m` at horizon index `horizon` errs.
    pub fn trial(&self, horizon: usize, m: usize, trial: u64, scratch: &mut Scratch) -> Result<bool> {
        Ok(self.decode_trial(horizon, m, trial, scratch)? != m)
    }

    /// Error count over trials `range` for one cell.
    pub fn count_errors(&self, horizon: usize, m: usize, range: core::ops::Range<u64>) -> Result<u64> {
        let mut scratch = Scratch::default();
        let mut errors = 0;
        for t in range {
            if self.trial(horizon, m, t, &mut scratch)? {
                errors += 1;
            }
        }
        Ok(errors)
    }

    /// Runs every cell on the calling thread.
    pub fn run_serial(&self) -> Result<SimResult> {
        let mut errors = vec![vec![0u64; self.config.messages]; self.config.horizons.len()];
        for (h, row) in errors.iter_mut().enumerate() {
            for (m, e) in row.iter_mut().enumerate() {
                *e = self.count_errors(h, m, 0..self.config.trials)?;
            }
        }
        Ok(SimResult::from_counts(&self.config, &errors))
    }
}
