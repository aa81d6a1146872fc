//! Destination decoders.
//!
//! Both decoders add a per-message score for every received block and pick
//! the highest total, lowest message index on ties.

use alloc::vec;
use alloc::vec::Vec;

use super::exact::CompositeDistribution;
use super::series::{state_log_likelihoods, Scratch, SeriesSpec};
use super::NodeState;
use crate::error::{Error, Result};

/// Adds per-message scores for one destination block of one path.
pub trait BlockScorer {
    fn messages(&self) -> usize;
    fn add_scores(&self, path: usize, block: &[usize], scratch: &mut Scratch, scores: &mut [f64]);
}

/// Exact block log-likelihoods from the composite distribution of each path.
#[derive(Debug, Clone)]
pub struct ExactScorer {
    dists: Vec<CompositeDistribution>,
}

impl ExactScorer {
    pub fn new(dists: Vec<CompositeDistribution>) -> Result<Self> {
        let Some(first) = dists.first() else {
            return Err(Error::DistributionUnavailable);
        };
        let m = first.messages();
        if dists.iter().any(|d| d.messages() != m) {
            return Err(Error::DistributionUnavailable);
        }
        Ok(Self { dists })
    }

    pub fn distributions(&self) -> &[CompositeDistribution] {
        &self.dists
    }
}

impl BlockScorer for ExactScorer {
    fn messages(&self) -> usize {
        self.dists[0].messages()
    }

    fn add_scores(&self, path: usize, block: &[usize], _scratch: &mut Scratch, scores: &mut [f64]) {
        let d = &self.dists[path];
        let idx = d.block_index(block);
        for (m, s) in scores.iter_mut().enumerate() {
            *s += d.log_probs[m][idx];
        }
    }
}

/// Scores message `m` by the best codeword `(m, ℓ)` under the last hop's channel.
#[derive(Debug, Clone, Copy)]
pub struct HeuristicScorer<'a> {
    specs: &'a [SeriesSpec],
}

impl<'a> HeuristicScorer<'a> {
    pub fn new(specs: &'a [SeriesSpec]) -> Self {
        Self { specs }
    }
}

impl BlockScorer for HeuristicScorer<'_> {
    fn messages(&self) -> usize {
        self.specs[0].messages()
    }

    fn add_scores(&self, path: usize, block: &[usize], scratch: &mut Scratch, scores: &mut [f64]) {
        let spec = &self.specs[path];
        let hop = spec.hops().last().expect("non-empty series");
        let b = spec.block();
        state_log_likelihoods(hop, spec.messages(), b, block, scratch);
        for (m, s) in scores.iter_mut().enumerate() {
            let best = (0..=b / 2)
                .map(|l| scratch.states[NodeState::new(m, l).index(b)])
                .fold(f64::NEG_INFINITY, f64::max);
            *s += best;
        }
    }
}

pub use super::argmax;

fn decode_with(scorer: &impl BlockScorer, observations: &[Vec<Vec<usize>>]) -> usize {
    let mut scores = vec![0.0; scorer.messages()];
    let mut scratch = Scratch::default();
    for (path, blocks) in observations.iter().enumerate() {
        for b in blocks {
            scorer.add_scores(path, b, &mut scratch, &mut scores);
        }
    }
    argmax(&scores)
}

/// Maximum-likelihood decision from exact per-path block laws.
///
/// `observations[path][block]` holds the destination's raw blocks.
pub fn decode_ml_exact(observations: &[Vec<Vec<usize>>], dists: &[CompositeDistribution]) -> Result<usize> {
    if dists.len() < observations.len() {
        return Err(Error::DistributionUnavailable);
    }
    let scorer = ExactScorer::new(dists.to_vec())?;
    for (path, blocks) in observations.iter().enumerate() {
        let d = &dists[path];
        if blocks.iter().any(|b| b.len() != d.length) {
            return Err(Error::LengthMismatch {
                expected: d.length,
                found: blocks.iter().map(Vec::len).find(|&l| l != d.length).unwrap_or(0),
            });
        }
    }
    Ok(decode_with(&scorer, observations))
}

/// Best-codeword decision using only the last hop of each path.
pub fn decode_heuristic(observations: &[Vec<Vec<usize>>], specs: &[SeriesSpec]) -> usize {
    decode_with(&HeuristicScorer::new(specs), observations)
}
