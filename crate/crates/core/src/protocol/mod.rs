//! Block-forwarding relay protocol.
//!
//! A message travels hop by hop in blocks of `B` symbols. Every relay keeps a
//! belief state `(m, ℓ)`: the most likely message and a confidence level in
//! `0..=B/2`. A node in state `(m, ℓ)` sends `B/2 + ℓ` copies of `m` followed by
//! `B/2 - ℓ` copies of the next message (cyclically).
//!
//! Messages are `0..M` internally; text dumps print them 1-based.

mod decode;
mod exact;
mod hop;
mod network;
mod series;

pub use decode::{decode_heuristic, decode_ml_exact, BlockScorer, ExactScorer, HeuristicScorer};
pub use exact::{
    exact_block_distribution, exact_series, verify_transition_bound, CompositeDistribution, ExactSeries,
    TransitionReport, MAX_EXACT_BLOCK_ALPHABET,
};
pub use hop::{reduce_inputs, HopChannel, ReducedChannels, MAX_REDUCTION_MESSAGES};
pub use network::{NetworkObservations, NetworkPlan, PathPlan};
pub use series::{HopRecord, Likelihood, Scratch, SeriesSpec, Transcript};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeState {
    /// Message index in `0..M`.
    pub m: usize,
    /// Confidence level in `0..=B/2`.
    pub ell: usize,
}

impl NodeState {
    pub const fn new(m: usize, ell: usize) -> Self {
        Self { m, ell }
    }

    /// Dense index `m·(B/2+1) + ℓ`.
    pub fn index(self, block: usize) -> usize {
        self.m * (block / 2 + 1) + self.ell
    }

    pub fn from_index(index: usize, block: usize) -> Self {
        let w = block / 2 + 1;
        Self::new(index / w, index % w)
    }
}

/// Number of distinct states for block size `B` and `M` messages.
pub fn state_count(messages: usize, block: usize) -> usize {
    messages * (block / 2 + 1)
}

pub(crate) fn check_block(block: usize) -> Result<()> {
    if block % 2 == 1 {
        return Err(Error::OddBlockSize(block));
    }
    if block == 0 {
        return Err(Error::ParameterOutOfRange { name: "B", value: 0.0 });
    }
    Ok(())
}

/// The block sent by a node in state `(m, ℓ)`.
pub fn codeword(m: usize, ell: usize, block: usize, messages: usize) -> Result<Vec<usize>> {
    check_block(block)?;
    if m >= messages {
        return Err(Error::BoundsViolation(alloc::format!("message {m} not below M = {messages}")));
    }
    if ell > block / 2 {
        return Err(Error::BoundsViolation(alloc::format!("level {ell} exceeds B/2 = {}", block / 2)));
    }
    let mut out = Vec::with_capacity(block);
    let head = block / 2 + ell;
    out.extend(core::iter::repeat_n(m, head));
    out.extend(core::iter::repeat_n((m + 1) % messages, block - head));
    Ok(out)
}

/// `f|ℓ1 - ℓ2|` for equal messages, `f(ℓ1 + ℓ2)` otherwise.
pub fn state_pseudometric(a: NodeState, b: NodeState, flow_value: f64) -> f64 {
    let steps = if a.m == b.m { a.ell.abs_diff(b.ell) } else { a.ell + b.ell };
    if steps == 0 {
        0.0
    } else {
        flow_value * steps as f64
    }
}

/// Relative tolerance under which two log-likelihoods count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn tie_slack(v: f64) -> f64 {
    TIE_TOLERANCE * math::abs(v).max(1.0)
}

/// Index of the largest score; scores within [`TIE_TOLERANCE`] of the
/// running best go to the lower index.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (m, &v) in scores.iter().enumerate() {
        let top = scores[best];
        if v > top && (top == f64::NEG_INFINITY || v - top > tie_slack(top)) {
            best = m;
        }
    }
    best
}

/// Picks the state from per-message log-likelihoods.
///
/// `m` is the most likely message (lowest index on ties). The level is
/// `min(B/2, ⌊llr / (4f)⌋)` where `llr` is the log-ratio against the runner-up,
/// and 0 when the ratio is not positive.
pub fn assign_state(log_likelihoods: &[f64], block: usize, flow_value: f64) -> NodeState {
    let best = argmax(log_likelihoods);
    let second = log_likelihoods
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != best)
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let top = log_likelihoods[best];
    let half = block / 2;
    let ell = if top == f64::NEG_INFINITY {
        0
    } else if second == f64::NEG_INFINITY {
        half
    } else {
        let llr = top - second;
        if !(llr > tie_slack(top)) || flow_value.is_infinite() {
            0
        } else if flow_value <= 0.0 {
            half
        } else {
            let q = math::floor(llr / (4.0 * flow_value));
            if q >= half as f64 { half } else { q as usize }
        }
    };
    NodeState::new(best, ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn codeword_examples() {
        // 1-based (2,1,B=6,M=3) -> (2,2,2,2,3,3)
        assert_eq!(codeword(1, 1, 6, 3).unwrap(), vec![1, 1, 1, 1, 2, 2]);
        // wrap: (3,0,B=4,M=3) -> (3,3,1,1)
        assert_eq!(codeword(2, 0, 4, 3).unwrap(), vec![2, 2, 0, 0]);
        assert_eq!(codeword(0, 4, 8, 2).unwrap(), vec![0; 8]);
        assert!(matches!(codeword(0, 5, 8, 2), Err(Error::BoundsViolation(_))));
        assert!(matches!(codeword(2, 0, 8, 2), Err(Error::BoundsViolation(_))));
        assert!(matches!(codeword(0, 0, 5, 2), Err(Error::OddBlockSize(5))));
    }

    #[test]
    fn pseudometric_examples() {
        let s = NodeState::new;
        assert_eq!(state_pseudometric(s(0, 2), s(0, 5), 0.5), 1.5);
        assert_eq!(state_pseudometric(s(0, 2), s(1, 3), 0.5), 2.5);
        assert_eq!(state_pseudometric(s(0, 0), s(1, 0), 7.0), 0.0);
        assert_eq!(state_pseudometric(s(0, 0), s(1, 0), f64::INFINITY), 0.0);
    }

    #[test]
    fn state_assignment_rules() {
        // equal likelihoods: level 0, lowest index
        assert_eq!(assign_state(&[-1.0, -1.0], 6, 0.3), NodeState::new(0, 0));
        // llr = 2.5, f = 0.25 -> floor(2.5) = 2
        assert_eq!(assign_state(&[-3.0, -0.5], 6, 0.25), NodeState::new(1, 2));
        // clamp at B/2
        assert_eq!(assign_state(&[0.0, -100.0], 6, 0.25), NodeState::new(0, 3));
        // impossible runner-up
        assert_eq!(assign_state(&[f64::NEG_INFINITY, -2.0, f64::NEG_INFINITY], 4, 1.0), NodeState::new(1, 2));
        // infinite flow value: full confidence only for certain outcomes
        assert_eq!(assign_state(&[0.0, -100.0], 4, f64::INFINITY), NodeState::new(0, 0));
        assert_eq!(assign_state(&[0.0, f64::NEG_INFINITY], 4, f64::INFINITY), NodeState::new(0, 2));
    }

    #[test]
    fn state_indexing_round_trips() {
        for idx in 0..state_count(3, 6) {
            assert_eq!(NodeState::from_index(idx, 6).index(6), idx);
        }
    }
}
