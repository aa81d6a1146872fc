//! Exact forward computation of the relay chain over all block outcomes.

use alloc::vec;
use alloc::vec::Vec;

use super::hop::{mix, HopChannel};
use super::series::{state_log_likelihoods, uniform_priors, Likelihood, Scratch, SeriesSpec};
use super::{assign_state, state_count, state_pseudometric, NodeState};
use crate::error::{Error, Result};
use crate::math::{self, LogSumExp};

/// Largest per-hop block alphabet enumerated by the exact routines.
pub const MAX_EXACT_BLOCK_ALPHABET: u128 = 1_000_000;

/// Per-message laws of the destination's block, in log domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeDistribution {
    /// Base output alphabet size.
    pub outputs: usize,
    /// Base outputs per block.
    pub length: usize,
    /// `log_probs[m][y]`, `y` the big-endian index of the block.
    pub log_probs: Vec<Vec<f64>>,
}

impl CompositeDistribution {
    pub fn messages(&self) -> usize {
        self.log_probs.len()
    }

    /// Index of a block, first symbol most significant.
    pub fn block_index(&self, block: &[usize]) -> usize {
        block.iter().fold(0, |acc, &y| acc * self.outputs + y)
    }

    pub fn log_prob(&self, m: usize, block: &[usize]) -> f64 {
        self.log_probs[m][self.block_index(block)]
    }

    /// Bhattacharyya distance between the laws of two messages.
    pub fn bhattacharyya(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        crate::divergence::bhattacharyya_logs(&self.log_probs[a], &self.log_probs[b])
    }

    /// Probability that maximum-likelihood decoding of a single block errs,
    /// per true message (ties to the lowest index).
    pub fn ml_error_probabilities(&self) -> Vec<f64> {
        let m = self.messages();
        let mut err = vec![0.0; m];
        let size = self.log_probs[0].len();
        for y in 0..size {
            let mut best = 0;
            for k in 1..m {
                if self.log_probs[k][y] > self.log_probs[best][y] {
                    best = k;
                }
            }
            for (k, e) in err.iter_mut().enumerate() {
                if k != best {
                    *e += math::exp(self.log_probs[k][y]);
                }
            }
        }
        err
    }
}

/// Everything the exact forward pass produces.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSeries {
    /// `occupancy[j][m][s]`: probability that sending node `j` is in state `s`
    /// given source message `m`; node 0 is the source.
    pub occupancy: Vec<Vec<Vec<f64>>>,
    /// `hop_db[j][a][b]`: Bhattacharyya distance between the laws of the block
    /// received over hop `j` under messages `a` and `b`.
    pub hop_db: Vec<Vec<Vec<f64>>>,
    pub destination: CompositeDistribution,
}

fn block_alphabet(hop: &HopChannel, block: usize) -> Result<usize> {
    let len = block * hop.word_len();
    let size = (hop.base().output_size() as u128).saturating_pow(len.min(u32::MAX as usize) as u32);
    if size > MAX_EXACT_BLOCK_ALPHABET {
        return Err(Error::StateSpaceTooLarge {
            size,
            limit: MAX_EXACT_BLOCK_ALPHABET,
        });
    }
    Ok(size as usize)
}

pub(crate) fn forward(
    hops: &[HopChannel],
    messages: usize,
    block: usize,
    flow_value: f64,
    likelihood: Likelihood,
) -> Result<ExactSeries> {
    for h in hops {
        block_alphabet(h, block)?;
    }
    let states = state_count(messages, block);
    let uniform = uniform_priors(hops.len(), messages, block);
    let mut occ = vec![vec![0.0; states]; messages];
    for (m, row) in occ.iter_mut().enumerate() {
        row[NodeState::new(m, block / 2).index(block)] = 1.0;
    }
    let mut occupancy = Vec::with_capacity(hops.len());
    let mut hop_db = Vec::with_capacity(hops.len());
    let mut destination = None;
    let mut scratch = Scratch::default();

    for (j, hop) in hops.iter().enumerate() {
        let last = j + 1 == hops.len();
        let support: Vec<Vec<(usize, f64)>> = occ
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(_, &p)| p > 0.0)
                    .map(|(s, &p)| (s, math::ln(p)))
                    .collect()
            })
            .collect();
        let outputs = hop.base().output_size();
        let len = block * hop.word_len();
        let size = block_alphabet(hop, block)?;
        let mut y = vec![0usize; len];
        let mut lp = vec![0.0; messages];
        let mut relay_ll = vec![0.0; messages];
        let mut pair_acc = vec![vec![LogSumExp::new(); messages]; messages];
        let mut next = vec![vec![0.0; states]; messages];
        let mut dest = if last { vec![vec![0.0; size]; messages] } else { Vec::new() };

        for idx in 0..size {
            state_log_likelihoods(hop, messages, block, &y, &mut scratch);
            for (m, sup) in support.iter().enumerate() {
                lp[m] = mix(sup.iter().map(|&(s, w)| w + scratch.states[s]));
            }
            for a in 0..messages {
                for b in a + 1..messages {
                    pair_acc[a][b].push(0.5 * (lp[a] + lp[b]));
                }
            }
            if last {
                for m in 0..messages {
                    dest[m][idx] = lp[m];
                }
            } else {
                let ll: &[f64] = match likelihood {
                    Likelihood::Exact => &lp,
                    Likelihood::Uniform => {
                        for (m, prior) in uniform[j].iter().enumerate() {
                            relay_ll[m] = mix(prior.iter().map(|&(s, w)| w + scratch.states[s]));
                        }
                        &relay_ll
                    }
                };
                let s = assign_state(ll, block, flow_value).index(block);
                for m in 0..messages {
                    if lp[m] > f64::NEG_INFINITY {
                        next[m][s] += math::exp(lp[m]);
                    }
                }
            }
            // advance the big-endian block counter
            for pos in (0..len).rev() {
                y[pos] += 1;
                if y[pos] < outputs {
                    break;
                }
                y[pos] = 0;
            }
        }

        let mut db = vec![vec![0.0; messages]; messages];
        for a in 0..messages {
            for b in a + 1..messages {
                let v = (-pair_acc[a][b].value()).max(0.0);
                db[a][b] = v;
                db[b][a] = v;
            }
        }
        hop_db.push(db);
        occupancy.push(core::mem::replace(&mut occ, next));
        if last {
            destination = Some(CompositeDistribution {
                outputs,
                length: len,
                log_probs: dest,
            });
        }
    }
    Ok(ExactSeries {
        occupancy,
        hop_db,
        destination: destination.expect("at least one hop"),
    })
}

/// Exact forward pass for `spec` under its likelihood rule.
pub fn exact_series(spec: &SeriesSpec) -> Result<ExactSeries> {
    forward(spec.hops(), spec.messages(), spec.block(), spec.flow_value(), spec.likelihood())
}

/// Exact per-message laws of the destination's block.
pub fn exact_block_distribution(spec: &SeriesSpec) -> Result<CompositeDistribution> {
    Ok(exact_series(spec)?.destination)
}

/// Minimum slack of the state-transition and block-divergence inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionReport {
    /// Over nodes `j < L`, messages `m1` and states `s`, of
    /// `-ln P(state_j = s | m1) - [2d((m1, B/2), s) - 2j ln(M(B+1)) - 2j f - j ln(M-1)]`.
    pub min_transition_slack: f64,
    /// Over hops `j < L` and message pairs, of
    /// `d_B(block_{j+1} | m1, block_{j+1} | m2) - [B f - 2(j+1) ln(M(B+1)) - 2j f - j ln(M-1)]`.
    pub min_chernoff_slack: f64,
    pub transition_checks: usize,
    pub chernoff_checks: usize,
    /// `(node, m1, state)` of the tightest finite transition check.
    pub tightest_transition: Option<(usize, usize, NodeState)>,
}

impl TransitionReport {
    pub fn holds(&self) -> bool {
        self.min_transition_slack >= 0.0 && self.min_chernoff_slack >= 0.0
    }
}

/// Checks both inequalities on the exact forward pass of `spec`.
pub fn verify_transition_bound(spec: &SeriesSpec) -> Result<TransitionReport> {
    let ex = exact_series(spec)?;
    let m_count = spec.messages();
    let b = spec.block();
    let f = spec.flow_value();
    let log_states = math::ln((m_count * (b + 1)) as f64);
    let log_m1 = math::ln((m_count - 1) as f64);
    let penalty = |j: usize, k: usize| -> f64 {
        // k ln(M(B+1)) terms, j of the flow and M-1 terms
        let jf = if j == 0 { 0.0 } else { 2.0 * j as f64 * f };
        2.0 * k as f64 * log_states + jf + j as f64 * log_m1
    };

    let mut report = TransitionReport {
        min_transition_slack: f64::INFINITY,
        min_chernoff_slack: f64::INFINITY,
        transition_checks: 0,
        chernoff_checks: 0,
        tightest_transition: None,
    };
    for (j, occ) in ex.occupancy.iter().enumerate() {
        for (m1, row) in occ.iter().enumerate() {
            let start = NodeState::new(m1, b / 2);
            for (s, &p) in row.iter().enumerate() {
                let state = NodeState::from_index(s, b);
                report.transition_checks += 1;
                if p <= 0.0 {
                    continue;
                }
                let lhs = -math::ln(p);
                let rhs = 2.0 * state_pseudometric(start, state, f) - penalty(j, j);
                let slack = lhs - rhs;
                if slack < report.min_transition_slack {
                    report.min_transition_slack = slack;
                    report.tightest_transition = Some((j, m1, state));
                }
            }
        }
    }
    for (j, db) in ex.hop_db.iter().enumerate() {
        let rhs = b as f64 * f - penalty(j, j + 1);
        for a in 0..m_count {
            for c in 0..m_count {
                if a == c {
                    continue;
                }
                report.chernoff_checks += 1;
                let slack = if db[a][c].is_infinite() { f64::INFINITY } else { db[a][c] - rhs };
                report.min_chernoff_slack = report.min_chernoff_slack.min(slack);
            }
        }
    }
    Ok(report)
}
