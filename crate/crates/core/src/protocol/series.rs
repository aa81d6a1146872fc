use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand_core::RngCore;

use super::exact;
use super::hop::{mix, reduce_inputs, HopChannel};
use super::{assign_state, check_block, codeword, state_count, NodeState};
use crate::channel::Dmc;
use crate::error::{Error, Result};
use crate::math;

/// How a relay weighs the possible states of its predecessor when it
/// computes per-message likelihoods of a received block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Likelihood {
    /// Uniform over the levels of each message. The first relay knows the
    /// source always sends at full confidence.
    #[default]
    Uniform,
    /// The exact state law of the predecessor given the source message,
    /// from a forward pass over all block outcomes (tiny instances only).
    Exact,
}

/// A chain of hops run with one block size and message count.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    hops: Vec<HopChannel>,
    messages: usize,
    block: usize,
    flow_value: f64,
    likelihood: Likelihood,
    /// `priors[j][m]`: `(sender state index, log weight)` pairs for hop `j` under message `m`.
    priors: Vec<Vec<Vec<(usize, f64)>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopRecord {
    /// State of the sending node.
    pub sender: NodeState,
    /// Message symbols sent, length `B`.
    pub sent: Vec<usize>,
    /// Base-channel outputs, `word_len` per sent symbol.
    pub received: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub hops: Vec<HopRecord>,
}

impl Transcript {
    /// The block received by the destination.
    pub fn final_block(&self) -> &[usize] {
        &self.hops.last().expect("at least one hop").received
    }

    /// One line per hop: `hop=<j> state=(<m>,<ℓ>) sent=<digits> recv=<digits>`,
    /// with 1-based hops, messages and sent symbols.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (j, h) in self.hops.iter().enumerate() {
            let sent: Vec<usize> = h.sent.iter().map(|s| s + 1).collect();
            let _ = writeln!(
                out,
                "hop={} state=({},{}) sent={} recv={}",
                j + 1,
                h.sender.m + 1,
                h.sender.ell,
                digits(&sent),
                digits(&h.received)
            );
        }
        out
    }
}

fn digits(xs: &[usize]) -> String {
    let mut s = String::new();
    let sep = xs.iter().any(|&x| x > 9);
    for (i, x) in xs.iter().enumerate() {
        if sep && i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    s
}

/// Reusable buffers for block-level likelihood work.
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    table: Vec<f64>,
    prefix: Vec<f64>,
    suffix: Vec<f64>,
    pub(crate) states: Vec<f64>,
    messages: Vec<f64>,
    sent: Vec<usize>,
    received: Vec<usize>,
}

impl SeriesSpec {
    /// Builds a chain from ready-made hops; the flow value is the smallest
    /// pairwise word distance over all hops.
    pub fn new(hops: Vec<HopChannel>, messages: usize, block: usize) -> Result<Self> {
        check_block(block)?;
        if messages < 2 {
            return Err(Error::ParameterOutOfRange {
                name: "M",
                value: messages as f64,
            });
        }
        if hops.is_empty() {
            return Err(Error::InvalidGraph("series needs at least one hop".into()));
        }
        for h in &hops {
            if h.messages() != messages {
                return Err(Error::DimensionMismatch {
                    left: h.messages(),
                    right: messages,
                });
            }
        }
        let flow_value = hops
            .iter()
            .map(HopChannel::min_distance)
            .fold(f64::INFINITY, f64::min);
        let mut spec = Self {
            hops,
            messages,
            block,
            flow_value,
            likelihood: Likelihood::Uniform,
            priors: Vec::new(),
        };
        spec.priors = spec.uniform_priors();
        Ok(spec)
    }

    /// Reduces `channels` with the permutation codebook, then builds the chain.
    pub fn reduced(channels: &[Dmc], messages: usize, block: usize) -> Result<Self> {
        check_block(block)?;
        let r = reduce_inputs(channels, messages)?;
        Self::new(r.hops, messages, block)
    }

    /// Switches the relays' likelihood rule.
    pub fn with_likelihood(mut self, likelihood: Likelihood) -> Result<Self> {
        self.priors = match likelihood {
            Likelihood::Uniform => self.uniform_priors(),
            Likelihood::Exact => {
                let ex = exact::forward(&self.hops, self.messages, self.block, self.flow_value, Likelihood::Exact)?;
                ex.occupancy
                    .iter()
                    .map(|per_msg| {
                        per_msg
                            .iter()
                            .map(|occ| {
                                occ.iter()
                                    .enumerate()
                                    .filter(|&(_, &p)| p > 0.0)
                                    .map(|(s, &p)| (s, math::ln(p)))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        self.likelihood = likelihood;
        Ok(self)
    }

    pub(crate) fn uniform_priors(&self) -> Vec<Vec<Vec<(usize, f64)>>> {
        uniform_priors(self.hops.len(), self.messages, self.block)
    }

    pub fn hops(&self) -> &[HopChannel] {
        &self.hops
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn flow_value(&self) -> f64 {
        self.flow_value
    }

    pub fn likelihood(&self) -> Likelihood {
        self.likelihood
    }

    /// Base-channel outputs per block on hop `j`.
    pub fn received_len(&self, hop: usize) -> usize {
        self.block * self.hops[hop].word_len()
    }

    pub fn source_state(&self, m: usize) -> NodeState {
        NodeState::new(m, self.block / 2)
    }

    /// Log-likelihood of `received` on hop `j` for every sender state, indexed by [`NodeState::index`].
    pub fn state_log_likelihoods(&self, hop: usize, received: &[usize], scratch: &mut Scratch) -> Vec<f64> {
        self.fill_state_log_likelihoods(hop, received, scratch);
        scratch.states.clone()
    }

    pub(crate) fn fill_state_log_likelihoods(&self, hop: usize, received: &[usize], scratch: &mut Scratch) {
        state_log_likelihoods(&self.hops[hop], self.messages, self.block, received, scratch);
    }

    /// Per-message log-likelihoods of a block received on hop `j`, under the relay's prior.
    pub fn message_log_likelihoods(&self, hop: usize, received: &[usize], scratch: &mut Scratch) -> Vec<f64> {
        self.fill_message_log_likelihoods(hop, received, scratch);
        scratch.messages.clone()
    }

    fn fill_message_log_likelihoods(&self, hop: usize, received: &[usize], scratch: &mut Scratch) {
        self.fill_state_log_likelihoods(hop, received, scratch);
        let Scratch { states, messages, .. } = scratch;
        messages.clear();
        for prior in &self.priors[hop] {
            messages.push(mix(prior.iter().map(|&(s, w)| w + states[s])));
        }
    }

    /// State assigned by the node that receives `received` over hop `j`.
    pub fn state_update(&self, hop: usize, received: &[usize], scratch: &mut Scratch) -> NodeState {
        self.fill_message_log_likelihoods(hop, received, scratch);
        assign_state(&scratch.messages, self.block, self.flow_value)
    }

    /// Runs one block for source message `m`, recording every hop.
    pub fn run_block<R: RngCore + ?Sized>(&self, m: usize, rng: &mut R) -> Result<Transcript> {
        if m >= self.messages {
            return Err(Error::BoundsViolation(alloc::format!("message {m} not below M = {}", self.messages)));
        }
        let mut scratch = Scratch::default();
        let mut state = self.source_state(m);
        let mut hops = Vec::with_capacity(self.hops.len());
        for (j, hop) in self.hops.iter().enumerate() {
            let sent = codeword(state.m, state.ell, self.block, self.messages)?;
            let mut received = Vec::with_capacity(self.received_len(j));
            hop.transmit(&sent, rng, &mut received);
            let next = if j + 1 < self.hops.len() {
                Some(self.state_update(j, &received, &mut scratch))
            } else {
                None
            };
            hops.push(HopRecord {
                sender: state,
                sent,
                received,
            });
            if let Some(s) = next {
                state = s;
            }
        }
        Ok(Transcript { hops })
    }

    /// Runs one block and leaves the destination's block in `scratch`; returns it.
    pub fn final_block<'s, R: RngCore + ?Sized>(&self, m: usize, rng: &mut R, scratch: &'s mut Scratch) -> &'s [usize] {
        let mut state = self.source_state(m);
        let last = self.hops.len() - 1;
        for (j, hop) in self.hops.iter().enumerate() {
            let mut sent = core::mem::take(&mut scratch.sent);
            fill_codeword(&mut sent, state, self.block, self.messages);
            let mut received = core::mem::take(&mut scratch.received);
            received.clear();
            hop.transmit(&sent, rng, &mut received);
            if j < last {
                state = self.state_update(j, &received, scratch);
            }
            scratch.sent = sent;
            scratch.received = received;
        }
        &scratch.received
    }
}

pub(crate) fn uniform_priors(hops: usize, messages: usize, block: usize) -> Vec<Vec<Vec<(usize, f64)>>> {
    let half = block / 2;
    let w = -math::ln((half + 1) as f64);
    (0..hops)
        .map(|j| {
            (0..messages)
                .map(|m| {
                    if j == 0 {
                        vec![(NodeState::new(m, half).index(block), 0.0)]
                    } else {
                        (0..=half).map(|l| (NodeState::new(m, l).index(block), w)).collect()
                    }
                })
                .collect()
        })
        .collect()
}

fn fill_codeword(out: &mut Vec<usize>, s: NodeState, block: usize, messages: usize) {
    out.clear();
    let head = block / 2 + s.ell;
    out.extend(core::iter::repeat_n(s.m, head));
    out.extend(core::iter::repeat_n((s.m + 1) % messages, block - head));
}

/// Fills `scratch.states` with the log-likelihood of `received` for every
/// sender state, using prefix and suffix sums of per-symbol likelihoods.
pub(crate) fn state_log_likelihoods(hop: &HopChannel, messages: usize, block: usize, received: &[usize], scratch: &mut Scratch) {
    hop.symbol_log_likelihoods(received, &mut scratch.table);
    let t = &scratch.table;
    let n = block;
    // prefix[a * (n+1) + i] = sum over positions < i; suffix likewise for positions >= i
    scratch.prefix.clear();
    scratch.prefix.resize(messages * (n + 1), 0.0);
    scratch.suffix.clear();
    scratch.suffix.resize(messages * (n + 1), 0.0);
    for a in 0..messages {
        let base = a * (n + 1);
        for i in 0..n {
            scratch.prefix[base + i + 1] = scratch.prefix[base + i] + t[i * messages + a];
        }
        for i in (0..n).rev() {
            scratch.suffix[base + i] = scratch.suffix[base + i + 1] + t[i * messages + a];
        }
    }
    scratch.states.clear();
    scratch.states.resize(state_count(messages, block), 0.0);
    let half = block / 2;
    for m in 0..messages {
        let next = (m + 1) % messages;
        for l in 0..=half {
            let h = half + l;
            scratch.states[NodeState::new(m, l).index(block)] =
                scratch.prefix[m * (n + 1) + h] + scratch.suffix[next * (n + 1) + h];
        }
    }
}
