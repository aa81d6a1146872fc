//! Multipath protocol on a general graph.
//!
//! The tilde-weighted maxflow is decomposed into paths; each path runs its
//! own relay chain and the destination combines the blocks of all paths.
//! Edges shared by several paths are time-shared: path `i` repeats every
//! codeword symbol `r_{i,e}` times on edge `e`, with `r_{i,e}` proportional
//! to its split allocation `B_{i,e}`.
//!
//! Time is cut into windows of `D = B·ℓ·W` base uses, where `ℓ = M!` and `W`
//! is the largest per-edge total of repetition factors. Hop `h` of block `t`
//! runs in window `t + h`, so a path of length `L` delivers `⌊n/D⌋ - L` blocks.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::decode::BlockScorer;
use super::hop::HopChannel;
use super::series::{Likelihood, Scratch, SeriesSpec};
use crate::error::{Error, Result};
use crate::graph::{weighted_network, ChannelGraph, Weights};
use crate::netflow::{decompose, maxflow, split_edges, Flow, Network, PathDecomposition};

#[derive(Debug, Clone, PartialEq)]
pub struct PathPlan {
    /// Node indices from source to destination.
    pub nodes: Vec<usize>,
    /// Indices into the graph's edge list.
    pub edges: Vec<usize>,
    /// Flow assigned to the path by the decomposition.
    pub flow: f64,
    /// Split allocation `B_{i,e}` per hop.
    pub allocation: Vec<usize>,
    /// Repetition factor `r_{i,e}` per hop.
    pub repeats: Vec<usize>,
    pub spec: SeriesSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkPlan {
    pub network: Network,
    pub flow: Flow,
    pub decomposition: PathDecomposition,
    pub paths: Vec<PathPlan>,
    pub messages: usize,
    pub block: usize,
    /// Codeword length `M!` of the reduction.
    pub ell: usize,
    /// `W`: largest per-edge sum of repetition factors.
    pub width: usize,
    /// Resolution passed to the edge splitting.
    pub split: usize,
    edge_count: usize,
}

/// Destination blocks, `blocks[path][t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkObservations {
    pub blocks: Vec<Vec<Vec<usize>>>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl NetworkPlan {
    /// Plans the protocol for `M` messages and block size `B`.
    ///
    /// `split` is the resolution of the edge splitting (at least the number
    /// of paths); `None` uses the number of paths.
    pub fn build(
        g: &ChannelGraph,
        messages: usize,
        block: usize,
        split: Option<usize>,
        likelihood: Likelihood,
    ) -> Result<Self> {
        super::check_block(block)?;
        let network = weighted_network(g, Weights::Tilde(messages))?;
        let flow = maxflow(&network);
        let decomposition = decompose(&network, &flow);
        if decomposition.paths.is_empty() {
            return Err(Error::InvalidGraph("maxflow is zero; no path carries flow".into()));
        }
        let k = decomposition.paths.len();
        let split = split.unwrap_or(k);
        let sn = split_edges(&network, &decomposition, split)?;
        let g_all = sn.sub_blocks.iter().flatten().fold(0, |a, &b| gcd(a, b)).max(1);

        let mut per_edge = vec![0usize; g.edges.len()];
        let mut paths = Vec::with_capacity(k);
        for (i, p) in decomposition.paths.iter().enumerate() {
            let allocation = sn.sub_blocks[i].clone();
            let repeats: Vec<usize> = allocation.iter().map(|&b| b / g_all).collect();
            let hops = p
                .edges
                .iter()
                .zip(&repeats)
                .map(|(&e, &r)| {
                    per_edge[e] += r;
                    HopChannel::reduced(g.edges[e].channel.clone(), messages, r)
                })
                .collect::<Result<Vec<_>>>()?;
            let spec = SeriesSpec::new(hops, messages, block)?.with_likelihood(likelihood)?;
            paths.push(PathPlan {
                nodes: p.nodes.clone(),
                edges: p.edges.clone(),
                flow: p.value,
                allocation,
                repeats,
                spec,
            });
        }
        let width = per_edge.iter().copied().max().unwrap_or(1).max(1);
        let ell = paths[0].spec.hops()[0].word_len() / paths[0].repeats[0];
        Ok(Self {
            network,
            flow,
            decomposition,
            paths,
            messages,
            block,
            ell,
            width,
            split,
            edge_count: g.edges.len(),
        })
    }

    /// Base channel uses per window, `D = B·ℓ·W`.
    pub fn window(&self) -> usize {
        self.block * self.ell * self.width
    }

    pub fn longest_path(&self) -> usize {
        self.paths.iter().map(|p| p.edges.len()).max().unwrap_or(0)
    }

    /// Smallest horizon that delivers at least one block on every path.
    pub fn min_horizon(&self) -> usize {
        (self.longest_path() + 1) * self.window()
    }

    /// Blocks each path delivers within horizon `n`.
    pub fn blocks_per_path(&self, n: usize) -> Result<Vec<usize>> {
        let min = self.min_horizon();
        if n < min {
            return Err(Error::HorizonTooShort { n, min });
        }
        let windows = n / self.window();
        Ok(self.paths.iter().map(|p| windows - p.edges.len()).collect())
    }

    /// Base channel uses of every graph edge over horizon `n`.
    pub fn edge_usage(&self, n: usize) -> Result<Vec<usize>> {
        let blocks = self.blocks_per_path(n)?;
        let mut usage = vec![0usize; self.edge_count];
        for (p, &nb) in self.paths.iter().zip(&blocks) {
            for (&e, &r) in p.edges.iter().zip(&p.repeats) {
                usage[e] += nb * self.block * self.ell * r;
            }
        }
        Ok(usage)
    }

    /// Largest number of base uses any edge needs inside one window.
    pub fn peak_window_usage(&self) -> usize {
        let mut usage = vec![0usize; self.edge_count];
        for p in &self.paths {
            for (&e, &r) in p.edges.iter().zip(&p.repeats) {
                usage[e] += self.block * self.ell * r;
            }
        }
        usage.into_iter().max().unwrap_or(0)
    }

    pub fn specs(&self) -> Vec<SeriesSpec> {
        self.paths.iter().map(|p| p.spec.clone()).collect()
    }

    /// Runs every block of every path for message `m`, handing each
    /// destination block to `visit`. Path `i` draws only from `rngs[i]`.
    pub fn run_with<R: RngCore>(
        &self,
        n: usize,
        m: usize,
        rngs: &mut [R],
        scratch: &mut Scratch,
        mut visit: impl FnMut(usize, &[usize], &mut Scratch),
    ) -> Result<()> {
        if m >= self.messages {
            return Err(Error::BoundsViolation(alloc::format!("message {m} not below M = {}", self.messages)));
        }
        if rngs.len() != self.paths.len() {
            return Err(Error::LengthMismatch {
                expected: self.paths.len(),
                found: rngs.len(),
            });
        }
        let blocks = self.blocks_per_path(n)?;
        let mut tmp = Scratch::default();
        for (i, (p, rng)) in self.paths.iter().zip(rngs.iter_mut()).enumerate() {
            for _ in 0..blocks[i] {
                let b = p.spec.final_block(m, rng, scratch);
                visit(i, b, &mut tmp);
            }
        }
        Ok(())
    }

    /// Runs the protocol and keeps all destination blocks.
    pub fn run<R: RngCore>(&self, n: usize, m: usize, rngs: &mut [R]) -> Result<NetworkObservations> {
        let mut blocks = vec![Vec::new(); self.paths.len()];
        let mut scratch = Scratch::default();
        self.run_with(n, m, rngs, &mut scratch, |i, b, _| blocks[i].push(b.to_vec()))?;
        Ok(NetworkObservations { blocks })
    }

    /// Runs the protocol and decodes on the fly.
    pub fn run_and_decode<R: RngCore>(
        &self,
        n: usize,
        m: usize,
        rngs: &mut [R],
        scorer: &impl BlockScorer,
        scratch: &mut Scratch,
    ) -> Result<usize> {
        let mut scores = vec![0.0; self.messages];
        self.run_with(n, m, rngs, scratch, |i, b, s| scorer.add_scores(i, b, s, &mut scores))?;
        Ok(super::decode::argmax(&scores))
    }
}
