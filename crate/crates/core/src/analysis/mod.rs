//! Network-level bounds, the counterexample experiment, the exact one-hop
//! oracle and Monte Carlo estimation.

pub mod counterexample;
pub mod oracle;
pub mod sim;
pub mod stats;

use alloc::format;
use alloc::vec::Vec;

use crate::divergence::{is_pairwise_reversible, REVERSIBILITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::{weighted_network, ChannelGraph, Weights};
use crate::netflow::{maxflow, mincut, mincut_without_backedges, Cut, MAX_BRUTE_FORCE_NODES};

pub use counterexample::{composite_channel, counterexample_experiment, counterexample_row, scaling_slopes, CounterexampleRow, ScalingSlopes, DEFAULT_P_GRID};
pub use oracle::{oracle_exponent_1hop, OracleResult};
pub use sim::{fit_exponent, Cell, Decoder, HorizonSummary, MessageMode, SimConfig, SimResult, Simulator};
pub use stats::{fit_exponent_points, ols, wilson_interval, ExponentFit, LineFit, Z95};

/// Slack allowed on the bound inequalities checked by [`analyze`].
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeReport {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub two: f64,
    pub tilde: f64,
    /// `+inf` when the zero-rate search capped an infinite distance.
    pub zero_rate: f64,
    pub reversible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub messages: usize,
    pub edges: Vec<EdgeReport>,
    /// Maxflow with `M`-message tilde exponents (achievable).
    pub tilde_flow: f64,
    /// Maxflow with two-message exponents (converse).
    pub two_flow: f64,
    /// Maxflow with zero-rate exponents (achievable at rate zero).
    pub zero_rate_flow: f64,
    /// `two_flow / tilde_flow`; 1 when both are zero or both infinite.
    pub ratio: f64,
    pub all_reversible: bool,
    /// Minimum cut of the tilde-weighted network.
    pub mincut: Cut,
    /// Minimum cut with no back-edge, if one exists; `None` when the graph is
    /// too large for exhaustive search.
    pub backedge_free_mincut: Option<Option<Cut>>,
}

impl BoundsReport {
    pub fn flow(&self, weights: Weights) -> f64 {
        match weights {
            Weights::Tilde(_) => self.tilde_flow,
            Weights::Two => self.two_flow,
            Weights::ZeroRate => self.zero_rate_flow,
        }
    }
}

fn flow_ratio(two: f64, tilde: f64) -> f64 {
    if two == tilde || (two <= BOUND_SLACK && tilde <= BOUND_SLACK) {
        1.0
    } else {
        two / tilde
    }
}

/// Computes every bound for `M` messages and checks the inequalities between them.
pub fn analyze(g: &ChannelGraph, messages: usize) -> Result<BoundsReport> {
    let mut edges = Vec::with_capacity(g.edges.len());
    for (i, e) in g.edges.iter().enumerate() {
        let zr = g.edge_exponent(i, Weights::ZeroRate)?;
        edges.push(EdgeReport {
            id: e.id,
            tail: e.tail,
            head: e.head,
            two: g.edge_exponent(i, Weights::Two)?.value,
            tilde: g.edge_exponent(i, Weights::Tilde(messages))?.value,
            zero_rate: if zr.capped { f64::INFINITY } else { zr.value },
            reversible: is_pairwise_reversible(&e.channel, REVERSIBILITY_TOLERANCE).reversible,
        });
    }
    let tilde_net = weighted_network(g, Weights::Tilde(messages))?;
    let tilde_flow = maxflow(&tilde_net).total;
    let two_flow = maxflow(&weighted_network(g, Weights::Two)?).total;
    let zero_rate_flow = maxflow(&weighted_network(g, Weights::ZeroRate)?).total;
    let ratio = flow_ratio(two_flow, tilde_flow);
    let all_reversible = edges.iter().all(|e| e.reversible);
    let cut = mincut(&tilde_net);
    let backedge_free_mincut = if g.node_count <= MAX_BRUTE_FORCE_NODES {
        Some(mincut_without_backedges(&tilde_net)?)
    } else {
        None
    };

    if tilde_flow > two_flow + BOUND_SLACK {
        return Err(Error::InvariantViolation(format!(
            "tilde maxflow {tilde_flow} exceeds two-message maxflow {two_flow}"
        )));
    }
    let limit = if messages == 2 || all_reversible { 2.0 } else { 4.0 };
    if ratio > limit + BOUND_SLACK {
        return Err(Error::InvariantViolation(format!("maxflow ratio {ratio} exceeds {limit}")));
    }
    Ok(BoundsReport {
        messages,
        edges,
        tilde_flow,
        two_flow,
        zero_rate_flow,
        ratio,
        all_reversible,
        mincut: cut,
        backedge_free_mincut,
    })
}
