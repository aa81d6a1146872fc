//! Three-message example where a relay scheme beats the maxflow of one-hop exponents.
//!
//! On the four-node graph of [`counterexample_graph`], one transmission sends
//! `m` over the ternary edge 1→2 and noiselessly to node 3; node 2 forwards
//! what it received to nodes 3 and 4; node 3 sends a BSC bit to node 4 that
//! flags disagreement. Node 4 sees `(a, b)`: node 2's symbol and the flag.

use alloc::vec::Vec;

use crate::channel::Dmc;
use crate::divergence::bhattacharyya;
use crate::error::{Error, Result};
use crate::exponent::{bsc_feedback_exponent_m3, exponent_two};
use crate::graph::{counterexample_graph, weighted_network, Weights};
use crate::math;
use crate::netflow::maxflow;

use super::stats::{ols, LineFit};

/// Default grid `1e-2, 1e-3, ..., 1e-6`.
pub const DEFAULT_P_GRID: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0 / 3.0) {
        return Err(Error::ParameterOutOfRange { name: "p", value: p });
    }
    Ok(())
}

/// End-to-end channel of one transmission: 3 inputs, outputs `(a, b)` at index `a + 3b`.
pub fn composite_channel(p: f64) -> Result<Dmc> {
    check_p(p)?;
    let q = 1.0 - p;
    let keep = 1.0 - 2.0 * p;
    let rows: Vec<Vec<f64>> = (0..3)
        .map(|m| {
            let mut row = alloc::vec![0.0; 6];
            for a in 0..3 {
                let (flag0, flag1) = if a == m { (keep * q, keep * p) } else { (p * p, p * q) };
                row[a] = flag0;
                row[a + 3] = flag1;
            }
            row
        })
        .collect();
    Ok(Dmc::new(&rows)?.with_label(alloc::format!("composite({p})")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleRow {
    pub p: f64,
    /// Smallest pairwise Bhattacharyya distance of the composite channel.
    pub min_db_q: f64,
    /// Maxflow with three-message Bhattacharyya exponents as capacities.
    pub maxflow_bound: f64,
    /// Maxflow with the ternary edge at its two-message exponent and the BSC
    /// at its three-message feedback exponent.
    pub maxflow_feedback_bound: f64,
}

pub fn counterexample_row(p: f64) -> Result<CounterexampleRow> {
    let q = composite_channel(p)?;
    let mut min_db = f64::INFINITY;
    for a in 0..3 {
        for b in a + 1..3 {
            min_db = min_db.min(bhattacharyya(&q, a, b)?);
        }
    }
    let g = counterexample_graph(p)?;
    let tilde_net = weighted_network(&g, Weights::Tilde(3))?;
    let maxflow_bound = maxflow(&tilde_net).total;

    // edge 0 is the ternary channel, edge 4 the BSC; the rest are noiseless
    let mut fb_net = tilde_net;
    fb_net.edges[0].capacity = exponent_two(&g.edges[0].channel).value;
    fb_net.edges[4].capacity = bsc_feedback_exponent_m3(p)?;
    let maxflow_feedback_bound = maxflow(&fb_net).total;
    Ok(CounterexampleRow {
        p,
        min_db_q: min_db,
        maxflow_bound,
        maxflow_feedback_bound,
    })
}

pub fn counterexample_experiment(p_grid: &[f64]) -> Result<Vec<CounterexampleRow>> {
    if p_grid.is_empty() {
        return Err(Error::InsufficientData { needed: 1, found: 0 });
    }
    for &p in p_grid {
        check_p(p)?;
    }
    p_grid.iter().map(|&p| counterexample_row(p)).collect()
}

/// Slopes of each column against `ln(1/p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSlopes {
    pub min_db_q: LineFit,
    pub maxflow_bound: LineFit,
    pub maxflow_feedback_bound: LineFit,
}

pub fn scaling_slopes(rows: &[CounterexampleRow]) -> Result<ScalingSlopes> {
    let xs: Vec<f64> = rows.iter().map(|r| -math::ln(r.p)).collect();
    let col = |f: fn(&CounterexampleRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Ok(ScalingSlopes {
        min_db_q: ols(&xs, &col(|r| r.min_db_q))?,
        maxflow_bound: ols(&xs, &col(|r| r.maxflow_bound))?,
        maxflow_feedback_bound: ols(&xs, &col(|r| r.maxflow_feedback_bound))?,
    })
}
