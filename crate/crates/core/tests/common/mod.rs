#![allow(dead_code)]

use netexp_core::graph::{ChannelEdge, ChannelGraph};
use netexp_core::Dmc;
use proptest::prelude::*;

/// Row-stochastic matrix from raw weights; a few entries are zeroed so
/// supports differ between rows.
pub fn channel_from(inputs: usize, outputs: usize, raw: &[f64]) -> Dmc {
    let rows: Vec<Vec<f64>> = (0..inputs)
        .map(|x| {
            let mut row: Vec<f64> = (0..outputs)
                .map(|y| {
                    let w = raw[(x * outputs + y) % raw.len()];
                    if w < 0.15 { 0.0 } else { w }
                })
                .collect();
            if row.iter().all(|&w| w == 0.0) {
                row[x % outputs] = 1.0;
            }
            let s: f64 = row.iter().sum();
            row.iter().map(|w| w / s).collect()
        })
        .collect();
    Dmc::new(&rows).unwrap()
}

pub fn channel(max_in: usize, max_out: usize) -> impl Strategy<Value = Dmc> {
    (2..=max_in, 2..=max_out, prop::collection::vec(0.0f64..1.0, 36))
        .prop_map(|(i, o, raw)| channel_from(i, o, &raw))
}

/// Strictly positive distribution with optional zeros.
pub fn distribution(max_support: usize) -> impl Strategy<Value = Vec<f64>> {
    (1..=max_support, prop::collection::vec(0.0f64..1.0, 6)).prop_map(|(k, raw)| {
        let mut v: Vec<f64> = raw[..k].iter().map(|&w| if w < 0.1 { 0.0 } else { w }).collect();
        if v.iter().all(|&w| w == 0.0) {
            v[0] = 1.0;
        }
        let s: f64 = v.iter().sum();
        v.iter().map(|w| w / s).collect()
    })
}

/// `K`-input circulant channel `P(y|x) = f((y - x) mod K)` with `f(d) = f(-d)`;
/// such channels are pairwise reversible.
pub fn symmetric_channel() -> impl Strategy<Value = Dmc> {
    (2usize..=4, prop::collection::vec(0.05f64..1.0, 4)).prop_map(|(k, raw)| {
        let f: Vec<f64> = (0..k).map(|d| raw[d.min(k - d)]).collect();
        let s: f64 = f.iter().sum();
        let rows: Vec<Vec<f64>> = (0..k).map(|x| (0..k).map(|y| f[(y + k - x) % k] / s).collect()).collect();
        Dmc::new(&rows).unwrap()
    })
}

/// Random graph on up to `max_nodes` nodes containing the chain `0 → 1 → … → n-1`
/// plus extra edges in any direction.
pub fn graph_from(n: usize, extra: &[(usize, usize)], channels: Vec<Dmc>) -> ChannelGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    for &(a, b) in extra {
        let (a, b) = (a % n, b % n);
        if a != b {
            pairs.push((a, b));
        }
    }
    let edges = pairs
        .into_iter()
        .zip(channels.into_iter().cycle())
        .enumerate()
        .map(|(id, ((tail, head), channel))| ChannelEdge { tail, head, channel, id })
        .collect();
    ChannelGraph::new(n, 0, n - 1, edges, None).unwrap()
}

pub fn graph_with(ch: impl Strategy<Value = Dmc>) -> impl Strategy<Value = ChannelGraph> {
    (
        2usize..=5,
        prop::collection::vec((0usize..5, 0usize..5), 0..4),
        prop::collection::vec(ch, 1..=4),
    )
        .prop_map(|(n, extra, chans)| graph_from(n, &extra, chans))
}

/// Channel with every entry positive, so all divergences are finite.
pub fn full_channel(max_in: usize, max_out: usize) -> impl Strategy<Value = Dmc> {
    (2..=max_in, 2..=max_out, prop::collection::vec(0.05f64..1.0, 36)).prop_map(|(i, o, raw)| {
        let rows: Vec<Vec<f64>> = (0..i)
            .map(|x| {
                let row = &raw[x * o..(x + 1) * o];
                let s: f64 = row.iter().sum();
                row.iter().map(|w| w / s).collect()
            })
            .collect();
        Dmc::new(&rows).unwrap()
    })
}

pub fn reversible_channel() -> impl Strategy<Value = Dmc> {
    prop_oneof![
        symmetric_channel(),
        (0.01f64..0.49).prop_map(|p| Dmc::bsc(p).unwrap()),
        (0.01f64..0.99).prop_map(|e| Dmc::bec(e).unwrap()),
    ]
}
