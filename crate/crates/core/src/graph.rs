//! Directed multigraphs whose edges are discrete memoryless channels.

use alloc::string::String;
use alloc::vec::Vec;

use crate::channel::Dmc;
use crate::error::{Error, Result};
use crate::exponent::{self, ExponentReport};
use crate::netflow::{NetEdge, Network};

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEdge {
    pub tail: usize,
    pub head: usize,
    pub channel: Dmc,
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGraph {
    pub node_count: usize,
    pub source: usize,
    pub destination: usize,
    /// Sorted by `id`; ids are unique.
    pub edges: Vec<ChannelEdge>,
    /// Display names, one per node.
    pub labels: Vec<String>,
}

/// Which exponent becomes the capacity of each edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    /// Bhattacharyya-based `M`-message exponent.
    Tilde(usize),
    /// Exact two-message exponent.
    Two,
    /// Zero-rate exponent.
    ZeroRate,
}

impl ChannelGraph {
    /// Validates and builds a graph; edges are reordered by id.
    pub fn new(
        node_count: usize,
        source: usize,
        destination: usize,
        mut edges: Vec<ChannelEdge>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if source >= node_count || destination >= node_count {
            return Err(Error::InvalidGraph("source or destination is not a node".into()));
        }
        if source == destination {
            return Err(Error::InvalidGraph("source and destination coincide".into()));
        }
        for e in &edges {
            if e.tail >= node_count || e.head >= node_count {
                return Err(Error::InvalidGraph(alloc::format!(
                    "edge {} has an endpoint outside 0..{node_count}",
                    e.id
                )));
            }
        }
        edges.sort_by_key(|e| e.id);
        if edges.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidGraph("duplicate edge id".into()));
        }
        let labels = match labels {
            Some(l) if l.len() != node_count => {
                return Err(Error::InvalidGraph("label count differs from node count".into()));
            }
            Some(l) => l,
            None => (1..=node_count).map(|i| alloc::format!("{i}")).collect(),
        };
        let graph = Self {
            node_count,
            source,
            destination,
            edges,
            labels,
        };
        if !graph.destination_reachable() {
            return Err(Error::InvalidGraph("no directed path from source to destination".into()));
        }
        Ok(graph)
    }

    fn destination_reachable(&self) -> bool {
        let mut seen = alloc::vec![false; self.node_count];
        seen[self.source] = true;
        let mut stack = alloc::vec![self.source];
        while let Some(v) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.tail == v) {
                if !seen[e.head] {
                    seen[e.head] = true;
                    stack.push(e.head);
                }
            }
        }
        seen[self.destination]
    }

    /// Exponent report for one edge under the given weighting.
    pub fn edge_exponent(&self, edge: usize, mode: Weights) -> Result<ExponentReport> {
        let ch = &self.edges[edge].channel;
        match mode {
            Weights::Tilde(m) => exponent::tilde_exponent(ch, m),
            Weights::Two => Ok(exponent::exponent_two(ch)),
            Weights::ZeroRate => exponent::zero_rate_exponent(ch),
        }
    }
}

/// Capacitated network with each edge's exponent as its capacity.
///
/// Zero-rate exponents computed with capped infinite distances are reported
/// as `+inf`, since an input pair with disjoint supports makes the true value
/// infinite.
pub fn weighted_network(g: &ChannelGraph, mode: Weights) -> Result<Network> {
    let mut edges = Vec::with_capacity(g.edges.len());
    for (i, e) in g.edges.iter().enumerate() {
        let report = g.edge_exponent(i, mode)?;
        let capacity = if report.capped { f64::INFINITY } else { report.value };
        edges.push(NetEdge {
            tail: e.tail,
            head: e.head,
            capacity,
            id: e.id,
        });
    }
    Network::new(g.node_count, g.source, g.destination, edges)
}

/// The four-node graph with a ternary symmetric edge 1→2, a BSC edge 3→4 and
/// noiseless ternary edges 1→3, 2→3, 2→4 (nodes 1..4 stored as 0..3).
pub fn counterexample_graph(p: f64) -> Result<ChannelGraph> {
    let id3 = Dmc::identity(3)?;
    let edges = alloc::vec![
        ChannelEdge { tail: 0, head: 1, channel: Dmc::ksym(3, p)?, id: 0 },
        ChannelEdge { tail: 0, head: 2, channel: id3.clone(), id: 1 },
        ChannelEdge { tail: 1, head: 2, channel: id3.clone(), id: 2 },
        ChannelEdge { tail: 1, head: 3, channel: id3, id: 3 },
        ChannelEdge { tail: 2, head: 3, channel: Dmc::bsc(p)?, id: 4 },
    ];
    ChannelGraph::new(4, 0, 3, edges, None)
}

/// A chain of `channels.len()` hops from node 0 to node `channels.len()`.
pub fn series_graph(channels: &[Dmc]) -> Result<ChannelGraph> {
    let edges = channels
        .iter()
        .enumerate()
        .map(|(i, c)| ChannelEdge {
            tail: i,
            head: i + 1,
            channel: c.clone(),
            id: i,
        })
        .collect();
    ChannelGraph::new(channels.len() + 1, 0, channels.len(), edges, None)
}
