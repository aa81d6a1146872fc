//! Capacitated digraphs: maxflow, mincuts, path decomposition and edge splitting.
//!
//! Capacities may be `+inf` (noiseless edges). Internally an infinite capacity
//! is replaced by a sentinel `1 + Σ finite capacities`, which no finite cut
//! can reach, so augmenting-path arithmetic stays finite.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Largest node count for the exhaustive cut searches.
pub const MAX_BRUTE_FORCE_NODES: usize = 20;
/// Residual capacities at or below this are treated as saturated.
pub const FLOW_EPS: f64 = 1e-12;
/// Cut sizes within this of the minimum count as ties.
pub const CUT_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct NetEdge {
    pub tail: usize,
    pub head: usize,
    /// Nonnegative; `f64::INFINITY` for noiseless edges.
    pub capacity: f64,
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub node_count: usize,
    pub source: usize,
    pub destination: usize,
    pub edges: Vec<NetEdge>,
}

/// Per-edge flow values, indexed like [`Network::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub values: Vec<f64>,
    /// Net out-flow of the source; `+inf` when an all-noiseless path exists.
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    /// Sorted; contains the source.
    pub side_a: Vec<usize>,
    /// Sorted; contains the destination.
    pub side_b: Vec<usize>,
    /// Sum of capacities of edges from A to B.
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowPath {
    pub nodes: Vec<usize>,
    /// Indices into [`Network::edges`], in path order.
    pub edges: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathDecomposition {
    pub paths: Vec<FlowPath>,
    /// Total per-edge flow left on cycles that touch no source-destination path.
    pub discarded_circulation: f64,
}

impl Network {
    pub fn new(node_count: usize, source: usize, destination: usize, edges: Vec<NetEdge>) -> Result<Self> {
        if source >= node_count || destination >= node_count {
            return Err(Error::InvalidGraph("terminal out of range".into()));
        }
        if source == destination {
            return Err(Error::InvalidGraph("source equals destination".into()));
        }
        for e in &edges {
            if e.tail >= node_count || e.head >= node_count {
                return Err(Error::InvalidGraph(alloc::format!("edge {} has an invalid endpoint", e.id)));
            }
            if !(e.capacity >= 0.0) {
                return Err(Error::InvalidGraph(alloc::format!("edge {} has negative capacity", e.id)));
            }
        }
        Ok(Self {
            node_count,
            source,
            destination,
            edges,
        })
    }

    /// Builds a network from `(tail, head, capacity)` triples, numbering edges in order.
    pub fn from_triples(node_count: usize, source: usize, destination: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        let edges = triples
            .iter()
            .enumerate()
            .map(|(id, &(tail, head, capacity))| NetEdge { tail, head, capacity, id })
            .collect();
        Self::new(node_count, source, destination, edges)
    }

    pub fn finite_capacity_sum(&self) -> f64 {
        self.edges.iter().map(|e| e.capacity).filter(|c| c.is_finite()).sum()
    }

    fn sentinel(&self) -> f64 {
        1.0 + self.finite_capacity_sum()
    }

    /// Size of the cut with source side `in_a`, counting only A→B edges.
    pub fn cut_size(&self, in_a: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| in_a[e.tail] && !in_a[e.head])
            .map(|e| e.capacity)
            .sum()
    }

    /// Number of positive-capacity edges from B back to A.
    pub fn back_edges(&self, in_a: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| !in_a[e.tail] && in_a[e.head] && e.capacity > 0.0)
            .count()
    }

    fn cut_from_mask(&self, in_a: &[bool]) -> Cut {
        let side_a = (0..self.node_count).filter(|&v| in_a[v]).collect();
        let side_b = (0..self.node_count).filter(|&v| !in_a[v]).collect();
        Cut {
            side_a,
            side_b,
            size: self.cut_size(in_a),
        }
    }
}

/// Residual graph in arc-pair form: arc `2i` is edge `i` forward, `2i+1` its reverse.
struct Residual {
    head: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn build(net: &Network, sentinel: f64) -> Self {
        let mut head = Vec::with_capacity(2 * net.edges.len());
        let mut cap = Vec::with_capacity(2 * net.edges.len());
        let mut adj = vec![Vec::new(); net.node_count];
        for (i, e) in net.edges.iter().enumerate() {
            let c = if e.capacity.is_finite() { e.capacity } else { sentinel };
            head.push(e.head);
            cap.push(c);
            head.push(e.tail);
            cap.push(0.0);
            adj[e.tail].push(2 * i);
            adj[e.head].push(2 * i + 1);
        }
        Self { head, cap, adj }
    }

    fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let w = self.head[a];
                if !seen[w] && self.cap[a] > FLOW_EPS {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

fn run_maxflow(net: &Network) -> (Residual, Flow) {
    let sentinel = net.sentinel();
    let mut res = Residual::build(net, sentinel);
    let n = net.node_count;
    let mut total = 0.0;
    loop {
        // BFS for a shortest augmenting path
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(v) = queue.pop_front() {
            if v == net.destination {
                break;
            }
            for &a in &res.adj[v] {
                let w = res.head[a];
                if !seen[w] && res.cap[a] > FLOW_EPS {
                    seen[w] = true;
                    pred[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
        if !seen[net.destination] {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = net.destination;
        while let Some(a) = pred[v] {
            bottleneck = bottleneck.min(res.cap[a]);
            v = res.head[a ^ 1];
        }
        let mut v = net.destination;
        while let Some(a) = pred[v] {
            res.cap[a] -= bottleneck;
            res.cap[a ^ 1] += bottleneck;
            v = res.head[a ^ 1];
        }
        total += bottleneck;
    }
    let values: Vec<f64> = (0..net.edges.len()).map(|i| res.cap[2 * i + 1]).collect();
    let total = if total > net.finite_capacity_sum() + 0.5 {
        f64::INFINITY
    } else {
        total
    };
    (res, Flow { values, total })
}

/// Maximum source-destination flow by shortest augmenting paths.
pub fn maxflow(net: &Network) -> Flow {
    run_maxflow(net).1
}

/// Minimum cut read off the final residual graph: A is the set reachable from the source.
pub fn mincut(net: &Network) -> Cut {
    let (res, _) = run_maxflow(net);
    net.cut_from_mask(&res.reachable(net.source))
}

fn check_brute_force_size(net: &Network) -> Result<()> {
    if net.node_count > MAX_BRUTE_FORCE_NODES {
        return Err(Error::GraphTooLarge {
            nodes: net.node_count,
            max: MAX_BRUTE_FORCE_NODES,
        });
    }
    Ok(())
}

/// Calls `visit` with the A-side membership of every source/destination-separating partition.
fn for_each_partition(net: &Network, mut visit: impl FnMut(&[bool])) {
    let free: Vec<usize> = (0..net.node_count)
        .filter(|&v| v != net.source && v != net.destination)
        .collect();
    let mut in_a = vec![false; net.node_count];
    in_a[net.source] = true;
    for mask in 0u64..(1u64 << free.len()) {
        for (bit, &v) in free.iter().enumerate() {
            in_a[v] = mask >> bit & 1 == 1;
        }
        visit(&in_a);
    }
}

/// Exhaustive minimum cut over all `2^(n-2)` partitions.
pub fn brute_force_mincut(net: &Network) -> Result<Cut> {
    check_brute_force_size(net)?;
    let mut best: Option<(f64, Vec<bool>)> = None;
    for_each_partition(net, |in_a| {
        let size = net.cut_size(in_a);
        if best.as_ref().is_none_or(|(b, _)| size < *b) {
            best = Some((size, in_a.to_vec()));
        }
    });
    let (_, mask) = best.expect("at least one partition");
    Ok(net.cut_from_mask(&mask))
}

fn sizes_tie(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a == b
    } else {
        math::abs(a - b) <= CUT_TIE_TOLERANCE
    }
}

/// A minimum cut with no positive-capacity edge from B back to A, if one exists.
///
/// Among tied minimum cuts, fewer back-edges win, then the lexicographically
/// smaller A side.
pub fn mincut_without_backedges(net: &Network) -> Result<Option<Cut>> {
    check_brute_force_size(net)?;
    let mut min = f64::INFINITY;
    for_each_partition(net, |in_a| min = min.min(net.cut_size(in_a)));

    let mut best: Option<(usize, Vec<usize>, Vec<bool>)> = None;
    for_each_partition(net, |in_a| {
        if !sizes_tie(net.cut_size(in_a), min) {
            return;
        }
        let back = net.back_edges(in_a);
        let side: Vec<usize> = (0..net.node_count).filter(|&v| in_a[v]).collect();
        let better = match &best {
            None => true,
            Some((b, s, _)) => back < *b || (back == *b && side < *s),
        };
        if better {
            best = Some((back, side, in_a.to_vec()));
        }
    });
    Ok(best.and_then(|(back, _, mask)| (back == 0).then(|| net.cut_from_mask(&mask))))
}

/// Splits a flow into simple source-destination paths.
///
/// Each round takes the simple path whose edge-id sequence is lexicographically
/// smallest in the subgraph of edges still carrying flow, assigns it the
/// smallest remaining edge flow along it, and subtracts. Whatever remains when
/// no path is left lies on cycles and is reported as `discarded_circulation`.
pub fn decompose(net: &Network, flow: &Flow) -> PathDecomposition {
    let mut remaining = flow.values.clone();
    let mut order: Vec<usize> = (0..net.edges.len()).collect();
    order.sort_by_key(|&i| net.edges[i].id);
    let mut out_edges = vec![Vec::new(); net.node_count];
    for &i in &order {
        out_edges[net.edges[i].tail].push(i);
    }

    let mut paths = Vec::new();
    loop {
        let alive = |i: usize, rem: &[f64]| rem[i] > FLOW_EPS;
        // nodes that can still reach the destination through positive-flow edges
        let mut live = vec![false; net.node_count];
        live[net.destination] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for (i, e) in net.edges.iter().enumerate() {
                if alive(i, &remaining) && live[e.head] && !live[e.tail] {
                    live[e.tail] = true;
                    changed = true;
                }
            }
        }
        if !live[net.source] {
            break;
        }

        let mut on_path = vec![false; net.node_count];
        let mut path_edges: Vec<usize> = Vec::new();
        let found = dfs_path(
            net,
            &out_edges,
            &remaining,
            &live,
            net.source,
            &mut on_path,
            &mut path_edges,
        );
        if !found {
            break;
        }
        let value = path_edges
            .iter()
            .map(|&i| remaining[i])
            .fold(f64::INFINITY, f64::min);
        for &i in &path_edges {
            remaining[i] -= value;
            if remaining[i] <= FLOW_EPS {
                remaining[i] = 0.0;
            }
        }
        let mut nodes = vec![net.source];
        nodes.extend(path_edges.iter().map(|&i| net.edges[i].head));
        paths.push(FlowPath {
            nodes,
            edges: path_edges,
            value,
        });
    }
    let discarded_circulation = remaining.iter().filter(|&&r| r > FLOW_EPS).sum();
    PathDecomposition {
        paths,
        discarded_circulation,
    }
}

fn dfs_path(
    net: &Network,
    out_edges: &[Vec<usize>],
    remaining: &[f64],
    live: &[bool],
    v: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
) -> bool {
    if v == net.destination {
        return true;
    }
    on_path[v] = true;
    for &i in &out_edges[v] {
        let w = net.edges[i].head;
        if remaining[i] <= FLOW_EPS || on_path[w] || !live[w] {
            continue;
        }
        path.push(i);
        if dfs_path(net, out_edges, remaining, live, w, on_path, path) {
            return true;
        }
        path.pop();
    }
    on_path[v] = false;
    false
}

/// Result of [`split_edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct SplitNetwork {
    /// Edges of the input network used by no path keep capacity `(B+k)·c_e`;
    /// each used edge becomes one parallel edge per path, with capacity `B_i·c_e`.
    pub network: Network,
    /// `sub_blocks[i][j]`: `B_i` for path `i` on its `j`-th edge.
    pub sub_blocks: Vec<Vec<usize>>,
    /// `path_edges[i][j]`: index in `network.edges` of path `i`'s private copy of its `j`-th edge.
    pub path_edges: Vec<Vec<usize>>,
}

/// Replaces every edge shared by several paths with private parallel edges.
///
/// Path `i` gets `B_i = ⌈f_i / Σ_{j∈S_e} f_j · B⌉` of every `B + k` uses of
/// edge `e`, where `S_e` is the set of paths through `e`; the construction
/// guarantees `Σ_{i∈S_e} B_i ≤ B + k` and `B_i·c_e ≥ B·f_i` when `f_i ≤ c_e`
/// along the path.
pub fn split_edges(net: &Network, dec: &PathDecomposition, b: usize) -> Result<SplitNetwork> {
    let k = dec.paths.len();
    if b < k || b == 0 {
        return Err(Error::BTooSmall { b, paths: k });
    }
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); net.edges.len()];
    for (i, p) in dec.paths.iter().enumerate() {
        for &e in &p.edges {
            users[e].push(i);
        }
    }
    let mut sub_blocks: Vec<Vec<usize>> = dec.paths.iter().map(|p| vec![0; p.edges.len()]).collect();
    let mut path_edges: Vec<Vec<usize>> = dec.paths.iter().map(|p| vec![0; p.edges.len()]).collect();
    let mut edges = Vec::new();
    let mut next_id = 0;
    for (e, edge) in net.edges.iter().enumerate() {
        if users[e].is_empty() {
            edges.push(NetEdge {
                capacity: (b + k) as f64 * edge.capacity,
                id: next_id,
                ..edge.clone()
            });
            next_id += 1;
            continue;
        }
        let share: f64 = users[e].iter().map(|&i| dec.paths[i].value).sum();
        let mut used = 0usize;
        for &i in &users[e] {
            let frac = dec.paths[i].value / share * b as f64;
            let bi = (math::ceil(frac - 1e-9).max(1.0)) as usize;
            used += bi;
            let pos = dec.paths[i].edges.iter().position(|&x| x == e).expect("path uses edge");
            sub_blocks[i][pos] = bi;
            path_edges[i][pos] = edges.len();
            edges.push(NetEdge {
                tail: edge.tail,
                head: edge.head,
                capacity: bi as f64 * edge.capacity,
                id: next_id,
            });
            next_id += 1;
        }
        if used > b + k {
            return Err(Error::InvariantViolation(alloc::format!(
                "edge {} allocates {used} > B + k = {}",
                edge.id,
                b + k
            )));
        }
    }
    Ok(SplitNetwork {
        network: Network {
            node_count: net.node_count,
            source: net.source,
            destination: net.destination,
            edges,
        },
        sub_blocks,
        path_edges,
    })
}
