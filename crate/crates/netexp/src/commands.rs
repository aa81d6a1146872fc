//! Command implementations; each returns the text written to stdout.

use std::fmt::Write as _;

use netexp_core::analysis::{
    analyze, counterexample_experiment, fit_exponent, oracle_exponent_1hop, BoundsReport, Decoder, ExponentFit,
    MessageMode, SimConfig, SimResult, Simulator,
};
use netexp_core::graph::{weighted_network, ChannelGraph};
use netexp_core::netflow::{decompose, maxflow, Cut};
use netexp_core::protocol::{exact_block_distribution, Likelihood, NetworkPlan};
use netexp_core::Weights;
use serde::Serialize;
use serde_json::Value;

use crate::format::{fmt_num, json_num};
use crate::graphfile::{GraphFile, GraphFileError};
use crate::parallel::run_parallel;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] GraphFileError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] netexp_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) | Self::Usage(_) => 2,
            Self::Domain(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn load_graph(file: &GraphFile) -> CliResult<ChannelGraph> {
    Ok(file.to_graph()?)
}

#[derive(Serialize)]
struct EdgeJson {
    id: usize,
    from: String,
    to: String,
    two: Value,
    tilde: Value,
    zero_rate: Value,
    reversible: bool,
}

#[derive(Serialize)]
struct CutJson {
    source_side: Vec<String>,
    destination_side: Vec<String>,
    size: Value,
}

#[derive(Serialize)]
struct BackedgeFreeJson {
    /// `null` when the graph is too large to search.
    exists: Option<bool>,
    cut: Option<CutJson>,
}

#[derive(Serialize)]
struct ReportJson {
    messages: usize,
    weights: &'static str,
    maxflow: Value,
    tilde_flow: Value,
    two_flow: Value,
    zero_rate_flow: Value,
    ratio: Value,
    all_reversible: bool,
    edges: Vec<EdgeJson>,
    mincut: CutJson,
    backedge_free_mincut: BackedgeFreeJson,
}

fn cut_json(g: &ChannelGraph, c: &Cut) -> CutJson {
    let names = |v: &[usize]| v.iter().map(|&i| g.labels[i].clone()).collect();
    CutJson {
        source_side: names(&c.side_a),
        destination_side: names(&c.side_b),
        size: json_num(c.size),
    }
}

pub fn weights_name(w: Weights) -> &'static str {
    match w {
        Weights::Tilde(_) => "tilde",
        Weights::Two => "two",
        Weights::ZeroRate => "zero",
    }
}

fn report_json(g: &ChannelGraph, r: &BoundsReport, weights: Weights) -> ReportJson {
    ReportJson {
        messages: r.messages,
        weights: weights_name(weights),
        maxflow: json_num(r.flow(weights)),
        tilde_flow: json_num(r.tilde_flow),
        two_flow: json_num(r.two_flow),
        zero_rate_flow: json_num(r.zero_rate_flow),
        ratio: json_num(r.ratio),
        all_reversible: r.all_reversible,
        edges: r
            .edges
            .iter()
            .map(|e| EdgeJson {
                id: e.id,
                from: g.labels[e.tail].clone(),
                to: g.labels[e.head].clone(),
                two: json_num(e.two),
                tilde: json_num(e.tilde),
                zero_rate: json_num(e.zero_rate),
                reversible: e.reversible,
            })
            .collect(),
        mincut: cut_json(g, &r.mincut),
        backedge_free_mincut: match &r.backedge_free_mincut {
            None => BackedgeFreeJson { exists: None, cut: None },
            Some(c) => BackedgeFreeJson {
                exists: Some(c.is_some()),
                cut: c.as_ref().map(|c| cut_json(g, c)),
            },
        },
    }
}

/// Bound report as pretty JSON.
pub fn cmd_analyze(file: &GraphFile, messages: usize, weights: Weights) -> CliResult<String> {
    let g = load_graph(file)?;
    let report = analyze(&g, messages)?;
    let mut s = serde_json::to_string_pretty(&report_json(&g, &report, weights)).expect("report serializes");
    s.push('\n');
    Ok(s)
}

/// Options of the `simulate` command.
#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub messages: usize,
    pub block: usize,
    pub horizons: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub decoder: Decoder,
    pub mode: MessageMode,
    pub likelihood: Likelihood,
    pub split: Option<usize>,
    pub threads: Option<usize>,
}

pub const SIM_HEADER: &str = "n,message,errors,trials,p_hat,ci_lo,ci_hi";

/// Per-message rows, then one aggregate row per horizon labelled `worst` or `all`.
pub fn sim_csv(r: &SimResult) -> String {
    let mut out = String::new();
    out.push_str(SIM_HEADER);
    out.push('\n');
    for c in &r.cells {
        let (lo, hi) = c.interval();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.n,
            c.message + 1,
            c.errors,
            c.trials,
            fmt_num(c.p_hat()),
            fmt_num(lo),
            fmt_num(hi)
        );
    }
    let label = match r.mode {
        MessageMode::WorstCase => "worst",
        MessageMode::Uniform => "all",
    };
    for s in &r.summaries {
        let _ = writeln!(
            out,
            "{},{label},{},{},{},{},{}",
            s.n,
            s.errors,
            s.trials,
            fmt_num(s.p_hat),
            fmt_num(s.ci_lo),
            fmt_num(s.ci_hi)
        );
    }
    out
}

/// Runs the Monte Carlo estimate; returns the CSV and the fitted exponent when
/// enough horizons saw errors.
pub fn cmd_simulate(file: &GraphFile, a: &SimulateArgs) -> CliResult<(String, Option<ExponentFit>)> {
    let g = load_graph(file)?;
    let config = SimConfig {
        seed: a.seed,
        trials: a.trials,
        horizons: a.horizons.clone(),
        block: a.block,
        messages: a.messages,
        decoder: a.decoder,
        message_mode: a.mode,
        likelihood: a.likelihood,
        split: a.split,
    };
    let sim = Simulator::new(&g, config)?;
    log::info!(
        "{} path(s), window {} uses, minimum horizon {}",
        sim.plan().paths.len(),
        sim.plan().window(),
        sim.plan().min_horizon()
    );
    let result = run_parallel(&sim, a.threads)?;
    Ok((sim_csv(&result), fit_exponent(&result).ok()))
}

pub const COUNTEREXAMPLE_HEADER: &str = "p,min_db_q,maxflow_bound,maxflow_feedback_bound";

pub fn cmd_counterexample(p_grid: &[f64]) -> CliResult<String> {
    let rows = counterexample_experiment(p_grid)?;
    let mut out = String::new();
    out.push_str(COUNTEREXAMPLE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(r.p),
            fmt_num(r.min_db_q),
            fmt_num(r.maxflow_bound),
            fmt_num(r.maxflow_feedback_bound)
        );
    }
    Ok(out)
}

/// One line per flow path: `path <i>: <nodes joined by " -> "> value=<v> edges=<ids>`.
pub fn cmd_decompose(file: &GraphFile, weights: Weights) -> CliResult<String> {
    let g = load_graph(file)?;
    let net = weighted_network(&g, weights)?;
    let flow = maxflow(&net);
    let dec = decompose(&net, &flow);
    let mut out = String::new();
    for (i, p) in dec.paths.iter().enumerate() {
        let nodes: Vec<&str> = p.nodes.iter().map(|&v| g.labels[v].as_str()).collect();
        let ids: Vec<String> = p.edges.iter().map(|&e| net.edges[e].id.to_string()).collect();
        let _ = writeln!(
            out,
            "path {}: {} value={} edges={}",
            i + 1,
            nodes.join(" -> "),
            fmt_num(p.value),
            ids.join(",")
        );
    }
    if dec.discarded_circulation > 0.0 {
        let _ = writeln!(out, "circulation {}", fmt_num(dec.discarded_circulation));
    }
    Ok(out)
}

/// Exact destination-block statistics of every planned path, or with
/// `horizon`, the one-hop exact ML error of the permutation code.
pub fn cmd_oracle(
    file: &GraphFile,
    messages: usize,
    block: usize,
    likelihood: Likelihood,
    horizon: Option<usize>,
) -> CliResult<String> {
    let g = load_graph(file)?;
    let mut out = String::new();
    if let Some(n) = horizon {
        if g.edges.len() != 1 {
            return Err(CliError::Usage(format!(
                "--horizon needs a single-edge graph, this one has {} edges",
                g.edges.len()
            )));
        }
        let r = oracle_exponent_1hop(&g.edges[0].channel, messages, n)?;
        for (m, p) in r.per_message.iter().enumerate() {
            let _ = writeln!(out, "message {} p_err={}", m + 1, fmt_num(*p));
        }
        let _ = writeln!(out, "n={n} p_err={} exponent={}", fmt_num(r.error_probability), fmt_num(r.exponent));
        return Ok(out);
    }
    let plan = NetworkPlan::build(&g, messages, block, None, likelihood)?;
    for (i, p) in plan.paths.iter().enumerate() {
        let dist = exact_block_distribution(&p.spec)?;
        let nodes: Vec<&str> = p.nodes.iter().map(|&v| g.labels[v].as_str()).collect();
        let _ = writeln!(out, "path {}: {}", i + 1, nodes.join(" -> "));
        for a in 0..messages {
            for b in a + 1..messages {
                let _ = writeln!(out, "  d_B({},{})={}", a + 1, b + 1, fmt_num(dist.bhattacharyya(a, b)));
            }
        }
        for (m, e) in dist.ml_error_probabilities().iter().enumerate() {
            let _ = writeln!(out, "  ml_error({})={}", m + 1, fmt_num(*e));
        }
    }
    Ok(out)
}
