//! Acceptance criteria, one pass/fail line each.
//!
//! The report goes to stderr on every run. Criteria listed in [`KNOWN_RED`]
//! are reported as failures and the test asserts that they still fail, so a
//! silent change in either direction is caught.

use std::io::Write as _;
use std::time::{Duration, Instant};

use netexp_core::analysis::{
    analyze, counterexample_experiment, fit_exponent, scaling_slopes, Decoder, MessageMode, SimConfig, Simulator,
    DEFAULT_P_GRID,
};
use netexp_core::divergence::{bhattacharyya_logs, chernoff_at, is_pairwise_reversible, REVERSIBILITY_TOLERANCE};
use netexp_core::exponent::{exponent_two, multiset_count, tilde_exponent, zero_rate_exponent};
use netexp_core::graph::{series_graph, ChannelEdge, ChannelGraph};
use netexp_core::netflow::{brute_force_mincut, decompose, maxflow, Network};
use netexp_core::protocol::{
    decode_ml_exact, exact_block_distribution, verify_transition_bound, Likelihood, Scratch, SeriesSpec,
};
use netexp_core::Dmc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail, with the reason recorded in the decisions notes.
const KNOWN_RED: &[(u32, &str)] = &[(
    2,
    "quoted 0.40701 differs from -ln(2*sqrt(0.08)+0.1) = 0.406938 by 7e-5, beyond the 1e-5 tolerance",
)];

/// Fitted exponent of the benchmark simulation at its first audited run.
const GOLDEN_FIT: f64 = 0.3123;

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn run(id: u32, title: &'static str, budget_secs: u64, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    let (mut pass, mut detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > budget {
        pass = false;
        detail = format!("{detail}; exceeded runtime budget");
    }
    Outcome {
        id,
        title,
        pass,
        detail,
        elapsed,
        budget,
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

// ---------------------------------------------------------------------------
// random instances

fn random_row(rng: &mut ChaCha8Rng, len: usize, zero_prob: f64) -> Vec<f64> {
    let mut row: Vec<f64> = (0..len)
        .map(|_| if rng.random::<f64>() < zero_prob { 0.0 } else { rng.random_range(0.01..1.0) })
        .collect();
    if row.iter().all(|&w| w == 0.0) {
        row[rng.random_range(0..len)] = 1.0;
    }
    let s: f64 = row.iter().sum();
    row.iter().map(|w| w / s).collect()
}

fn random_channel(rng: &mut ChaCha8Rng, max_in: usize, max_out: usize, zero_prob: f64) -> Dmc {
    let i = rng.random_range(2..=max_in);
    let o = rng.random_range(2..=max_out);
    let rows: Vec<Vec<f64>> = (0..i).map(|_| random_row(rng, o, zero_prob)).collect();
    Dmc::new(&rows).unwrap()
}

/// Circulant channel with a symmetric kernel, or a BSC / BEC.
fn random_reversible(rng: &mut ChaCha8Rng) -> Dmc {
    match rng.random_range(0..3) {
        0 => Dmc::bsc(rng.random_range(0.01..0.49)).unwrap(),
        1 => Dmc::bec(rng.random_range(0.01..0.99)).unwrap(),
        _ => {
            let k = rng.random_range(2..=4usize);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
            let f: Vec<f64> = (0..k).map(|d| raw[d.min(k - d)]).collect();
            let s: f64 = f.iter().sum();
            let rows: Vec<Vec<f64>> = (0..k).map(|x| (0..k).map(|y| f[(y + k - x) % k] / s).collect()).collect();
            Dmc::new(&rows).unwrap()
        }
    }
}

fn random_graph(rng: &mut ChaCha8Rng, mut channel: impl FnMut(&mut ChaCha8Rng) -> Dmc) -> ChannelGraph {
    let n = rng.random_range(2..=5usize);
    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    for _ in 0..rng.random_range(0..4) {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            pairs.push((a, b));
        }
    }
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(id, (tail, head))| ChannelEdge {
            tail,
            head,
            channel: channel(rng),
            id,
        })
        .collect();
    ChannelGraph::new(n, 0, n - 1, edges, None).unwrap()
}

fn random_network(rng: &mut ChaCha8Rng) -> Network {
    let n = rng.random_range(2..=8usize);
    let m = rng.random_range(0..=14usize);
    let mut triples = Vec::new();
    while triples.len() < m {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            triples.push((a, b, rng.random::<f64>()));
        }
    }
    Network::from_triples(n, 0, n - 1, &triples).unwrap()
}

// ---------------------------------------------------------------------------
// criteria

fn c1_counterexample() -> Result<String, String> {
    let grid = [1e-3, 1e-4, 1e-5, 1e-6];
    let rows = counterexample_experiment(&grid).map_err(|e| e.to_string())?;
    let s = scaling_slopes(&rows).map_err(|e| e.to_string())?;
    check((s.min_db_q.slope - 1.0).abs() <= 0.02, || format!("min d_B slope {:.5}", s.min_db_q.slope))?;
    check((s.maxflow_bound.slope - 5.0 / 6.0).abs() <= 0.02, || {
        format!("maxflow slope {:.5}", s.maxflow_bound.slope)
    })?;
    let mut dense: Vec<f64> = DEFAULT_P_GRID.to_vec();
    dense.extend([5e-3, 2e-3, 5e-4, 2e-4, 5e-5]);
    for r in counterexample_experiment(&dense).map_err(|e| e.to_string())? {
        check(r.min_db_q > r.maxflow_bound, || format!("p={}: {} <= {}", r.p, r.min_db_q, r.maxflow_bound))?;
        check(r.min_db_q > r.maxflow_feedback_bound, || {
            format!("p={}: {} <= feedback {}", r.p, r.min_db_q, r.maxflow_feedback_bound)
        })?;
    }
    Ok(format!(
        "slopes {:.4} and {:.4}; gap holds at {} values of p <= 0.01",
        s.min_db_q.slope,
        s.maxflow_bound.slope,
        dense.len()
    ))
}

fn c2_closed_forms() -> Result<String, String> {
    let two_bsc = exponent_two(&Dmc::bsc(0.1).unwrap()).value;
    let tilde_bsc = tilde_exponent(&Dmc::bsc(0.1).unwrap(), 3).unwrap().value;
    let two_ksym = exponent_two(&Dmc::ksym(3, 0.1).unwrap()).value;
    let detail = format!("{two_bsc:.7}, {tilde_bsc:.7}, {two_ksym:.7}");
    check((two_bsc - 0.510_825_6).abs() <= 1e-6, || format!("{detail}: exponent_two(bsc) off"))?;
    check((tilde_bsc - 0.340_550).abs() <= 1e-6, || format!("{detail}: tilde(bsc, 3) off"))?;
    check((two_ksym - 0.407_01).abs() <= 1e-5, || {
        format!("{detail}: exponent_two(ksym(3,0.1)) = {two_ksym:.6}, target 0.40701 +- 1e-5")
    })?;
    Ok(detail)
}

fn c3_duality() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_paths = 0;
    for t in 0..500 {
        let net = random_network(&mut rng);
        let flow = maxflow(&net);
        let cut = brute_force_mincut(&net).map_err(|e| e.to_string())?;
        check((flow.total - cut.size).abs() <= 1e-9, || format!("network {t}: {} vs {}", flow.total, cut.size))?;
        let dec = decompose(&net, &flow);
        check(dec.paths.len() <= net.edges.len(), || format!("network {t}: too many paths"))?;
        let mut rebuilt = vec![0.0; net.edges.len()];
        for p in &dec.paths {
            for &e in &p.edges {
                rebuilt[e] += p.value;
            }
        }
        for (e, (r, f)) in rebuilt.iter().zip(&flow.values).enumerate() {
            check((r - f).abs() <= 1e-9, || format!("network {t} edge {e}: rebuilt {r} vs {f}"))?;
        }
        max_paths = max_paths.max(dec.paths.len());
    }
    Ok(format!("500 networks, up to {max_paths} paths"))
}

fn c4_sandwich() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_ratio: f64 = 0.0;
    for t in 0..200 {
        let g = random_graph(&mut rng, |r| random_channel(r, 3, 3, 0.15));
        let m = rng.random_range(2..=4usize);
        let r = analyze(&g, m).map_err(|e| format!("graph {t}: {e}"))?;
        check(r.tilde_flow <= r.two_flow + 1e-9, || format!("graph {t}: tilde above two"))?;
        check(r.two_flow <= 4.0 * r.tilde_flow + 1e-9, || format!("graph {t}: ratio {}", r.ratio))?;
        if m == 2 || r.all_reversible {
            check(r.two_flow <= 2.0 * r.tilde_flow + 1e-9, || format!("graph {t}: ratio {} (factor 2)", r.ratio))?;
        }
        if r.ratio.is_finite() {
            worst_ratio = worst_ratio.max(r.ratio);
        }
    }
    for t in 0..50 {
        let g = random_graph(&mut rng, random_reversible);
        let m = rng.random_range(2..=4usize);
        let r = analyze(&g, m).map_err(|e| format!("reversible graph {t}: {e}"))?;
        check(r.all_reversible && r.two_flow <= 2.0 * r.tilde_flow + 1e-9, || {
            format!("reversible graph {t}: ratio {}", r.ratio)
        })?;
    }
    for t in 0..50 {
        let g = random_graph(&mut rng, |r| Dmc::ksym(r.random_range(3..=5), r.random_range(0.01..0.2)).unwrap());
        let m = rng.random_range(2..=3usize);
        let r = analyze(&g, m).map_err(|e| format!("ksym graph {t}: {e}"))?;
        check((r.tilde_flow - r.two_flow).abs() <= 1e-9, || {
            format!("ksym graph {t}: {} vs {}", r.tilde_flow, r.two_flow)
        })?;
    }
    Ok(format!("200 general, 50 reversible, 50 ksym graphs; largest ratio {worst_ratio:.4}"))
}

fn c5_zero_rate() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..100 {
        let p = random_channel(&mut rng, 4, 4, 0.15);
        let m = rng.random_range(2..=4usize);
        let tilde = tilde_exponent(&p, m).map_err(|e| e.to_string())?.value;
        let zr = zero_rate_exponent(&p).map_err(|e| e.to_string())?;
        // a capped value stands for an infinite exponent
        let e0 = if zr.capped { f64::INFINITY } else { zr.value };
        let lower = (m as f64 - 1.0) / m as f64 * tilde;
        check(tilde >= e0 - 1e-8 || tilde == e0, || format!("channel {t}: tilde {tilde} < E(0) {e0}"))?;
        check(e0 >= lower - 1e-8 || e0 == lower, || format!("channel {t}: E(0) {e0} < {lower}"))?;
    }
    Ok("100 channels, M in {2,3,4}".into())
}

fn c6_transition() -> Result<String, String> {
    let b = Dmc::bsc(0.1).unwrap();
    let mut details = Vec::new();
    for block in [2, 4, 6] {
        let spec = SeriesSpec::reduced(&[b.clone(), b.clone()], 2, block)
            .and_then(|s| s.with_likelihood(Likelihood::Exact))
            .map_err(|e| e.to_string())?;
        let r = verify_transition_bound(&spec).map_err(|e| e.to_string())?;
        check(r.holds(), || {
            format!(
                "B={block}: slack {} / {} at {:?}",
                r.min_transition_slack, r.min_chernoff_slack, r.tightest_transition
            )
        })?;
        details.push(format!(
            "B={block} slack {:.3}/{:.3}",
            r.min_transition_slack.max(0.0),
            r.min_chernoff_slack
        ));
    }
    Ok(details.join(", "))
}

fn tiny_spec() -> SeriesSpec {
    SeriesSpec::reduced(&[Dmc::bsc(0.1).unwrap(), Dmc::bsc(0.1).unwrap()], 2, 2).unwrap()
}

fn c7_monte_carlo() -> Result<String, String> {
    let spec = tiny_spec();
    let dist = exact_block_distribution(&spec).map_err(|e| e.to_string())?;
    let exact_err = dist.ml_error_probabilities();
    let trials = 1_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut scratch = Scratch::default();
    let dists = vec![dist.clone()];
    let mut notes = Vec::new();
    for m in 0..2 {
        let mut counts = vec![0u64; dist.log_probs[m].len()];
        let mut errors = 0u64;
        for _ in 0..trials {
            let y = spec.final_block(m, &mut rng, &mut scratch).to_vec();
            counts[dist.block_index(&y)] += 1;
            if decode_ml_exact(&[vec![y]], &dists).map_err(|e| e.to_string())? != m {
                errors += 1;
            }
        }
        let tv: f64 = counts
            .iter()
            .zip(&dist.log_probs[m])
            .map(|(&c, &lp)| (c as f64 / trials as f64 - lp.exp()).abs())
            .sum::<f64>()
            / 2.0;
        check(tv <= 5e-3, || format!("message {}: TV {tv:.2e}", m + 1))?;
        let p = exact_err[m];
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let p_hat = errors as f64 / trials as f64;
        check((p_hat - p).abs() <= 3.0 * sigma, || {
            format!("message {}: error {p_hat} vs exact {p} (sigma {sigma:.2e})", m + 1)
        })?;
        notes.push(format!("m={} TV {tv:.1e}, error {p_hat:.5} vs {p:.5}", m + 1));
    }
    Ok(notes.join("; "))
}

fn c8_substitute(others_green: bool) -> Result<String, String> {
    let b = Dmc::bsc(0.1).unwrap();
    let mut prev = f64::NEG_INFINITY;
    let mut dbs = Vec::new();
    for block in [2, 4, 6] {
        let spec = SeriesSpec::reduced(&[b.clone(), b.clone()], 2, block).map_err(|e| e.to_string())?;
        let d = exact_block_distribution(&spec).map_err(|e| e.to_string())?.bhattacharyya(0, 1);
        check(d > prev, || format!("d_B not increasing at B={block}: {d} <= {prev}"))?;
        prev = d;
        dbs.push(format!("{d:.4}"));
    }

    let g = series_graph(&[Dmc::bsc(0.05).unwrap(), Dmc::bsc(0.05).unwrap()]).unwrap();
    let config = SimConfig {
        seed: 7,
        trials: 100_000,
        horizons: vec![12, 16, 20, 24],
        block: 2,
        messages: 2,
        decoder: Decoder::Heuristic,
        message_mode: MessageMode::WorstCase,
        likelihood: Likelihood::Uniform,
        split: None,
    };
    let sim = Simulator::new(&g, config).map_err(|e| e.to_string())?;
    let result = netexp::parallel::run_parallel(&sim, None).map_err(|e| e.to_string())?;
    let fit = fit_exponent(&result).map_err(|e| e.to_string())?;
    check(fit.slope > 0.0, || format!("fitted exponent {}", fit.slope))?;
    check((0.5 * GOLDEN_FIT..=1.5 * GOLDEN_FIT).contains(&fit.slope), || {
        format!("fitted exponent {} strays from recorded {GOLDEN_FIT}", fit.slope)
    })?;
    for w in result.summaries.windows(2) {
        let sd = |s: &netexp_core::analysis::HorizonSummary| (s.p_hat * (1.0 - s.p_hat) / s.trials as f64).sqrt();
        let slack = 2.0 * (sd(&w[0]).powi(2) + sd(&w[1]).powi(2)).sqrt();
        check(w[1].p_hat <= w[0].p_hat + slack, || {
            format!("p_err rises from n={} to n={}", w[0].n, w[1].n)
        })?;
    }
    check(others_green, || "an invariant criterion (3-7, 9) failed".into())?;
    Ok(format!(
        "d_B over B=2,4,6: {}; fitted exponent {:.4} +- {:.4}",
        dbs.join(" < "),
        fit.slope,
        fit.stderr
    ))
}

fn c9_inequalities() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ln = |v: &[f64]| v.iter().map(|x| x.ln()).collect::<Vec<_>>();
    // likelihood-ratio test bound
    for t in 0..200 {
        let k = rng.random_range(1..=6usize);
        let p = random_row(&mut rng, k, 0.15);
        let q = random_row(&mut rng, k, 0.15);
        let db = bhattacharyya_logs(&ln(&p), &ln(&q));
        for l0 in [0.1f64, 1.0, 10.0] {
            let pr: f64 = (0..k).filter(|&x| p[x] > 0.0 && q[x] > 0.0 && p[x] / q[x] <= l0).map(|x| p[x]).sum();
            if pr > 0.0 {
                check(-pr.ln() >= db - 0.5 * l0.ln() - 1e-12, || format!("LRT pair {t}, L0={l0}"))?;
            }
        }
    }
    // composite channel bound
    for t in 0..100 {
        let p1 = random_channel(&mut rng, 3, 3, 0.15);
        let mid = p1.output_size();
        let rows: Vec<Vec<f64>> = {
            let o = rng.random_range(2..=3);
            (0..mid).map(|_| random_row(&mut rng, o, 0.15)).collect()
        };
        let p2 = Dmc::new(&rows).unwrap();
        let s = rng.random_range(0.01..0.99);
        let q = p1.compose(&p2).unwrap();
        for x in 0..p1.input_size() {
            for x2 in 0..p1.input_size() {
                let lhs = chernoff_at(&q, x, x2, s).unwrap();
                let mut rhs = f64::INFINITY;
                for y in 0..mid {
                    for y2 in 0..mid {
                        let (a, b) = (p1.prob(x, y), p1.prob(x2, y2));
                        if a > 0.0 && b > 0.0 {
                            rhs = rhs.min(chernoff_at(&p2, y, y2, s).unwrap() - (1.0 - s) * a.ln() - s * b.ln());
                        }
                    }
                }
                check(lhs >= rhs - 2.0 * (mid as f64).ln() - 1e-9, || format!("composite case {t}"))?;
            }
        }
    }
    // product inequality, two messages
    for t in 0..200 {
        let p = random_channel(&mut rng, 3, 3, 0.15);
        let q = random_channel(&mut rng, 3, 3, 0.15);
        let joint = exponent_two(&p.product(&q).unwrap()).value;
        check(joint <= exponent_two(&p).value + exponent_two(&q).value + 1e-9, || format!("product pair {t}"))?;
    }
    // product equality for reversible channels
    let mut equal_cases = 0;
    while equal_cases < 100 {
        let p = random_reversible(&mut rng);
        let q = random_reversible(&mut rng);
        let m = rng.random_range(2..=3usize);
        let pq = p.product(&q).unwrap();
        if multiset_count(pq.input_size(), m) > 10_000 {
            continue;
        }
        check(is_pairwise_reversible(&pq, REVERSIBILITY_TOLERANCE).reversible, || "product not reversible".into())?;
        let joint = tilde_exponent(&pq, m).unwrap().value;
        let sum = tilde_exponent(&p, m).unwrap().value + tilde_exponent(&q, m).unwrap().value;
        check((joint - sum).abs() <= 1e-8, || format!("reversible product {equal_cases}: {joint} vs {sum}"))?;
        equal_cases += 1;
    }
    Ok("600 LRT, 100 composite, 200 product-inequality and 100 product-equality cases".into())
}

#[test]
fn acceptance() {
    let mut outcomes = vec![
        run(1, "counterexample scaling", 1, c1_counterexample),
        run(2, "closed-form exponents", 1, c2_closed_forms),
        run(3, "maxflow-mincut duality and decomposition", 30, c3_duality),
        run(4, "bound sandwich and approximation factors", 60, c4_sandwich),
        run(5, "zero-rate sandwich", 60, c5_zero_rate),
        run(6, "transition inequalities on exact occupancies", 60, c6_transition),
        run(7, "exact vs Monte Carlo", 300, c7_monte_carlo),
    ];
    let c9 = run(9, "product, composite and likelihood-ratio inequalities", 120, c9_inequalities);
    let others_green = outcomes.iter().filter(|o| o.id >= 3).all(|o| o.pass) && c9.pass;
    outcomes.push(run(8, "finite-n substitute for asymptotic achievability", 600, || c8_substitute(others_green)));
    outcomes.push(c9);
    outcomes.sort_by_key(|o| o.id);

    // written to the raw handle so the report survives libtest output capture
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err);
    for o in &outcomes {
        let _ = writeln!(
            err,
            "criterion {} [{}] {}: {} ({:.2}s of {}s)",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.title,
            o.detail,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
    }
    for &(id, why) in KNOWN_RED {
        let _ = writeln!(err, "criterion {id} is a known failure: {why}");
    }

    let unexpected: Vec<u32> = outcomes
        .iter()
        .filter(|o| o.pass == KNOWN_RED.iter().any(|&(id, _)| id == o.id))
        .map(|o| o.id)
        .collect();
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
