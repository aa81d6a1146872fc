//! One-hop error exponents for a fixed number of messages.
//!
//! * [`exponent_two`]: the exact two-message exponent, the best Chernoff
//!   divergence over input pairs.
//! * [`tilde_exponent`]: the Bhattacharyya-based `M`-message exponent, exact
//!   for pairwise-reversible channels and achievable for all channels.
//! * [`zero_rate_exponent`]: the zero-rate exponent `max_q Σ q_x q_x' d_B(x, x')`.
//! * [`berlekamp_codebook`]: the permutation codebook of length `M!` that
//!   realizes the tilde exponent for every message pair at once.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::channel::Dmc;
use crate::divergence::{self, bhattacharyya_matrix};
use crate::error::{Error, Result};
use crate::math;
use crate::rng;

/// Largest multiset enumeration [`tilde_exponent`] accepts.
pub const MAX_TUPLE_SEARCH: u128 = 1_000_000;
/// Largest input alphabet for [`zero_rate_exponent`].
pub const MAX_ZERO_RATE_INPUTS: usize = 12;
/// Infinite Bhattacharyya distances are replaced by this many nats in the zero-rate search.
pub const INFINITE_DB_CAP: f64 = 1e4;
/// Largest message count for [`berlekamp_codebook`] (block length `M!`).
pub const MAX_CODEBOOK_MESSAGES: usize = 6;

const ZERO_RATE_GRID_STEPS: usize = 40;
const ZERO_RATE_GRID_BUDGET: u128 = 200_000;
const ZERO_RATE_RESTARTS: usize = 20;
const ASCENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    GridPlusAscent,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Optimizer {
    Pair(usize, usize),
    Tuple(Vec<usize>),
    Distribution(Vec<f64>),
}

/// An exponent value with the input configuration that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentReport {
    /// Nats per channel use.
    pub value: f64,
    pub optimizer: Optimizer,
    pub method: Method,
    /// Set when infinite Bhattacharyya distances were capped at [`INFINITE_DB_CAP`].
    pub capped: bool,
}

/// `max_{x1, x2} d_C(x1, x2)`; zero for a one-input channel.
pub fn exponent_two(p: &Dmc) -> ExponentReport {
    let k = p.input_size();
    let mut best = (f64::NEG_INFINITY, (0, 0));
    for a in 0..k {
        for b in a + 1..k {
            let v = divergence::chernoff_logs(p.log_row(a), p.log_row(b)).value;
            if v > best.0 {
                best = (v, (a, b));
            }
        }
    }
    ExponentReport {
        value: best.0.max(0.0),
        optimizer: Optimizer::Pair(best.1 .0, best.1 .1),
        method: Method::Exhaustive,
        capped: false,
    }
}

/// Number of multisets of size `m` drawn from `k` symbols, saturating.
pub fn multiset_count(k: usize, m: usize) -> u128 {
    // C(k + m - 1, m)
    let mut acc: u128 = 1;
    for i in 0..m as u128 {
        acc = acc.saturating_mul(k as u128 + i) / (i + 1);
    }
    acc
}

/// Average pairwise Bhattacharyya distance of a tuple of inputs.
pub fn tuple_objective(db: &[Vec<f64>], tuple: &[usize]) -> f64 {
    let m = tuple.len();
    if m < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            sum += db[tuple[i]][tuple[j]];
        }
    }
    2.0 * sum / (m * (m - 1)) as f64
}

/// `(2 / (M(M-1))) max Σ_{m1<m2} d_B(x_m1, x_m2)` over input tuples with repetition.
///
/// The objective is symmetric, so only non-decreasing tuples (multisets) are
/// enumerated; the first maximizer in lexicographic order is reported.
pub fn tilde_exponent(p: &Dmc, m: usize) -> Result<ExponentReport> {
    if m < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "M",
            value: m as f64,
        });
    }
    let k = p.input_size();
    let count = multiset_count(k, m);
    if count > MAX_TUPLE_SEARCH {
        return Err(Error::SearchSpaceTooLarge {
            size: count,
            limit: MAX_TUPLE_SEARCH,
        });
    }
    let db = bhattacharyya_matrix(p);
    let mut tuple = vec![0usize; m];
    let mut best_sum = f64::NEG_INFINITY;
    let mut best_tuple = tuple.clone();
    loop {
        let mut sum = 0.0;
        for i in 0..m {
            for j in i + 1..m {
                sum += db[tuple[i]][tuple[j]];
            }
        }
        if sum > best_sum {
            best_sum = sum;
            best_tuple.copy_from_slice(&tuple);
        }
        // next non-decreasing tuple
        let Some(pos) = (0..m).rev().find(|&i| tuple[i] + 1 < k) else {
            break;
        };
        let v = tuple[pos] + 1;
        for t in &mut tuple[pos..] {
            *t = v;
        }
    }
    Ok(ExponentReport {
        value: 2.0 * best_sum / (m * (m - 1)) as f64,
        optimizer: Optimizer::Tuple(best_tuple),
        method: Method::Exhaustive,
        capped: false,
    })
}

fn quadratic_form(d: &[Vec<f64>], q: &[f64]) -> f64 {
    let mut v = 0.0;
    for (i, row) in d.iter().enumerate() {
        if q[i] == 0.0 {
            continue;
        }
        for (j, &dij) in row.iter().enumerate() {
            v += q[i] * q[j] * dij;
        }
    }
    v
}

/// Pairwise coordinate ascent on `q^T D q` over the simplex.
///
/// Moving mass `t` from `j` to `i` changes the objective by
/// `2t(g_i - g_j) - 2t^2 D_ij` with `g = Dq`; each step takes the clamped optimum.
fn pairwise_ascent(d: &[Vec<f64>], q: &mut [f64]) {
    let k = q.len();
    let mut g: Vec<f64> = (0..k).map(|i| (0..k).map(|j| d[i][j] * q[j]).sum()).collect();
    for _sweep in 0..10_000 {
        let gmax = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let gmin_support = (0..k)
            .filter(|&i| q[i] > 0.0)
            .map(|i| g[i])
            .fold(f64::INFINITY, f64::min);
        if gmax - gmin_support <= ASCENT_TOLERANCE {
            break;
        }
        let mut moved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j || q[j] <= 0.0 || g[i] <= g[j] {
                    continue;
                }
                let dij = d[i][j];
                let slope = g[i] - g[j];
                let t = if dij > 0.0 {
                    (slope / (2.0 * dij)).min(q[j])
                } else {
                    q[j]
                };
                if t <= 0.0 {
                    continue;
                }
                q[i] += t;
                q[j] -= t;
                if q[j] < 1e-300 {
                    q[j] = 0.0;
                }
                for (l, gl) in g.iter_mut().enumerate() {
                    *gl += t * (d[l][i] - d[l][j]);
                }
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

/// Largest grid resolution `N <= 40` whose simplex grid fits the point budget.
fn grid_steps(k: usize) -> usize {
    let mut n = ZERO_RATE_GRID_STEPS;
    while n > 1 && multiset_count(k, n) > ZERO_RATE_GRID_BUDGET {
        n -= 1;
    }
    n
}

/// Zero-rate exponent `max_q Σ_{x,x'} q_x q_x' d_B(x, x')`.
///
/// Two-input channels use the closed form `q = (1/2, 1/2)`. Larger alphabets
/// are searched on a simplex grid (step 1/40 when the grid fits the budget),
/// refined by pairwise coordinate ascent from the best grid point and from
/// seeded random restarts.
pub fn zero_rate_exponent(p: &Dmc) -> Result<ExponentReport> {
    let k = p.input_size();
    if k > MAX_ZERO_RATE_INPUTS {
        return Err(Error::SearchSpaceTooLarge {
            size: k as u128,
            limit: MAX_ZERO_RATE_INPUTS as u128,
        });
    }
    let mut d = bhattacharyya_matrix(p);
    let mut capped = false;
    for row in d.iter_mut() {
        for v in row.iter_mut() {
            if *v > INFINITE_DB_CAP {
                *v = INFINITE_DB_CAP;
                capped = true;
            }
        }
    }
    if k == 1 {
        return Ok(ExponentReport {
            value: 0.0,
            optimizer: Optimizer::Distribution(vec![1.0]),
            method: Method::ClosedForm,
            capped,
        });
    }
    if k == 2 {
        return Ok(ExponentReport {
            value: d[0][1] / 2.0,
            optimizer: Optimizer::Distribution(vec![0.5, 0.5]),
            method: Method::ClosedForm,
            capped,
        });
    }

    let steps = grid_steps(k);
    let mut counts = vec![0usize; k];
    counts[k - 1] = steps;
    let mut q = vec![0.0; k];
    let mut best_q = vec![0.0; k];
    let mut best = f64::NEG_INFINITY;
    // enumerate compositions of `steps` into k parts
    loop {
        for (qi, &c) in q.iter_mut().zip(&counts) {
            *qi = c as f64 / steps as f64;
        }
        let v = quadratic_form(&d, &q);
        if v > best {
            best = v;
            best_q.copy_from_slice(&q);
        }
        // next composition: move one unit leftwards in lexicographic order
        let Some(pos) = (0..k - 1).rev().find(|&i| counts[i + 1..].iter().sum::<usize>() > 0) else {
            break;
        };
        counts[pos] += 1;
        let rest: usize = steps - counts[..=pos].iter().sum::<usize>();
        for c in &mut counts[pos + 1..] {
            *c = 0;
        }
        counts[k - 1] = rest;
    }

    let mut candidates: Vec<Vec<f64>> = vec![best_q.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0e0e);
    for _ in 0..ZERO_RATE_RESTARTS {
        let mut r: Vec<f64> = (0..k).map(|_| -math::ln(1.0 - rng::uniform(&mut rng))).collect();
        let s: f64 = r.iter().sum();
        r.iter_mut().for_each(|v| *v /= s);
        candidates.push(r);
    }
    for mut c in candidates {
        pairwise_ascent(&d, &mut c);
        let v = quadratic_form(&d, &c);
        if v > best {
            best = v;
            best_q = c;
        }
    }
    Ok(ExponentReport {
        value: best.max(0.0),
        optimizer: Optimizer::Distribution(best_q),
        method: Method::GridPlusAscent,
        capped,
    })
}

/// An `(M, ℓ)` codebook: `M` words of `ℓ` input symbols each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    pub messages: usize,
    pub ell: usize,
    pub words: Vec<Vec<usize>>,
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        out.push(perm.clone());
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..m).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

/// Permutation codebook of length `M!`: column `σ` assigns `x_σ(m)` to message `m`,
/// where `(x_1..x_M)` is the tilde-optimal tuple. Every pair of words then has
/// Bhattacharyya distance `M! · tilde_exponent(P, M)`.
pub fn berlekamp_codebook(p: &Dmc, m: usize) -> Result<Codebook> {
    if m > MAX_CODEBOOK_MESSAGES {
        return Err(Error::MTooLarge {
            m,
            max: MAX_CODEBOOK_MESSAGES,
        });
    }
    let report = tilde_exponent(p, m)?;
    let Optimizer::Tuple(tuple) = report.optimizer else {
        unreachable!("tilde_exponent reports a tuple")
    };
    let perms = permutations(m);
    let words = (0..m)
        .map(|msg| perms.iter().map(|sigma| tuple[sigma[msg]]).collect())
        .collect();
    Ok(Codebook {
        messages: m,
        ell: perms.len(),
        words,
    })
}

/// Bhattacharyya distance between two input sequences under `P^ℓ`, by tensorization.
pub fn sequence_bhattacharyya(p: &Dmc, a: &[usize], b: &[usize]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            if x == y {
                0.0
            } else {
                divergence::bhattacharyya_logs(p.log_row(x), p.log_row(y))
            }
        })
        .sum()
}

/// Tilde exponent of `ksym(K, p)` with distinct inputs: `-ln(2 sqrt(p(1-(K-1)p)) + (K-2)p)`.
pub fn ksym_closed_form(k: usize, m: usize, p: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "K",
            value: k as f64,
        });
    }
    if m < 2 || m > k {
        return Err(Error::ParameterOutOfRange {
            name: "M",
            value: m as f64,
        });
    }
    if !(p > 0.0 && p < 1.0 / (k - 1) as f64) {
        return Err(Error::ParameterOutOfRange { name: "p", value: p });
    }
    let diag = 1.0 - (k - 1) as f64 * p;
    Ok(-math::ln(2.0 * math::sqrt(p * diag) + (k - 2) as f64 * p))
}

/// Three-message feedback exponent of the BSC:
/// `-ln(p^{1/3}(1-p)^{2/3} + p^{2/3}(1-p)^{1/3})`.
pub fn bsc_feedback_exponent_m3(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::ParameterOutOfRange { name: "p", value: p });
    }
    let q = 1.0 - p;
    let third = 1.0 / 3.0;
    Ok(-math::ln(
        math::powf(p, third) * math::powf(q, 2.0 * third)
            + math::powf(p, 2.0 * third) * math::powf(q, third),
    ))
}
