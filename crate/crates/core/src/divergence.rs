//! Bhattacharyya and Chernoff divergences between channel rows.
//!
//! Inside every Chernoff sum `0^0 := 0`, so a term contributes only when `y`
//! lies in the support of both distributions. With that convention the
//! divergence is `-LSE_y((1-s) ln P(y) + s ln Q(y))` over the common support,
//! a concave function of `s` on all of `[0, 1]`.

use alloc::vec::Vec;

use crate::channel::Dmc;
use crate::error::{Error, Result};
use crate::math::{self, LogSumExp};

/// Bracket width at which the golden-section search stops.
pub const GOLDEN_TOLERANCE: f64 = 1e-10;
/// Number of grid points used to cross-check the golden-section optimum.
pub const GRID_POINTS: usize = 1001;
/// Default slack for [`is_pairwise_reversible`].
pub const REVERSIBILITY_TOLERANCE: f64 = 1e-7;

/// An optimized Chernoff divergence together with its optimizing parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceResult {
    /// Divergence in nats; `+inf` for disjoint supports.
    pub value: f64,
    /// Maximizing `s` in `[0, 1]`.
    pub argmax_s: f64,
}

/// Chernoff divergence with parameter `s` between two log-domain distributions.
pub fn chernoff_at_logs(log_p: &[f64], log_q: &[f64], s: f64) -> f64 {
    let mut acc = LogSumExp::new();
    for (&lp, &lq) in log_p.iter().zip(log_q) {
        if lp > f64::NEG_INFINITY && lq > f64::NEG_INFINITY {
            acc.push((1.0 - s) * lp + s * lq);
        }
    }
    -acc.value()
}

/// Bhattacharyya distance `-ln Σ sqrt(P Q)` between log-domain distributions.
pub fn bhattacharyya_logs(log_p: &[f64], log_q: &[f64]) -> f64 {
    let mut acc = LogSumExp::new();
    for (&lp, &lq) in log_p.iter().zip(log_q) {
        acc.push(0.5 * (lp + lq));
    }
    // guard against -0.0 and rounding below zero for identical inputs
    (-acc.value()).max(0.0)
}

/// Chernoff divergence maximized over `s` for log-domain distributions.
pub fn chernoff_logs(log_p: &[f64], log_q: &[f64]) -> DivergenceResult {
    let common: Vec<(f64, f64)> = log_p
        .iter()
        .zip(log_q)
        .filter(|(&lp, &lq)| lp > f64::NEG_INFINITY && lq > f64::NEG_INFINITY)
        .map(|(&lp, &lq)| (lp, lq))
        .collect();
    if common.is_empty() {
        return DivergenceResult {
            value: f64::INFINITY,
            argmax_s: 0.5,
        };
    }
    let eval = |s: f64| {
        let mut acc = LogSumExp::new();
        for &(lp, lq) in &common {
            acc.push((1.0 - s) * lp + s * lq);
        }
        -acc.value()
    };

    let (mut best_s, mut best) = math::golden_section_max(eval, 0.0, 1.0, GOLDEN_TOLERANCE);
    for s in [0.0, 0.5, 1.0] {
        let v = eval(s);
        if v > best {
            best = v;
            best_s = s;
        }
    }
    // grid guard: a plateau or a kink can fool the bracket
    let mut grid_best = (best_s, best);
    for i in 0..GRID_POINTS {
        let s = i as f64 / (GRID_POINTS - 1) as f64;
        let v = eval(s);
        if v > grid_best.1 {
            grid_best = (s, v);
        }
    }
    if grid_best.1 > best + 1e-8 {
        let step = 1.0 / (GRID_POINTS - 1) as f64;
        let lo = (grid_best.0 - step).max(0.0);
        let hi = (grid_best.0 + step).min(1.0);
        let (s, v) = math::golden_section_max(eval, lo, hi, GOLDEN_TOLERANCE);
        (best_s, best) = if v >= grid_best.1 { (s, v) } else { grid_best };
    }
    DivergenceResult {
        value: best.max(0.0),
        argmax_s: best_s,
    }
}

pub fn bhattacharyya(p: &Dmc, x: usize, x2: usize) -> Result<f64> {
    p.check_input(x)?;
    p.check_input(x2)?;
    if x == x2 {
        return Ok(0.0);
    }
    Ok(bhattacharyya_logs(p.log_row(x), p.log_row(x2)))
}

pub fn chernoff_at(p: &Dmc, x: usize, x2: usize, s: f64) -> Result<f64> {
    p.check_input(x)?;
    p.check_input(x2)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::SOutOfRange(s));
    }
    Ok(chernoff_at_logs(p.log_row(x), p.log_row(x2), s))
}

pub fn chernoff(p: &Dmc, x: usize, x2: usize) -> Result<DivergenceResult> {
    p.check_input(x)?;
    p.check_input(x2)?;
    if x == x2 {
        return Ok(DivergenceResult {
            value: 0.0,
            argmax_s: 0.5,
        });
    }
    Ok(chernoff_logs(p.log_row(x), p.log_row(x2)))
}

/// Matrix of pairwise Bhattacharyya distances between all inputs.
pub fn bhattacharyya_matrix(p: &Dmc) -> Vec<Vec<f64>> {
    let k = p.input_size();
    let mut d = alloc::vec![alloc::vec![0.0; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let v = bhattacharyya_logs(p.log_row(a), p.log_row(b));
            d[a][b] = v;
            d[b][a] = v;
        }
    }
    d
}

/// Outcome of [`is_pairwise_reversible`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reversibility {
    pub reversible: bool,
    /// First violating pair `(x, x')` and its Chernoff optimizer.
    pub witness: Option<(usize, usize, f64)>,
}

/// Whether every input pair has its Chernoff optimum at `s = 1/2`, up to `tol` nats.
pub fn is_pairwise_reversible(p: &Dmc, tol: f64) -> Reversibility {
    let k = p.input_size();
    for a in 0..k {
        for b in a + 1..k {
            let (la, lb) = (p.log_row(a), p.log_row(b));
            let opt = chernoff_logs(la, lb);
            let half = chernoff_at_logs(la, lb, 0.5);
            let violated = if opt.value.is_infinite() {
                half.is_finite()
            } else {
                opt.value > half + tol
            };
            if violated {
                return Reversibility {
                    reversible: false,
                    witness: Some((a, b, opt.argmax_s)),
                };
            }
        }
    }
    Reversibility {
        reversible: true,
        witness: None,
    }
}
