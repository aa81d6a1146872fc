use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{checked_pow, Dmc};
use crate::error::{Error, Result};
use crate::exponent::berlekamp_codebook;
use crate::math::{self, LogSumExp};
use crate::protocol::argmax;

/// Largest output-sequence count enumerated by [`oracle_exponent_1hop`].
pub const MAX_ORACLE_SEQUENCES: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Worst-case ML error probability over messages.
    pub error_probability: f64,
    pub per_message: Vec<f64>,
    /// `-(1/n) ln` of the worst-case error probability.
    pub exponent: f64,
    /// Codewords used, each of length `n`.
    pub words: Vec<Vec<usize>>,
}

/// Exact ML error probability of the permutation codebook cycled to length `n`
/// over one hop, by enumerating every output sequence.
pub fn oracle_exponent_1hop(p: &Dmc, messages: usize, n: usize) -> Result<OracleResult> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange { name: "n", value: 0.0 });
    }
    let size = checked_pow(p.output_size(), n)?;
    if size > MAX_ORACLE_SEQUENCES {
        return Err(Error::AlphabetTooLarge {
            size,
            limit: MAX_ORACLE_SEQUENCES,
        });
    }
    let cb = berlekamp_codebook(p, messages)?;
    let words: Vec<Vec<usize>> = cb
        .words
        .iter()
        .map(|w| (0..n).map(|t| w[t % cb.ell]).collect())
        .collect();

    // log-likelihoods are updated incrementally along an odometer over outputs
    let outs = p.output_size();
    let mut y = vec![0usize; n];
    // partial[t][m]: log-likelihood of y[..t] under word m
    let mut partial = vec![vec![0.0; messages]; n + 1];
    let mut err = vec![LogSumExp::new(); messages];
    let mut dirty = 0;
    for _ in 0..size as usize {
        for t in dirty..n {
            for m in 0..messages {
                partial[t + 1][m] = partial[t][m] + p.log_prob(words[m][t], y[t]);
            }
        }
        let ll = &partial[n];
        let best = argmax(ll);
        for (m, e) in err.iter_mut().enumerate() {
            if m != best {
                e.push(ll[m]);
            }
        }
        // next sequence, last symbol fastest
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            y[pos] += 1;
            if y[pos] < outs {
                break;
            }
            y[pos] = 0;
        }
        dirty = pos;
    }
    let per_message: Vec<f64> = err.iter().map(|e| math::exp(e.value())).collect();
    let worst = per_message.iter().cloned().fold(0.0, f64::max);
    Ok(OracleResult {
        error_probability: worst,
        per_message,
        exponent: -math::ln(worst) / n as f64,
        words,
    })
}
