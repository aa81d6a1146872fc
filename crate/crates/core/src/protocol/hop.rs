use alloc::vec::Vec;

use rand_core::RngCore;

use crate::channel::Dmc;
use crate::divergence;
use crate::error::{Error, Result};
use crate::exponent;
use crate::math::LogSumExp;
use crate::rng;

/// Largest `M` accepted by [`reduce_inputs`] (codeword length `M!`).
pub const MAX_REDUCTION_MESSAGES: usize = 4;

/// One hop seen as an `M`-input channel: message symbol `m` is sent as the
/// input word `words[m]` over the base channel.
///
/// Received symbols are kept as raw base outputs, `word_len` per message
/// symbol, so the (possibly huge) restricted channel is never materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct HopChannel {
    base: Dmc,
    words: Vec<Vec<usize>>,
    cdf: Vec<Vec<f64>>,
    distances: Vec<Vec<f64>>,
}

impl HopChannel {
    pub fn new(base: Dmc, words: Vec<Vec<usize>>) -> Result<Self> {
        let Some(first) = words.first() else {
            return Err(Error::ParameterOutOfRange { name: "M", value: 0.0 });
        };
        let len = first.len();
        if len == 0 {
            return Err(Error::LengthMismatch { expected: 1, found: 0 });
        }
        for w in &words {
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    found: w.len(),
                });
            }
            for &x in w {
                if x >= base.input_size() {
                    return Err(Error::IndexOutOfRange {
                        index: x,
                        size: base.input_size(),
                    });
                }
            }
        }
        let cdf = base
            .rows()
            .map(|row| {
                let mut acc = 0.0;
                row.iter()
                    .map(|&p| {
                        acc += p;
                        acc
                    })
                    .collect()
            })
            .collect();
        let m = words.len();
        let mut distances = alloc::vec![alloc::vec![0.0; m]; m];
        for a in 0..m {
            for b in a + 1..m {
                let d = exponent::sequence_bhattacharyya(&base, &words[a], &words[b]);
                distances[a][b] = d;
                distances[b][a] = d;
            }
        }
        Ok(Self {
            base,
            words,
            cdf,
            distances,
        })
    }

    /// Uses inputs `0..M` of `base` directly, one channel use per symbol.
    pub fn direct(base: Dmc, messages: usize) -> Result<Self> {
        if messages > base.input_size() {
            return Err(Error::ParameterOutOfRange {
                name: "M",
                value: messages as f64,
            });
        }
        Self::new(base, (0..messages).map(|m| alloc::vec![m]).collect())
    }

    /// Permutation codebook of length `M!` for `base`, each word repeated `repeat` times.
    pub fn reduced(base: Dmc, messages: usize, repeat: usize) -> Result<Self> {
        if messages > MAX_REDUCTION_MESSAGES {
            return Err(Error::MTooLarge {
                m: messages,
                max: MAX_REDUCTION_MESSAGES,
            });
        }
        if repeat == 0 {
            return Err(Error::ParameterOutOfRange { name: "repeat", value: 0.0 });
        }
        let cb = exponent::berlekamp_codebook(&base, messages)?;
        let words = cb.words.into_iter().map(|w| w.repeat(repeat)).collect();
        Self::new(base, words)
    }

    pub fn base(&self) -> &Dmc {
        &self.base
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn messages(&self) -> usize {
        self.words.len()
    }

    /// Base channel uses per message symbol.
    pub fn word_len(&self) -> usize {
        self.words[0].len()
    }

    /// Bhattacharyya distance between the words of `a` and `b`.
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.distances[a][b]
    }

    /// Smallest pairwise word distance; `+inf` for a single message.
    pub fn min_distance(&self) -> f64 {
        let m = self.messages();
        let mut best = f64::INFINITY;
        for a in 0..m {
            for b in a + 1..m {
                best = best.min(self.distances[a][b]);
            }
        }
        best
    }

    /// Sends the message symbols in `block`, appending base outputs to `out`.
    pub fn transmit<R: RngCore + ?Sized>(&self, block: &[usize], rng: &mut R, out: &mut Vec<usize>) {
        for &sym in block {
            for &x in &self.words[sym] {
                out.push(rng::sample_cdf(&self.cdf[x], rng));
            }
        }
    }

    /// `table[i * M + m]` = log-probability of the `i`-th received word given symbol `m`.
    pub fn symbol_log_likelihoods(&self, received: &[usize], table: &mut Vec<f64>) {
        let len = self.word_len();
        let m = self.messages();
        table.clear();
        for chunk in received.chunks(len) {
            for w in &self.words {
                let mut s = 0.0;
                for (&x, &y) in w.iter().zip(chunk) {
                    s += self.base.log_prob(x, y);
                }
                table.push(s);
            }
        }
        debug_assert_eq!(table.len(), received.len() / len * m);
    }

    /// Log-probability of one received word given message symbol `m`.
    pub fn word_log_likelihood(&self, m: usize, received: &[usize]) -> f64 {
        self.words[m]
            .iter()
            .zip(received)
            .map(|(&x, &y)| self.base.log_prob(x, y))
            .sum()
    }

    /// The restricted channel `P^len` on the words, for small alphabets.
    pub fn restricted(&self) -> Result<Dmc> {
        self.base.restrict(&self.words)
    }

    /// Whether the restricted channel has its Chernoff optimum at `s = 1/2` for every pair.
    pub fn is_pairwise_reversible(&self) -> bool {
        // tensorization: per-pair check on the product of coordinate divergences
        let m = self.messages();
        for a in 0..m {
            for b in a + 1..m {
                let f = |s: f64| -> f64 {
                    self.words[a]
                        .iter()
                        .zip(&self.words[b])
                        .map(|(&x, &y)| {
                            if x == y {
                                0.0
                            } else {
                                divergence::chernoff_at_logs(self.base.log_row(x), self.base.log_row(y), s)
                            }
                        })
                        .sum()
                };
                let half = f(0.5);
                let (_, best) = crate::math::golden_section_max(f, 0.0, 1.0, divergence::GOLDEN_TOLERANCE);
                if best > half + divergence::REVERSIBILITY_TOLERANCE {
                    return false;
                }
            }
        }
        true
    }
}

/// Output of [`reduce_inputs`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedChannels {
    pub hops: Vec<HopChannel>,
    /// Bottleneck of the per-hop minimum word distances, `M!·min_j 𝓔̃(P_j)`.
    pub flow_value: f64,
    pub ell_factor: usize,
}

/// Replaces every hop channel by its `M!`-fold power restricted to the
/// permutation codebook, giving `M`-input hops with equal pairwise distances.
pub fn reduce_inputs(channels: &[Dmc], messages: usize) -> Result<ReducedChannels> {
    if messages > MAX_REDUCTION_MESSAGES {
        return Err(Error::MTooLarge {
            m: messages,
            max: MAX_REDUCTION_MESSAGES,
        });
    }
    let hops = channels
        .iter()
        .map(|c| HopChannel::reduced(c.clone(), messages, 1))
        .collect::<Result<Vec<_>>>()?;
    let flow_value = hops
        .iter()
        .map(HopChannel::min_distance)
        .fold(f64::INFINITY, f64::min);
    let ell_factor = hops.first().map_or(1, HopChannel::word_len);
    Ok(ReducedChannels {
        hops,
        flow_value,
        ell_factor,
    })
}

/// Log-sum-exp over `(log weight, value)` pairs.
pub(crate) fn mix(terms: impl Iterator<Item = f64>) -> f64 {
    let mut acc = LogSumExp::new();
    for t in terms {
        acc.push(t);
    }
    acc.value()
}
