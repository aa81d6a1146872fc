//! Discrete memoryless channels stored as row-stochastic matrices.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Entries in `[-CLAMP_TOLERANCE, 0)` are treated as serialization noise and clamped to zero.
pub const CLAMP_TOLERANCE: f64 = 1e-15;
/// Maximum row-sum deviation accepted by [`Dmc::new`].
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;
/// Largest output alphabet [`Dmc::power`] and [`Dmc::restrict`] will build.
pub const MAX_OUTPUT_ALPHABET: u128 = 10_000_000;
/// Largest matrix (rows times columns) a derived channel may occupy.
pub const MAX_MATRIX_ENTRIES: u128 = 20_000_000;

/// A finite channel `P(y|x)` with cached natural logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    inputs: usize,
    outputs: usize,
    probs: Vec<f64>,
    log_probs: Vec<f64>,
    label: Option<String>,
}

impl Dmc {
    /// Build a channel from its rows. Rows are renormalized after validation.
    pub fn new<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        if rows.is_empty() || rows[0].as_ref().is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let outputs = rows[0].as_ref().len();
        let mut probs = Vec::with_capacity(rows.len() * outputs);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != outputs {
                return Err(Error::RaggedMatrix {
                    row: r,
                    expected: outputs,
                    found: row.len(),
                });
            }
            let mut sum = 0.0;
            for (c, &v) in row.iter().enumerate() {
                if !(v >= -CLAMP_TOLERANCE) || !v.is_finite() {
                    return Err(Error::NegativeEntry {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
                sum += v.max(0.0);
            }
            if math::abs(sum - 1.0) > ROW_SUM_TOLERANCE {
                return Err(Error::NonStochasticRow { row: r, sum });
            }
            probs.extend(row.iter().map(|&v| v.max(0.0) / sum));
        }
        Ok(Self::from_probs(rows.len(), outputs, probs))
    }

    fn from_probs(inputs: usize, outputs: usize, probs: Vec<f64>) -> Self {
        let log_probs = probs.iter().map(|&p| math::ln(p)).collect();
        Self {
            inputs,
            outputs,
            probs,
            log_probs,
            label: None,
        }
    }

    /// Build from log-probabilities that are already known to be normalized.
    pub(crate) fn from_log_probs(inputs: usize, outputs: usize, log_probs: Vec<f64>) -> Self {
        let probs = log_probs.iter().map(|&l| math::exp(l)).collect();
        Self {
            inputs,
            outputs,
            probs,
            log_probs,
            label: None,
        }
    }

    pub fn identity(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut probs = vec![0.0; size * size];
        for i in 0..size {
            probs[i * size + i] = 1.0;
        }
        Ok(Self::from_probs(size, size, probs).with_label(format_label("identity", size, None)))
    }

    /// Binary symmetric channel with crossover probability `p` in (0, 1/2).
    pub fn bsc(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(Error::ParameterOutOfRange { name: "p", value: p });
        }
        Ok(Self::ksym_unchecked(2, p).with_label(format_label("bsc", 2, Some(p))))
    }

    /// Binary erasure channel; output 2 is the erasure symbol.
    pub fn bec(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ParameterOutOfRange { name: "p", value: p });
        }
        let probs = vec![1.0 - p, 0.0, p, 0.0, 1.0 - p, p];
        Ok(Self::from_probs(2, 3, probs).with_label(format_label("bec", 2, Some(p))))
    }

    /// K-ary symmetric channel: `1-(K-1)p` on the diagonal, `p` elsewhere.
    pub fn ksym(k: usize, p: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::ParameterOutOfRange {
                name: "k",
                value: k as f64,
            });
        }
        if !(p > 0.0 && p < 1.0 / (k - 1) as f64) {
            return Err(Error::ParameterOutOfRange { name: "p", value: p });
        }
        Ok(Self::ksym_unchecked(k, p).with_label(format_label("ksym", k, Some(p))))
    }

    fn ksym_unchecked(k: usize, p: f64) -> Self {
        let diag = 1.0 - (k - 1) as f64 * p;
        let mut probs = vec![p; k * k];
        let mut log_probs = vec![math::ln(p); k * k];
        for i in 0..k {
            probs[i * k + i] = diag;
            log_probs[i * k + i] = math::ln(diag);
        }
        Self {
            inputs: k,
            outputs: k,
            probs,
            log_probs,
            label: None,
        }
    }

    pub fn with_label(mut self, label: String) -> Self {
        self.label = Some(label);
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn input_size(&self) -> usize {
        self.inputs
    }

    pub fn output_size(&self) -> usize {
        self.outputs
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.outputs + y]
    }

    #[inline]
    pub fn log_prob(&self, x: usize, y: usize) -> f64 {
        self.log_probs[x * self.outputs + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.probs[x * self.outputs..(x + 1) * self.outputs]
    }

    pub fn log_row(&self, x: usize) -> &[f64] {
        &self.log_probs[x * self.outputs..(x + 1) * self.outputs]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.outputs)
    }

    pub(crate) fn check_input(&self, x: usize) -> Result<()> {
        if x < self.inputs {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: x,
                size: self.inputs,
            })
        }
    }

    /// Parallel use of two channels. Input `(a, b)` has index `a * |X_Q| + b`,
    /// and outputs are ordered the same way (first factor slowest).
    pub fn product(&self, other: &Dmc) -> Result<Self> {
        let inputs = self.inputs * other.inputs;
        let outputs = self.outputs * other.outputs;
        check_matrix_size(inputs as u128, outputs as u128)?;
        let mut log_probs = Vec::with_capacity(inputs * outputs);
        for a in 0..self.inputs {
            for b in 0..other.inputs {
                for ya in 0..self.outputs {
                    let la = self.log_prob(a, ya);
                    for yb in 0..other.outputs {
                        log_probs.push(la + other.log_prob(b, yb));
                    }
                }
            }
        }
        Ok(Self::from_log_probs(inputs, outputs, log_probs))
    }

    /// The `k`-fold product `P^k` on input and output sequences of length `k`.
    pub fn power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "k",
                value: 0.0,
            });
        }
        let inputs = checked_pow(self.inputs, k)?;
        let outputs = checked_pow(self.outputs, k)?;
        check_matrix_size(inputs, outputs)?;
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.product(self)?;
        }
        acc.label = None;
        Ok(acc)
    }

    /// Restriction of `P^l` to the given length-`l` input sequences.
    pub fn restrict<W: AsRef<[usize]>>(&self, codewords: &[W]) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let len = codewords[0].as_ref().len();
        if len == 0 {
            return Err(Error::EmptyMatrix);
        }
        for w in codewords {
            let w = w.as_ref();
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    found: w.len(),
                });
            }
            for &x in w {
                self.check_input(x)?;
            }
        }
        let outputs = checked_pow(self.outputs, len)?;
        check_matrix_size(codewords.len() as u128, outputs)?;
        let outputs = outputs as usize;
        let mut log_probs = Vec::with_capacity(codewords.len() * outputs);
        for w in codewords {
            log_probs.extend(self.sequence_log_row(w.as_ref()));
        }
        Ok(Self::from_log_probs(codewords.len(), outputs, log_probs))
    }

    /// Log-probabilities of every output sequence for one input sequence,
    /// in row-major order (first position varies slowest).
    pub fn sequence_log_row(&self, word: &[usize]) -> Vec<f64> {
        let mut row = vec![0.0];
        for &x in word {
            let lr = self.log_row(x);
            let mut next = Vec::with_capacity(row.len() * self.outputs);
            for &prefix in &row {
                next.extend(lr.iter().map(|&l| prefix + l));
            }
            row = next;
        }
        row
    }

    /// Cascade `P2 ∘ P1`: the output of `self` is fed into `next`.
    pub fn compose(&self, next: &Dmc) -> Result<Self> {
        if self.outputs != next.inputs {
            return Err(Error::DimensionMismatch {
                left: self.outputs,
                right: next.inputs,
            });
        }
        let mut log_probs = Vec::with_capacity(self.inputs * next.outputs);
        let mut terms = Vec::with_capacity(self.outputs);
        for x in 0..self.inputs {
            for z in 0..next.outputs {
                terms.clear();
                terms.extend((0..self.outputs).map(|y| self.log_prob(x, y) + next.log_prob(y, z)));
                log_probs.push(math::log_sum_exp(&terms));
            }
        }
        Ok(Self::from_log_probs(self.inputs, next.outputs, log_probs))
    }

    /// Index of an input sequence of `P^k` (first symbol most significant).
    pub fn sequence_index(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &x| acc * self.inputs + x)
    }
}

fn format_label(kind: &str, k: usize, p: Option<f64>) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    match p {
        Some(p) if kind == "ksym" => {
            let _ = write!(s, "{kind}({k},{p})");
        }
        Some(p) => {
            let _ = write!(s, "{kind}({p})");
        }
        None => {
            let _ = write!(s, "{kind}({k})");
        }
    }
    s
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc > MAX_OUTPUT_ALPHABET {
            return Err(Error::AlphabetTooLarge {
                size: acc,
                limit: MAX_OUTPUT_ALPHABET,
            });
        }
    }
    Ok(acc)
}

fn check_matrix_size(rows: u128, cols: u128) -> Result<()> {
    if cols > MAX_OUTPUT_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            size: cols,
            limit: MAX_OUTPUT_ALPHABET,
        });
    }
    let entries = rows.saturating_mul(cols);
    if entries > MAX_MATRIX_ENTRIES {
        return Err(Error::AlphabetTooLarge {
            size: entries,
            limit: MAX_MATRIX_ENTRIES,
        });
    }
    Ok(())
}
