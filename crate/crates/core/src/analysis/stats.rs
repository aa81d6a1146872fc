//! Interval estimates and least-squares fits.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` successes out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * math::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors >= trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for exactly collinear data.
    pub slope_stderr: f64,
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let k = xs.len();
    if k != ys.len() {
        return Err(Error::LengthMismatch {
            expected: k,
            found: ys.len(),
        });
    }
    if k < 2 {
        return Err(Error::InsufficientData { needed: 2, found: k });
    }
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 2, found: 1 });
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if k > 2 {
        let ssr: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| {
                let r = y - intercept - slope * x;
                r * r
            })
            .sum();
        math::sqrt(ssr / (k - 2) as f64 / sxx)
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr,
    })
}

/// Slope of `-ln p̂` against horizon `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    /// Horizons left out because no error was observed.
    pub excluded: Vec<usize>,
}

/// Fits the decay rate of error probabilities `(n, p̂)`; zero estimates are
/// excluded and at least three usable points are required.
pub fn fit_exponent_points(points: &[(usize, f64)]) -> Result<ExponentFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for &(n, p) in points {
        if p > 0.0 {
            xs.push(n as f64);
            ys.push(-math::ln(p));
        } else {
            excluded.push(n);
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            found: xs.len(),
        });
    }
    let fit = ols(&xs, &ys)?;
    Ok(ExponentFit {
        slope: fit.slope,
        stderr: fit.slope_stderr,
        intercept: fit.intercept,
        excluded,
    })
}
