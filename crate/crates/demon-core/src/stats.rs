//! Empirical statistics: histograms, Kolmogorov–Smirnov distance against a
//! gridded density, and inverse-CDF sampling from one.

use crate::dist::DensityCurve;
use crate::{Error, Result};
use rand::Rng;

/// Uniform-bin histogram with density normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    /// Bin `samples` into `bins` uniform bins spanning their range. Values at
    /// the upper edge land in the last bin. Degenerate (constant) samples get
    /// a single unit-width bin.
    pub fn from_samples(samples: &[f64], bins: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        if bins == 0 {
            return Err(Error::InvalidParam {
                name: "bins",
                message: "need at least one bin".into(),
            });
        }
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParam {
                name: "samples",
                message: "samples must be finite".into(),
            });
        }
        let (lo, hi) = if lo == hi {
            (lo - 0.5, lo + 0.5)
        } else {
            (lo, hi)
        };
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        for &s in samples {
            let idx = (((s - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Ok(Self {
            edges,
            counts,
            total: samples.len() as u64,
        })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Per-bin density: count / (n · width). Integrates to exactly 1.
    pub fn density(&self) -> Vec<f64> {
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, e)| c as f64 / (self.total as f64 * (e[1] - e[0])))
            .collect()
    }
}

/// Piecewise-linear CDF interpolator over a curve's cumulative trapezoid,
/// clamped to [0, 1] and to 0/1 outside the grid.
struct CurveCdf<'a> {
    grid: &'a [f64],
    nodes: Vec<f64>,
}

impl<'a> CurveCdf<'a> {
    fn new(curve: &'a DensityCurve) -> Self {
        Self {
            grid: &curve.grid,
            nodes: curve.cdf_nodes(),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.grid.len();
        if x <= self.grid[0] {
            return 0.0;
        }
        if x >= self.grid[n - 1] {
            return self.nodes[n - 1].min(1.0);
        }
        let hi = self.grid.partition_point(|&g| g < x);
        let lo = hi - 1;
        let frac = (x - self.grid[lo]) / (self.grid[hi] - self.grid[lo]);
        (self.nodes[lo] + frac * (self.nodes[hi] - self.nodes[lo])).min(1.0)
    }
}

/// Sup-norm distance between the empirical CDF of `samples` and the
/// cumulative-trapezoid CDF of `curve`.
pub fn ks_from_samples(samples: &[f64], curve: &DensityCurve) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let cdf = CurveCdf::new(curve);
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf.eval(x);
        sup = sup.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(sup)
}

/// KS distance using the step ECDF a histogram induces at its bin edges.
pub fn ks_from_histogram(hist: &Histogram, curve: &DensityCurve) -> Result<f64> {
    if hist.total() == 0 {
        return Err(Error::EmptySamples);
    }
    let cdf = CurveCdf::new(curve);
    let n = hist.total() as f64;
    let mut acc = 0u64;
    let mut sup: f64 = cdf.eval(hist.edges()[0]);
    for (i, &c) in hist.counts().iter().enumerate() {
        acc += c;
        sup = sup.max((acc as f64 / n - cdf.eval(hist.edges()[i + 1])).abs());
    }
    Ok(sup)
}

/// Draw `n` samples from a gridded density by inverting its (renormalized)
/// cumulative trapezoid.
pub fn sample_curve(curve: &DensityCurve, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let nodes = curve.cdf_nodes();
    let total = *nodes.last().expect("curves have at least two nodes");
    (0..n)
        .map(|_| {
            let target = rng.random::<f64>() * total;
            let hi = nodes.partition_point(|&c| c < target).max(1);
            let lo = hi - 1;
            let span = nodes[hi] - nodes[lo];
            let frac = if span > 0.0 {
                (target - nodes[lo]) / span
            } else {
                0.5
            };
            curve.grid[lo] + frac * (curve.grid[hi] - curve.grid[lo])
        })
        .collect()
}
