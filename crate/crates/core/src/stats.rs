//! Normal CDF, Kolmogorov-Smirnov distance, histograms, eigenvalue spacings
//! and the two reference spacing laws.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::spectra::SpectralSample;

/// Standard normal CDF. Rejects NaN.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NonFinite("normal cdf argument"));
    }
    Ok(phi(x))
}

/// Standard normal CDF without argument checking.
pub fn phi(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Two-sided Kolmogorov-Smirnov statistic of a sorted sample against a
/// fully specified CDF:
/// `max_i max(i/n - F(s_i), F(s_i) - (i-1)/n)`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::InvalidArgument(
            "KS statistic of an empty sample".into(),
        ));
    }
    if sorted.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite("KS sample"));
    }
    if sorted.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "KS sample must be sorted ascending".into(),
        ));
    }
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(d)
}

/// Counts over half-open bins `[e_i, e_{i+1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Values left of the first edge.
    pub below: u64,
    /// Values at or right of the last edge.
    pub above: u64,
    pub total: u64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self, bin: usize) -> f64 {
        self.edges[bin + 1] - self.edges[bin]
    }

    /// Count normalized by the full sample size and bin width, so that the
    /// densities integrate to the in-range fraction.
    pub fn density(&self, bin: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts[bin] as f64 / (self.total as f64 * self.width(bin))
    }
}

pub fn histogram(values: &[f64], edges: &[f64]) -> Result<Histogram> {
    if edges.len() < 2 {
        return Err(Error::InvalidArgument(
            "histogram needs at least two edges".into(),
        ));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite("histogram edges"));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "histogram edges must be strictly increasing".into(),
        ));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite("histogram values"));
    }
    let mut counts = vec![0u64; edges.len() - 1];
    let (mut below, mut above) = (0, 0);
    let last = edges[edges.len() - 1];
    for &v in values {
        if v < edges[0] {
            below += 1;
        } else if v >= last {
            above += 1;
        } else {
            // index of the last edge <= v
            let bin = edges.partition_point(|&e| e <= v) - 1;
            counts[bin] += 1;
        }
    }
    Ok(Histogram {
        edges: edges.to_vec(),
        counts,
        below,
        above,
        total: values.len() as u64,
    })
}

/// `bins + 1` equally spaced edges from `lo` to `hi`.
pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
    if bins == 0 || hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(Error::InvalidArgument(format!(
            "need bins >= 1 and hi > lo, got bins={bins}, [{lo}, {hi}]"
        )));
    }
    let w = (hi - lo) / bins as f64;
    Ok((0..=bins)
        .map(|i| if i == bins { hi } else { lo + w * i as f64 })
        .collect())
}

/// Adjacent differences of sorted eigenvalues, rescaled to mean one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingSample {
    pub spacings: Vec<f64>,
    /// 1-based inclusive eigenvalue window the differences came from.
    pub lo: usize,
    pub hi: usize,
}

impl SpacingSample {
    /// Rescales raw differences (possibly pooled from several spectra) by
    /// their mean.
    pub fn from_raw(raw: Vec<f64>, lo: usize, hi: usize) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidArgument("no spacings".into()));
        }
        if raw.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(
                "spacings must be finite and non-negative".into(),
            ));
        }
        let mean = compensated_sum(raw.iter().copied()) / raw.len() as f64;
        if mean == 0.0 {
            return Err(Error::InvalidArgument(
                "all eigenvalues in the window coincide".into(),
            ));
        }
        Ok(SpacingSample {
            spacings: raw.into_iter().map(|v| v / mean).collect(),
            lo,
            hi,
        })
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.spacings.iter().copied()) / self.spacings.len() as f64
    }

    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.spacings.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// KS distance of the spacings to a reference spacing law.
    pub fn ks_to(&self, model: SpacingModel) -> Result<f64> {
        ks_statistic(&self.sorted(), |x| model.cdf(x))
    }
}

/// Differences `v_{i+1} - v_i` for `lo <= i < hi` (1-based, inclusive
/// window `[lo, hi]`), not rescaled.
pub fn raw_spacings(s: &SpectralSample, lo: usize, hi: usize) -> Result<Vec<f64>> {
    if lo == 0 || lo >= hi || hi > s.dim() {
        return Err(Error::InvalidArgument(format!(
            "spacing window [{lo}, {hi}] invalid for N = {}",
            s.dim()
        )));
    }
    Ok(s.values()[lo - 1..hi]
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect())
}

/// Mean-normalized spacings of one spectrum over the window `[lo, hi]`.
pub fn spacings(s: &SpectralSample, lo: usize, hi: usize) -> Result<SpacingSample> {
    SpacingSample::from_raw(raw_spacings(s, lo, hi)?, lo, hi)
}

/// Reference laws for unit-mean nearest-neighbour spacings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpacingModel {
    /// `e^{-x}`.
    PoissonExp,
    /// Wigner surmise `(pi/2) x e^{-pi x^2 / 4}`.
    WignerGoe,
}

impl SpacingModel {
    pub fn density(self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match self {
            SpacingModel::PoissonExp => (-x).exp(),
            SpacingModel::WignerGoe => FRAC_PI_2 * x * (-FRAC_PI_4 * x * x).exp(),
        }
    }

    pub fn cdf(self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            SpacingModel::PoissonExp => -(-x).exp_m1(),
            SpacingModel::WignerGoe => -(-FRAC_PI_4 * x * x).exp_m1(),
        }
    }
}

/// Density of `model` at `x >= 0`.
pub fn reference_density(model: SpacingModel, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "spacing density needs x >= 0, got {x}"
        )));
    }
    Ok(model.density(x))
}
