//! Eigenvalues, normalized spectra, empirical spectral distributions and
//! spectral moments.

mod eigen;

pub use eigen::{eigenvalues, eigenvalues_dense, MAX_ITERATIONS};

use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{
    free_parameter_count, sample_matrix, sample_parameters, EnsembleKind, EntryDistribution,
    ParameterVector, Structure,
};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, mean_and_std_error, sort_finite};
use crate::rng::substream;

/// Eigenvalues divided by a common scale, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSample {
    n: usize,
    values: Vec<f64>,
}

impl SpectralSample {
    /// `values[i] = eigs[i] / scale`, sorted. `n` is the number of
    /// eigenvalues. Use [`normalize_spectrum`] for the usual `scale = sqrt(N)`.
    pub fn from_eigenvalues(eigs: &[f64], scale: f64) -> Result<Self> {
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        let mut values: Vec<f64> = eigs.iter().map(|x| x / scale).collect();
        sort_finite(&mut values, "spectral sample")?;
        Ok(SpectralSample {
            n: values.len(),
            values,
        })
    }

    /// Wraps already-normalized values.
    pub fn from_normalized(values: Vec<f64>) -> Result<Self> {
        let mut values = values;
        sort_finite(&mut values, "spectral sample")?;
        Ok(SpectralSample {
            n: values.len(),
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn negated(&self) -> SpectralSample {
        let mut values: Vec<f64> = self.values.iter().rev().map(|v| -v).collect();
        values.sort_by(f64::total_cmp);
        SpectralSample { n: self.n, values }
    }
}

/// Divides each eigenvalue by `sqrt(n)` and sorts.
pub fn normalize_spectrum(eigs: &[f64], n: usize) -> Result<SpectralSample> {
    if eigs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: eigs.len(),
        });
    }
    SpectralSample::from_eigenvalues(eigs, (n as f64).sqrt())
}

/// `(1/N) * sum v^m` over the normalized values.
pub fn spectral_moment(s: &SpectralSample, m: u32) -> f64 {
    if s.values.is_empty() {
        return f64::NAN;
    }
    compensated_sum(s.values.iter().map(|v| v.powi(m as i32))) / s.values.len() as f64
}

/// Right-continuous step CDF of a spectral sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn from_sorted(sorted: Vec<f64>) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        EmpiricalDistribution { sorted }
    }

    /// `#{v <= x} / N`.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        let count = self.sorted.partition_point(|&v| v <= x);
        count as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.sorted
    }

    /// `sup_x |F(x) - G(x)|` between two step CDFs. Both are constant between
    /// consecutive jump points, so the supremum is attained at a jump.
    pub fn sup_distance(&self, other: &EmpiricalDistribution) -> f64 {
        self.sorted
            .iter()
            .chain(&other.sorted)
            .map(|&x| (self.cdf(x) - other.cdf(x)).abs())
            .fold(0.0, f64::max)
    }
}

pub fn empirical_cdf(s: &SpectralSample) -> EmpiricalDistribution {
    EmpiricalDistribution::from_sorted(s.values.clone())
}

/// Eigenvalues of the symmetric circulant with first-row parameters
/// `x_0..x_{floor(N/2)}` (and `x_{N-l} = x_l`), by direct cosine sums:
/// `lambda_k = sum_l x_l cos(2 pi k l / N)`. Un-normalized, sorted.
pub fn eigenvalues_circulant(params: &ParameterVector, n: usize) -> Result<Vec<f64>> {
    let expected = free_parameter_count(EnsembleKind::CIRCULANT, n)?;
    if params.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: params.len(),
        });
    }
    let x = params.values();
    let full: Vec<f64> = (0..n).map(|l| x[l.min(n - l)]).collect();
    let table = cosine_table(n);
    let mut eigs: Vec<f64> = (0..n)
        .map(|k| {
            compensated_sum(
                full.iter()
                    .enumerate()
                    .map(|(l, &xl)| xl * table[(k * l) % n]),
            )
        })
        .collect();
    sort_finite(&mut eigs, "circulant eigenvalues")?;
    Ok(eigs)
}

/// `cos(2 pi j / n)` for `j in 0..n`.
pub(crate) fn cosine_table(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect()
}

/// Un-normalized eigenvalues of a matrix drawn from `kind`, using the cosine
/// formula for circulants and the dense solver otherwise.
pub fn sample_eigenvalues<R: rand::Rng + ?Sized>(
    kind: EnsembleKind,
    dist: EntryDistribution,
    n: usize,
    stream: &mut R,
) -> Result<Vec<f64>> {
    if kind == EnsembleKind::new(Structure::CirculantSymmetricToeplitz) {
        let params = sample_parameters(dist, free_parameter_count(kind, n)?, stream)?;
        eigenvalues_circulant(&params, n)
    } else {
        let (_, m) = sample_matrix(kind, dist, n, stream)?;
        eigenvalues(&m)
    }
}

/// Normalized spectra of `draws` independent matrices, draw `d` using
/// substream `(seed, d)`. Draws that fail to converge are dropped; more than
/// 1% dropped is an error. Output order is by draw index regardless of
/// scheduling.
pub fn sample_spectra(
    kind: EnsembleKind,
    dist: EntryDistribution,
    n: usize,
    draws: usize,
    seed: u64,
) -> Result<(Vec<SpectralSample>, usize)> {
    free_parameter_count(kind, n)?;
    let results: Vec<Result<Option<SpectralSample>>> = (0..draws)
        .into_par_iter()
        .map(|d| {
            let mut stream = substream(seed, d as u64);
            match sample_eigenvalues(kind, dist, n, &mut stream) {
                Ok(eigs) => normalize_spectrum(&eigs, n).map(Some),
                Err(Error::NoConvergence { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut spectra = Vec::with_capacity(draws);
    let mut skipped = 0;
    for r in results {
        match r? {
            Some(s) => spectra.push(s),
            None => skipped += 1,
        }
    }
    if skipped * 100 > draws {
        return Err(Error::TooManySkipped { skipped, draws });
    }
    Ok((spectra, skipped))
}

/// Monte Carlo estimate of an averaged spectral moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub m: u32,
    pub mean: f64,
    pub std_error: f64,
    /// Draws that contributed.
    pub draws: usize,
    /// Draws dropped for non-convergence.
    pub skipped: usize,
}

/// Mean and standard error of [`spectral_moment`] of order `m` over `draws`
/// matrices.
pub fn monte_carlo_moment(
    kind: EnsembleKind,
    dist: EntryDistribution,
    n: usize,
    m: u32,
    draws: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    Ok(monte_carlo_moments(kind, dist, n, &[m], draws, seed)?.remove(0))
}

/// Several moment orders estimated from the same draws.
pub fn monte_carlo_moments(
    kind: EnsembleKind,
    dist: EntryDistribution,
    n: usize,
    orders: &[u32],
    draws: usize,
    seed: u64,
) -> Result<Vec<MomentEstimate>> {
    if draws < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 draws, got {draws}"
        )));
    }
    if orders.is_empty() {
        return Err(Error::InvalidArgument("no moment orders requested".into()));
    }
    let (spectra, skipped) = sample_spectra(kind, dist, n, draws, seed)?;
    Ok(estimates_from_spectra(&spectra, orders, skipped))
}

pub fn estimates_from_spectra(
    spectra: &[SpectralSample],
    orders: &[u32],
    skipped: usize,
) -> Vec<MomentEstimate> {
    orders
        .iter()
        .map(|&m| {
            let per_draw: Vec<f64> = spectra.iter().map(|s| spectral_moment(s, m)).collect();
            let (mean, std_error) = mean_and_std_error(&per_draw);
            MomentEstimate {
                m,
                mean,
                std_error,
                draws: spectra.len(),
                skipped,
            }
        })
        .collect()
}
