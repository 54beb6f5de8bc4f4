use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{sample_matrix, EnsembleKind, EntryDistribution};
use crate::error::Result;
use crate::numeric::{compensated_sum, mean_and_std_error};
use crate::rng::substream;
use crate::spectra::sample_spectra;
use crate::stats::{raw_spacings, SpacingModel, SpacingSample};

/// Pooled nearest-neighbour spacings from many spectra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingExperiment {
    pub sample: SpacingSample,
    pub ks_poisson: f64,
    pub ks_goe: f64,
    pub skipped: usize,
}

/// Differences between normalized eigenvalues `lo..=hi` (1-based) of `draws`
/// matrices, pooled and rescaled to mean one, with KS distances to the
/// exponential and Wigner-surmise laws.
pub fn spacing_experiment(
    kind: EnsembleKind,
    dist: EntryDistribution,
    n: usize,
    draws: usize,
    lo: usize,
    hi: usize,
    seed: u64,
) -> Result<SpacingExperiment> {
    let (spectra, skipped) = sample_spectra(kind, dist, n, draws, seed)?;
    let mut raw = Vec::with_capacity(spectra.len() * hi.saturating_sub(lo));
    for s in &spectra {
        raw.extend(raw_spacings(s, lo, hi)?);
    }
    let sample = SpacingSample::from_raw(raw, lo, hi)?;
    Ok(SpacingExperiment {
        ks_poisson: sample.ks_to(SpacingModel::PoissonExp)?,
        ks_goe: sample.ks_to(SpacingModel::WignerGoe)?,
        sample,
        skipped,
    })
}

/// Fluctuations of `M_2(A_N) = tr(A^2) / N^2` over the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fluctuations {
    pub n: usize,
    pub draws: usize,
    pub mean: f64,
    pub std_error: f64,
    pub variance: f64,
    /// `E|M_2 - E M_2|^4`, estimated.
    pub fourth_central: f64,
}

/// Estimates the spread of the second moment directly from the entries
/// (`tr(A^2) = sum a_ij^2`), which avoids eigensolves.
pub fn m2_fluctuations(
    kind: EnsembleKind,
    dist: EntryDistribution,
    n: usize,
    draws: usize,
    seed: u64,
) -> Result<Fluctuations> {
    let values: Vec<f64> = (0..draws)
        .into_par_iter()
        .map(|d| {
            let (_, m) = sample_matrix(kind, dist, n, &mut substream(seed, d as u64))?;
            Ok(compensated_sum(m.as_slice().iter().map(|v| v * v)) / (n * n) as f64)
        })
        .collect::<Result<_>>()?;
    let (mean, std_error) = mean_and_std_error(&values);
    let k = values.len() as f64;
    let variance = compensated_sum(values.iter().map(|v| (v - mean).powi(2))) / (k - 1.0);
    let fourth_central = compensated_sum(values.iter().map(|v| (v - mean).powi(4))) / k;
    Ok(Fluctuations {
        n,
        draws: values.len(),
        mean,
        std_error,
        variance,
        fourth_central,
    })
}
