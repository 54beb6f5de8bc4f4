//! Randomized sweeps behind the `verify` command and the acceptance tests.

use rayon::prelude::*;

use super::{
    check_b0_irrelevance, check_hankel_toeplitz, check_submatrix_identity, clt_trend,
    submatrix_spectral_checks, CheckReport,
};
use crate::ensembles::{
    free_parameter_count, sample_matrix, sample_parameters, EnsembleKind, EntryDistribution,
    Structure,
};
use crate::error::Result;
use crate::rng::{mix64, substream};

/// Sweep dimensions and repetitions.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub seeds: usize,
    pub base_seed: u64,
    pub dist: EntryDistribution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ns: vec![10, 50, 100, 200],
            seeds: 50,
            base_seed: 20_240_601,
            dist: EntryDistribution::StdNormal,
        }
    }
}

impl SweepConfig {
    /// Distinct master seed per (label, N); draw index is the repetition.
    fn seed_for(&self, label: u64, n: usize) -> u64 {
        mix64(self.base_seed ^ mix64(label.wrapping_mul(1_000_003) ^ n as u64))
    }

    fn cases(&self) -> Vec<(usize, u64)> {
        self.ns
            .iter()
            .flat_map(|&n| (0..self.seeds as u64).map(move |s| (n, s)))
            .collect()
    }
}

/// Interlacing and rank inequality for every ensemble kind (odd `N` skipped
/// for the palindromic kinds).
pub fn interlacing_and_rank(cfg: &SweepConfig) -> Result<(CheckReport, CheckReport)> {
    let mut cases = Vec::new();
    for (label, structure) in Structure::ALL.into_iter().enumerate() {
        for (n, s) in cfg.cases() {
            if structure.requires_even() && n % 2 != 0 {
                continue;
            }
            cases.push((structure, cfg.seed_for(label as u64, n), n, s));
        }
    }
    let results: Vec<(CheckReport, CheckReport)> = cases
        .par_iter()
        .map(|&(structure, seed, n, s)| {
            let (_, m) = sample_matrix(
                EnsembleKind::new(structure),
                cfg.dist,
                n,
                &mut substream(seed, s),
            )?;
            submatrix_spectral_checks(&m)
        })
        .collect::<Result<_>>()?;
    let (inter, rank): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok((
        CheckReport::aggregate("interlacing", &inter),
        CheckReport::aggregate("rank-inequality", &rank),
    ))
}

pub fn hankel(cfg: &SweepConfig) -> Result<CheckReport> {
    let reports: Vec<CheckReport> = cfg
        .cases()
        .par_iter()
        .filter(|(n, _)| n % 2 == 0)
        .map(|&(n, s)| {
            let count = free_parameter_count(EnsembleKind::HANKEL, n)?;
            let params =
                sample_parameters(cfg.dist, count, &mut substream(cfg.seed_for(100, n), s))?;
            check_hankel_toeplitz(&params, n)
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::aggregate("hankel-toeplitz", &reports))
}

pub fn submatrix(cfg: &SweepConfig) -> Result<CheckReport> {
    let reports: Vec<CheckReport> = cfg
        .cases()
        .par_iter()
        .filter(|(n, _)| n % 2 == 0)
        .map(|&(n, s)| {
            let count = free_parameter_count(EnsembleKind::PALINDROMIC, n)?;
            let params =
                sample_parameters(cfg.dist, count, &mut substream(cfg.seed_for(200, n), s))?;
            check_submatrix_identity(&params, n)
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::aggregate("submatrix-identity", &reports))
}

pub fn b0(cfg: &SweepConfig) -> Result<CheckReport> {
    let reports: Vec<CheckReport> = cfg
        .ns
        .iter()
        .filter(|&&n| n % 2 == 0)
        .map(|&n| check_b0_irrelevance(cfg.dist, n, cfg.seeds, cfg.seed_for(300, n)))
        .collect::<Result<_>>()?;
    Ok(CheckReport::aggregate("b0-irrelevance", &reports))
}

/// Median KS trend over `n = 1024..8192` with ten seeds.
pub fn clt(cfg: &SweepConfig) -> Result<CheckReport> {
    let seeds: Vec<u64> = (0..10).map(|s| cfg.seed_for(400, s)).collect();
    Ok(clt_trend(cfg.dist, 1024, &seeds)?.report)
}
