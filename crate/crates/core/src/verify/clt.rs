//! Almost-sure CLT for cosine-weighted sums of i.i.d. variables.
//!
//! For `X_1..X_n` i.i.d. with mean 0 and variance 1,
//! `S_n^(k) = (n/2)^{-1/2} * sum_{l=1}^{n} X_l cos(pi k l / n)`, `k = 1..n`,
//! has an empirical distribution that converges uniformly to the standard
//! normal for almost every realization. These values are, up to one term,
//! the normalized eigenvalues of the symmetric circulant built from the same
//! variables.

use serde::Serialize;

use super::CheckReport;
use crate::ensembles::{sample_parameters, EntryDistribution};
use crate::error::{Error, Result};
use crate::numeric::median;
use crate::rng::substream;
use crate::stats::{ks_statistic, phi};

/// Single-run acceptance threshold on the KS distance to the normal law is
/// `KS_CONSTANT / sqrt(n)`.
pub const KS_CONSTANT: f64 = 1.63;

/// `S_n^(k)` for `k = 1..=n` from `x = (X_1, ..., X_n)`.
pub fn cosine_sums_half(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    // cos(pi j / n) for j in 0..2n
    let table: Vec<f64> = (0..2 * n)
        .map(|j| (std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect();
    let norm = (n as f64 / 2.0).sqrt();
    (1..=n)
        .map(|k| {
            let mut acc = 0.0;
            let mut phase = 0;
            for &xl in x {
                phase = (phase + k) % (2 * n);
                acc += xl * table[phase];
            }
            acc / norm
        })
        .collect()
}

/// `S_N^(k) = N^{-1/2} sum_{l=0}^{N-1} X_l cos(2 pi k l / N)` for
/// `k = 0..N`, where `half = (X_0, ..., X_{floor(N/2)})` and
/// `X_{N-l} = X_l`. These are the circulant eigenvalues divided by `sqrt(N)`.
pub fn cosine_sums_full(half: &[f64], n: usize) -> Result<Vec<f64>> {
    if half.len() != n / 2 + 1 || n == 0 {
        return Err(Error::LengthMismatch {
            expected: n / 2 + 1,
            actual: half.len(),
        });
    }
    let table = crate::spectra::cosine_table(n);
    let norm = (n as f64).sqrt();
    Ok((0..n)
        .map(|k| {
            let mut acc = 0.0;
            for l in 0..n {
                acc += half[l.min(n - l)] * table[(k * l) % n];
            }
            acc / norm
        })
        .collect())
}

/// KS distance of the sums built from given `X_1..X_n` to the normal CDF,
/// with a report against `KS_CONSTANT / sqrt(n)`.
pub fn clt_from_values(x: &[f64]) -> Result<(f64, CheckReport)> {
    let n = x.len();
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "CLT experiment needs even n >= 4, got {n}"
        )));
    }
    let mut sums = cosine_sums_half(x);
    crate::numeric::sort_finite(&mut sums, "cosine sums")?;
    let ks = ks_statistic(&sums, phi)?;
    let bound = KS_CONSTANT / (n as f64).sqrt();
    let report = CheckReport::within(
        "clt",
        ks,
        bound,
        0.0,
        format!("n = {n}, KS = {ks:.6} vs {KS_CONSTANT}/sqrt(n) = {bound:.6}"),
    );
    Ok((ks, report))
}

/// Draws `X_1..X_n` from substream `(seed, 0)` and runs [`clt_from_values`].
pub fn clt_experiment(dist: EntryDistribution, n: usize, seed: u64) -> Result<(f64, CheckReport)> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "CLT experiment needs even n >= 4, got {n}"
        )));
    }
    let x = sample_parameters(dist, n, &mut substream(seed, 0))?;
    clt_from_values(x.values())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltTrend {
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    /// `ks[s][i]`: seed `s`, size `ns[i]`.
    pub ks: Vec<Vec<f64>>,
    pub median_ks: Vec<f64>,
    pub report: CheckReport,
}

/// For each seed, draws `X_1..X_{8 n0}` once and evaluates the KS distance
/// on the nested prefixes of length `n0, 2n0, 4n0, 8n0`. Passes when the
/// median over seeds strictly decreases along the sizes.
pub fn clt_trend(dist: EntryDistribution, n0: usize, seeds: &[u64]) -> Result<CltTrend> {
    use rayon::prelude::*;
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("no seeds".into()));
    }
    let ns: Vec<usize> = (0..4).map(|p| n0 << p).collect();
    let ks: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&seed| {
            let x = sample_parameters(dist, ns[3], &mut substream(seed, 0))?;
            ns.iter()
                .map(|&n| clt_from_values(&x.values()[..n]).map(|(k, _)| k))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let median_ks: Vec<f64> = (0..ns.len())
        .map(|i| median(&ks.iter().map(|row| row[i]).collect::<Vec<_>>()))
        .collect();
    let increases = median_ks.windows(2).filter(|w| w[1] >= w[0]).count();
    let worst_step = median_ks
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let report = CheckReport::within(
        "clt-trend",
        worst_step,
        0.0,
        0.0,
        format!("n = {ns:?}, median KS = {median_ks:?}"),
    )
    .require(increases == 0, "median KS strictly decreasing");
    Ok(CltTrend {
        ns,
        seeds: seeds.to_vec(),
        ks,
        median_ks,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::ParameterVector;
    use crate::spectra::eigenvalues_circulant;

    #[test]
    fn degenerate_sample_gives_half() {
        let (ks, _) = clt_from_values(&[0.0; 8]).unwrap();
        assert_eq!(ks, 0.5);
        assert!(clt_from_values(&[0.0; 7]).is_err());
        assert!(clt_from_values(&[0.0; 2]).is_err());
    }

    #[test]
    fn half_sums_match_direct_cosines() {
        let x = [0.3, -1.1, 2.0, 0.4, -0.7, 1.5];
        let n = x.len();
        let s = cosine_sums_half(&x);
        for k in 1..=n {
            let direct: f64 = (1..=n)
                .map(|l| x[l - 1] * (std::f64::consts::PI * (k * l) as f64 / n as f64).cos())
                .sum::<f64>()
                / (n as f64 / 2.0).sqrt();
            assert!((s[k - 1] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn full_sums_are_normalized_circulant_eigenvalues() {
        let half = vec![0.2, -1.0, 0.5, 1.7, -0.3];
        for n in [8, 9] {
            let mut s = cosine_sums_full(&half, n).unwrap();
            s.sort_by(f64::total_cmp);
            let eigs = eigenvalues_circulant(&ParameterVector::new(half.clone()), n).unwrap();
            for (a, b) in s.iter().zip(&eigs) {
                assert!((a - b / (n as f64).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn full_sums_symmetric_in_k() {
        let half = vec![0.9, -0.4, 1.3, 0.1, -2.2];
        let n = 8;
        let s = cosine_sums_full(&half, n).unwrap();
        for k in 1..n {
            assert!((s[k] - s[n - k]).abs() < 1e-12);
        }
    }

    #[test]
    fn index_conventions_differ_by_one_term() {
        // N = 2n with X_{N-l} = X_l; full - half = (X_0 - X_n (-1)^k) / sqrt(2n)
        let n = 6;
        let x0 = 0.8;
        let x = [0.3, -1.1, 2.0, 0.4, -0.7, 1.5];
        let mut half = vec![x0];
        half.extend_from_slice(&x);
        let full = cosine_sums_full(&half, 2 * n).unwrap();
        let h = cosine_sums_half(&x);
        for k in 1..=n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let expected = (x0 - x[n - 1] * sign) / ((2 * n) as f64).sqrt();
            assert!((full[k] - h[k - 1] - expected).abs() < 1e-12, "k={k}");
        }
    }
}
