//! Fixtures shared by the criterion benches.

use structured_spectra::rng::substream;
use structured_spectra::{build_matrix, free_parameter_count, sample_parameters};
use structured_spectra::{EnsembleKind, EntryDistribution, ParameterVector, SymmetricMatrix};

/// Deterministic standard-normal parameters for `kind` at size `n`.
pub fn params(kind: EnsembleKind, n: usize, seed: u64) -> ParameterVector {
    let count = free_parameter_count(kind, n).expect("valid dimension");
    sample_parameters(EntryDistribution::StdNormal, count, &mut substream(seed, 0))
        .expect("count is positive")
}

pub fn matrix(kind: EnsembleKind, n: usize, seed: u64) -> SymmetricMatrix {
    build_matrix(kind, &params(kind, n, seed), n).expect("valid dimension")
}
