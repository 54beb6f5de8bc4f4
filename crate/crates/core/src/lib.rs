//! Palindromic Toeplitz, symmetric circulant, palindromic Hankel and plain
//! symmetric Toeplitz random-matrix ensembles.
//!
//! The crate builds the ensembles, computes their normalized spectra, and
//! checks their limiting moments two independent ways: Monte Carlo sampling
//! through a dense eigensolver ([`spectra`]) and exact enumeration of the
//! trace expansion ([`moments`]). [`verify`] holds executable checks of the
//! structural relations between the ensembles.

pub mod ensembles;
pub mod error;
pub mod moments;
pub mod numeric;
pub mod rng;
pub mod spectra;
pub mod stats;
pub mod verify;

pub use ensembles::{
    build_matrix, diagonal_class, free_parameter_count, principal_submatrix, sample_parameters,
    DiagonalPolicy, EnsembleKind, EntryClass, EntryDistribution, ParameterVector, SquareMatrix,
    Structure, SymmetricMatrix,
};
pub use error::{Error, Result};
pub use moments::{ExactMomentReport, Matching};
pub use spectra::{EmpiricalDistribution, MomentEstimate, SpectralSample};
pub use stats::{Histogram, SpacingSample};
pub use verify::CheckReport;
