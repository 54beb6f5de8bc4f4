//! Matrix ensembles and their entry distributions.
//!
//! Matrices are always built un-normalized; the `1/sqrt(N)` scaling is
//! applied once, to eigenvalues, in [`crate::spectra::normalize_spectrum`].
//! Index arguments documented as 1-based follow the usual matrix notation
//! `a_{ij}` with `1 <= i, j <= N`; storage accessors are 0-based.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Law of the independent entries. Every variant has mean 0, variance 1 and
/// finite moments of all orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryDistribution {
    StdNormal,
    /// `+1` or `-1`, each with probability one half.
    Rademacher,
    /// Uniform on `[-sqrt(3), sqrt(3)]`.
    UniformSymmetric,
}

impl EntryDistribution {
    pub const ALL: [EntryDistribution; 3] = [
        EntryDistribution::StdNormal,
        EntryDistribution::Rademacher,
        EntryDistribution::UniformSymmetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntryDistribution::StdNormal => "std-normal",
            EntryDistribution::Rademacher => "rademacher",
            EntryDistribution::UniformSymmetric => "uniform-symmetric",
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            EntryDistribution::StdNormal => rng.sample(StandardNormal),
            EntryDistribution::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            EntryDistribution::UniformSymmetric => rng.random_range(-SQRT_3..SQRT_3),
        }
    }
}

impl fmt::Display for EntryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntryDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EntryDistribution::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown distribution `{s}`")))
    }
}

/// Structural pattern of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    /// `a_ij = b_{min(|i-j|, N-1-|i-j|)}`; even `N` only.
    PalindromicToeplitz,
    /// Symmetric circulant, `a_ij = x_{min(|i-j|, N-|i-j|)}`.
    CirculantSymmetricToeplitz,
    /// `H = T J` for the palindromic Toeplitz `T` with the same parameters.
    PalindromicHankel,
    /// `a_ij = b_{|i-j|}`.
    PlainSymmetricToeplitz,
    /// Independent diagonal, zero elsewhere.
    Diagonal,
}

impl Structure {
    pub const ALL: [Structure; 5] = [
        Structure::PalindromicToeplitz,
        Structure::CirculantSymmetricToeplitz,
        Structure::PalindromicHankel,
        Structure::PlainSymmetricToeplitz,
        Structure::Diagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Structure::PalindromicToeplitz => "palindromic-toeplitz",
            Structure::CirculantSymmetricToeplitz => "circulant-symmetric-toeplitz",
            Structure::PalindromicHankel => "palindromic-hankel",
            Structure::PlainSymmetricToeplitz => "plain-symmetric-toeplitz",
            Structure::Diagonal => "diagonal",
        }
    }

    pub fn requires_even(self) -> bool {
        matches!(
            self,
            Structure::PalindromicToeplitz | Structure::PalindromicHankel
        )
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Structure::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown ensemble kind `{s}`")))
    }
}

/// Which positions are forced to zero on top of the structural pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalPolicy {
    #[default]
    Keep,
    /// `a_ii = 0`; off-diagonal occurrences of `b_0` (the palindromic
    /// corners) are kept.
    ZeroMain,
    /// `a_ii = 0` and `a_1N = a_N1 = 0`.
    ZeroMainAndCorners,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleKind {
    pub structure: Structure,
    pub diagonal: DiagonalPolicy,
}

impl EnsembleKind {
    pub const fn new(structure: Structure) -> Self {
        EnsembleKind {
            structure,
            diagonal: DiagonalPolicy::Keep,
        }
    }

    pub const fn with_diagonal(self, diagonal: DiagonalPolicy) -> Self {
        EnsembleKind {
            structure: self.structure,
            diagonal,
        }
    }

    pub const PALINDROMIC: EnsembleKind = EnsembleKind::new(Structure::PalindromicToeplitz);
    pub const CIRCULANT: EnsembleKind = EnsembleKind::new(Structure::CirculantSymmetricToeplitz);
    pub const HANKEL: EnsembleKind = EnsembleKind::new(Structure::PalindromicHankel);
    pub const PLAIN: EnsembleKind = EnsembleKind::new(Structure::PlainSymmetricToeplitz);
    pub const DIAGONAL: EnsembleKind = EnsembleKind::new(Structure::Diagonal);

    fn check_dimension(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::IncompatibleDimension {
                kind: self.structure.name(),
                n,
                reason: "dimension must be positive",
            });
        }
        if self.structure.requires_even() && !n.is_multiple_of(2) {
            return Err(Error::IncompatibleDimension {
                kind: self.structure.name(),
                n,
                reason: "palindromic ensembles are defined for even N only",
            });
        }
        Ok(())
    }
}

impl From<Structure> for EnsembleKind {
    fn from(structure: Structure) -> Self {
        EnsembleKind::new(structure)
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.diagonal {
            DiagonalPolicy::Keep => write!(f, "{}", self.structure),
            DiagonalPolicy::ZeroMain => write!(f, "{} (zero main diagonal)", self.structure),
            DiagonalPolicy::ZeroMainAndCorners => {
                write!(f, "{} (zero main diagonal and corners)", self.structure)
            }
        }
    }
}

/// Which parameter an entry carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EntryClass {
    Param(usize),
    /// Entry is identically zero.
    Zero,
}

impl EntryClass {
    pub fn param(self) -> Option<usize> {
        match self {
            EntryClass::Param(a) => Some(a),
            EntryClass::Zero => None,
        }
    }
}

/// Independent entries `(b_0, b_1, ...)` of one matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Self {
        ParameterVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(values: Vec<f64>) -> Self {
        ParameterVector(values)
    }
}

/// Number of independent entries of an `n x n` matrix of the given kind.
pub fn free_parameter_count(kind: EnsembleKind, n: usize) -> Result<usize> {
    kind.check_dimension(n)?;
    Ok(match kind.structure {
        Structure::PalindromicToeplitz | Structure::PalindromicHankel => n / 2,
        Structure::CirculantSymmetricToeplitz => n / 2 + 1,
        Structure::PlainSymmetricToeplitz | Structure::Diagonal => n,
    })
}

/// Class of entry `(i, j)`, 1-based. Two entries are forced equal exactly
/// when their classes are equal and not [`EntryClass::Zero`].
pub fn diagonal_class(kind: EnsembleKind, n: usize, i: usize, j: usize) -> Result<EntryClass> {
    kind.check_dimension(n)?;
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange { i, j, n });
    }
    Ok(class_unchecked(kind, n, i - 1, j - 1))
}

/// 0-based class lookup without validation. Callers guarantee `r, c < n`
/// and a compatible `n`.
pub(crate) fn class_unchecked(kind: EnsembleKind, n: usize, r: usize, c: usize) -> EntryClass {
    match kind.diagonal {
        DiagonalPolicy::Keep => {}
        DiagonalPolicy::ZeroMain => {
            if r == c {
                return EntryClass::Zero;
            }
        }
        DiagonalPolicy::ZeroMainAndCorners => {
            if r == c || (r == 0 && c == n - 1) || (r == n - 1 && c == 0) {
                return EntryClass::Zero;
            }
        }
    }
    let d = r.abs_diff(c);
    match kind.structure {
        Structure::PalindromicToeplitz => EntryClass::Param(d.min(n - 1 - d)),
        Structure::CirculantSymmetricToeplitz => EntryClass::Param(d.min(n - d)),
        Structure::PalindromicHankel => {
            let d = r.abs_diff(n - 1 - c);
            EntryClass::Param(d.min(n - 1 - d))
        }
        Structure::PlainSymmetricToeplitz => EntryClass::Param(d),
        Structure::Diagonal => {
            if d == 0 {
                EntryClass::Param(r)
            } else {
                EntryClass::Zero
            }
        }
    }
}

/// Full `n x n` table of classes, row-major, with `None` for structural zeros.
pub fn class_table(kind: EnsembleKind, n: usize) -> Result<Vec<Option<usize>>> {
    kind.check_dimension(n)?;
    let mut table = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            table.push(class_unchecked(kind, n, r, c).param());
        }
    }
    Ok(table)
}

/// `count` independent draws from `dist`.
pub fn sample_parameters<R: Rng + ?Sized>(
    dist: EntryDistribution,
    count: usize,
    stream: &mut R,
) -> Result<ParameterVector> {
    if count == 0 {
        return Err(Error::InvalidArgument(
            "parameter count must be at least 1".into(),
        ));
    }
    Ok(ParameterVector(
        (0..count).map(|_| dist.sample(stream)).collect(),
    ))
}

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Wraps row-major data, rejecting anything that is not exactly symmetric.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: data.len(),
            });
        }
        for r in 0..n {
            for c in 0..r {
                if data[r * n + c] != data[c * n + r] {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({}, {})",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        Ok(SymmetricMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for r in 0..n {
            data[r * n + r] = 1.0;
        }
        SymmetricMatrix { n, data }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (r, &v) in diag.iter().enumerate() {
            data[r * n + r] = v;
        }
        SymmetricMatrix { n, data }
    }

    /// The exchange matrix `J_n`: ones on the anti-diagonal.
    pub fn exchange(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for r in 0..n {
            data[r * n + (n - 1 - r)] = 1.0;
        }
        SymmetricMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// 0-based entry access.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|r| self.data[r * self.n + r]).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Top-left `k x k` block.
    pub fn principal_submatrix(&self, k: usize) -> Result<SymmetricMatrix> {
        if k == 0 || k > self.n {
            return Err(Error::IndexOutOfRange {
                i: k,
                j: k,
                n: self.n,
            });
        }
        let mut data = Vec::with_capacity(k * k);
        for r in 0..k {
            data.extend_from_slice(&self.row(r)[..k]);
        }
        Ok(SymmetricMatrix { n: k, data })
    }

    /// Same matrix with column order reversed (right multiplication by `J`).
    /// The result is symmetric only for persymmetric inputs, so it is
    /// returned as a general square matrix.
    pub fn reverse_columns(&self) -> SquareMatrix {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            data.extend(self.row(r).iter().rev());
        }
        SquareMatrix { n, data }
    }

    pub fn to_square(&self) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            data: self.data.clone(),
        }
    }

    /// Matrix product by direct multiplication.
    pub fn product(&self, other: &SymmetricMatrix) -> Result<SquareMatrix> {
        self.to_square().product(&other.to_square())
    }
}

/// General dense square matrix, row-major. Used for products and powers,
/// which need not be symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|r| self.data[r * self.n + r]).sum()
    }

    pub fn product(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for r in 0..n {
            let out_row = &mut out[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(SquareMatrix { n, data: out })
    }

    /// `self^power` by repeated multiplication; `power >= 1`.
    pub fn power(&self, power: u32) -> Result<SquareMatrix> {
        if power == 0 {
            return Err(Error::InvalidArgument("power must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..power {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl From<SymmetricMatrix> for SquareMatrix {
    fn from(m: SymmetricMatrix) -> Self {
        SquareMatrix {
            n: m.n,
            data: m.data,
        }
    }
}

/// Builds the matrix of `kind` with `a_ij = params[class(i, j)]`.
pub fn build_matrix(
    kind: EnsembleKind,
    params: &ParameterVector,
    n: usize,
) -> Result<SymmetricMatrix> {
    let expected = free_parameter_count(kind, n)?;
    if params.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: params.len(),
        });
    }
    let b = params.values();
    let mut data = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            if let EntryClass::Param(a) = class_unchecked(kind, n, r, c) {
                data[r * n + c] = b[a];
            }
        }
    }
    Ok(SymmetricMatrix { n, data })
}

/// Top-left `k x k` block of `m`.
pub fn principal_submatrix(m: &SymmetricMatrix, k: usize) -> Result<SymmetricMatrix> {
    m.principal_submatrix(k)
}

/// Draws parameters for `kind` at size `n` and builds the matrix.
pub fn sample_matrix<R: Rng + ?Sized>(
    kind: EnsembleKind,
    dist: EntryDistribution,
    n: usize,
    stream: &mut R,
) -> Result<(ParameterVector, SymmetricMatrix)> {
    let count = free_parameter_count(kind, n)?;
    let params = sample_parameters(dist, count, stream)?;
    let m = build_matrix(kind, &params, n)?;
    Ok((params, m))
}
