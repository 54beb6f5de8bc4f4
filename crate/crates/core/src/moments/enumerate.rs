use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{distribution_moment_exact, DEFAULT_BUDGET};
use crate::ensembles::{class_table, diagonal_class, EnsembleKind, EntryClass, EntryDistribution};
use crate::error::{Error, Result};

/// Longest cycle the enumerator accepts.
const MAX_ORDER: u32 = 32;

/// Multiplicities of the distinct classes hit by one index tuple, sorted
/// descending. `(2, 2)` means two classes, each hit twice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(pub Vec<u32>);

impl Signature {
    /// All parts equal to 2.
    pub fn is_paired(&self) -> bool {
        self.0.iter().all(|&c| c == 2)
    }

    fn from_key(key: u64) -> Signature {
        // unary code, see `signature_key`
        let mut parts = Vec::new();
        let mut run = 0;
        let mut k = key;
        while k != 0 {
            if k & 1 == 1 {
                run += 1;
            } else {
                parts.push(run);
                run = 0;
            }
            k >>= 1;
        }
        if run > 0 {
            parts.push(run);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Signature(parts)
    }

    /// `prod_j E[X^{n_j}]`.
    pub fn weight(&self, dist: EntryDistribution) -> Ratio<i128> {
        self.0
            .iter()
            .map(|&c| distribution_moment_exact(dist, c))
            .product()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Entry classes hit by the cyclic edges of one index tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalProfile {
    /// Class of edge `(i_a, i_{a+1})` for each `a`.
    pub classes: Vec<EntryClass>,
    /// Class index to number of edges carrying it; structural zeros excluded.
    pub multiplicities: BTreeMap<usize, u32>,
}

impl DiagonalProfile {
    /// Profile of the 1-based tuple `(i_1, ..., i_m)`.
    pub fn of_tuple(kind: EnsembleKind, n: usize, tuple: &[usize]) -> Result<Self> {
        let m = tuple.len();
        let mut classes = Vec::with_capacity(m);
        let mut multiplicities = BTreeMap::new();
        for a in 0..m {
            let c = diagonal_class(kind, n, tuple[a], tuple[(a + 1) % m])?;
            if let EntryClass::Param(p) = c {
                *multiplicities.entry(p).or_insert(0) += 1;
            }
            classes.push(c);
        }
        Ok(DiagonalProfile {
            classes,
            multiplicities,
        })
    }

    pub fn hits_zero(&self) -> bool {
        self.classes.contains(&EntryClass::Zero)
    }

    pub fn signature(&self) -> Signature {
        let mut parts: Vec<u32> = self.multiplicities.values().copied().collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Signature(parts)
    }
}

/// Exact expected moment at finite `N`, with its tuple census.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactMomentReport {
    pub kind: EnsembleKind,
    pub n: usize,
    pub m: u32,
    pub dist: EntryDistribution,
    pub value: f64,
    /// `sum_signatures count * weight`, exact; `value` is this over `N^{m/2+1}`.
    #[serde(serialize_with = "ratio_as_string")]
    pub weighted_sum: Ratio<i128>,
    pub tuple_count_by_profile: BTreeMap<Signature, u64>,
    /// Tuples with at least one edge on a structurally zero entry.
    pub structural_zero_tuples: u64,
    pub total_tuples: u64,
}

fn ratio_as_string<S: Serializer>(r: &Ratio<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl ExactMomentReport {
    /// Count of tuples whose signature is all pairs.
    pub fn paired_count(&self) -> u64 {
        self.tuple_count_by_profile
            .iter()
            .filter(|(s, _)| s.is_paired())
            .map(|(_, c)| c)
            .sum()
    }

    /// Count of tuples with some class hit three or more times.
    pub fn heavy_count(&self) -> u64 {
        self.tuple_count_by_profile
            .iter()
            .filter(|(s, _)| s.0.iter().any(|&c| c >= 3))
            .map(|(_, c)| c)
            .sum()
    }

    /// `N^{m/2+1}`.
    pub fn normalizer(&self) -> f64 {
        normalizer(self.n, self.m)
    }

    /// Contribution of one signature to `value`.
    pub fn signature_term(&self, sig: &Signature) -> f64 {
        let count = self.tuple_count_by_profile.get(sig).copied().unwrap_or(0);
        let w = Ratio::from_integer(count as i128) * sig.weight(self.dist);
        ratio_to_f64(w) / self.normalizer()
    }
}

pub(crate) fn normalizer(n: usize, m: u32) -> f64 {
    (n as f64).powf(m as f64 / 2.0 + 1.0)
}

pub(crate) fn ratio_to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Brute-force expected `m`-th moment under the default budget.
pub fn exact_expected_moment(
    kind: EnsembleKind,
    n: usize,
    m: u32,
    dist: EntryDistribution,
) -> Result<ExactMomentReport> {
    exact_expected_moment_with_budget(kind, n, m, dist, DEFAULT_BUDGET)
}

pub fn exact_expected_moment_with_budget(
    kind: EnsembleKind,
    n: usize,
    m: u32,
    dist: EntryDistribution,
    budget: u128,
) -> Result<ExactMomentReport> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "moment order must be in 1..={MAX_ORDER}, got {m}"
        )));
    }
    let table = class_table(kind, n)?;
    let required = (n as u128).checked_pow(m).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let census = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut c = Census::default();
            let mut walker = Walker {
                table: &table,
                n,
                m: m as usize,
                idx: vec![0; m as usize],
                classes: vec![0; m as usize],
                scratch: vec![0; m as usize],
            };
            walker.idx[0] = first;
            walker.descend(1, &mut c);
            c
        })
        .reduce(Census::default, Census::merge);

    let mut by_profile = BTreeMap::new();
    let mut weighted_sum = Ratio::from_integer(0_i128);
    for (key, count) in census.counts {
        let sig = Signature::from_key(key);
        weighted_sum += Ratio::from_integer(count as i128) * sig.weight(dist);
        by_profile.insert(sig, count);
    }
    let value = ratio_to_f64(weighted_sum) / normalizer(n, m);
    Ok(ExactMomentReport {
        kind,
        n,
        m,
        dist,
        value,
        weighted_sum,
        tuple_count_by_profile: by_profile,
        structural_zero_tuples: census.zero,
        total_tuples: required as u64,
    })
}

#[derive(Default)]
struct Census {
    /// (signature key, count); a handful of entries, searched linearly
    counts: Vec<(u64, u64)>,
    zero: u64,
}

impl Census {
    fn add(&mut self, key: u64) {
        match self.counts.iter_mut().find(|(k, _)| *k == key) {
            Some((_, c)) => *c += 1,
            None => self.counts.push((key, 1)),
        }
    }

    fn merge(mut self, other: Census) -> Census {
        for (key, count) in other.counts {
            match self.counts.iter_mut().find(|(k, _)| *k == key) {
                Some((_, c)) => *c += count,
                None => self.counts.push((key, count)),
            }
        }
        self.zero += other.zero;
        self
    }
}

struct Walker<'a> {
    table: &'a [Option<usize>],
    n: usize,
    m: usize,
    idx: Vec<usize>,
    classes: Vec<usize>,
    scratch: Vec<usize>,
}

impl Walker<'_> {
    /// Positions `0..depth` are fixed; edges `0..depth-1` are classified.
    fn descend(&mut self, depth: usize, census: &mut Census) {
        if depth == self.m {
            let last = self.idx[self.m - 1];
            match self.table[last * self.n + self.idx[0]] {
                Some(c) => {
                    self.classes[self.m - 1] = c;
                    census.add(signature_key(&self.classes, &mut self.scratch));
                }
                None => census.zero += 1,
            }
            return;
        }
        let prev = self.idx[depth - 1];
        let remaining = (self.m - depth - 1) as u32;
        for next in 0..self.n {
            match self.table[prev * self.n + next] {
                Some(c) => {
                    self.idx[depth] = next;
                    self.classes[depth - 1] = c;
                    self.descend(depth + 1, census);
                }
                None => census.zero += (self.n as u64).pow(remaining),
            }
        }
    }
}

/// Encodes the multiset of class multiplicities as a unary bit string: each
/// multiplicity `c`, largest first, becomes `c` one-bits followed by a zero.
/// Uses at most `2m <= 64` bits.
fn signature_key(classes: &[usize], scratch: &mut [usize]) -> u64 {
    scratch.copy_from_slice(classes);
    scratch.sort_unstable();
    let mut mult = [0u32; MAX_ORDER as usize];
    let mut parts = 0;
    let mut i = 0;
    while i < scratch.len() {
        let mut j = i + 1;
        while j < scratch.len() && scratch[j] == scratch[i] {
            j += 1;
        }
        mult[parts] = (j - i) as u32;
        parts += 1;
        i = j;
    }
    let mult = &mut mult[..parts];
    mult.sort_unstable_by(|a, b| b.cmp(a));
    let mut key = 0u64;
    let mut bit = 0;
    for &c in mult.iter() {
        for _ in 0..c {
            key |= 1 << bit;
            bit += 1;
        }
        bit += 1;
    }
    key
}
