use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::DEFAULT_BUDGET;
use crate::ensembles::{class_table, EnsembleKind};
use crate::error::{Error, Result};

/// Perfect matching of the `2k` cyclic edges of a trace term. Edge `a`
/// (1-based) joins indices `i_a` and `i_{a+1}`, with `i_{2k+1} = i_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Matching {
    /// `(a, b)` with `a < b`, sorted by `a`.
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Validates that `pairs` partitions `1..=2k`.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let edges = 2 * pairs.len();
        let mut seen = vec![false; edges + 1];
        let mut norm = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let (a, b) = (a.min(b), a.max(b));
            if a == 0 || b > edges || a == b || seen[a] || seen[b] {
                return Err(Error::InvalidArgument(format!(
                    "pairs do not form a perfect matching of 1..={edges}"
                )));
            }
            seen[a] = true;
            seen[b] = true;
            norm.push((a, b));
        }
        if norm.is_empty() {
            return Err(Error::InvalidArgument("empty matching".into()));
        }
        norm.sort_unstable();
        Ok(Matching { pairs: norm })
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Edge paired with `edge` (both 1-based).
    pub fn partner(&self, edge: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == edge {
                Some(b)
            } else if b == edge {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Number of crossing pairs `a < c < b < d`. Zero exactly for the
    /// non-crossing matchings.
    pub fn crossings(&self) -> usize {
        let mut count = 0;
        for (x, &(a, b)) in self.pairs.iter().enumerate() {
            for &(c, d) in &self.pairs[x + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

/// All `(2k-1)!!` perfect matchings of `1..=2k`, for `1 <= k <= 6`.
///
/// Canonical order: the smallest free edge is paired with each larger free
/// edge in increasing order, recursively.
pub fn enumerate_matchings(k: usize) -> Result<Vec<Matching>> {
    if !(1..=6).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "matching size k must be in 1..=6, got {k}"
        )));
    }
    let mut out = Vec::new();
    let mut free: Vec<usize> = (1..=2 * k).collect();
    let mut current = Vec::with_capacity(k);
    build(&mut free, &mut current, &mut out);
    Ok(out)
}

fn build(free: &mut Vec<usize>, current: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
    if free.is_empty() {
        out.push(Matching {
            pairs: current.clone(),
        });
        return;
    }
    let first = free.remove(0);
    for pos in 0..free.len() {
        let other = free.remove(pos);
        current.push((first, other));
        build(free, current, out);
        current.pop();
        free.insert(pos, other);
    }
    free.insert(0, first);
}

/// Number of index tuples in `{1..N}^{2k}` whose edges realize `matching`:
/// paired edges share a class, edges of different pairs have different
/// classes, and no edge lands on a structural zero.
pub fn matching_solution_count(kind: EnsembleKind, matching: &Matching, n: usize) -> Result<u64> {
    matching_solution_count_with_budget(kind, matching, n, DEFAULT_BUDGET)
}

pub fn matching_solution_count_with_budget(
    kind: EnsembleKind,
    matching: &Matching,
    n: usize,
    budget: u128,
) -> Result<u64> {
    let table = class_table(kind, n)?;
    let edges = 2 * matching.k();
    let required = (n as u128).checked_pow(edges as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    // partner[e] for 0-based edges
    let partner: Vec<usize> = (1..=edges)
        .map(|e| matching.partner(e).expect("perfect matching") - 1)
        .collect();

    let total = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut search = PairSearch {
                table: &table,
                n,
                partner: &partner,
                idx: vec![0; edges],
                classes: vec![0; edges],
            };
            search.idx[0] = first;
            search.descend(1)
        })
        .sum();
    Ok(total)
}

struct PairSearch<'a> {
    table: &'a [Option<usize>],
    n: usize,
    partner: &'a [usize],
    idx: Vec<usize>,
    classes: Vec<usize>,
}

impl PairSearch<'_> {
    /// Whether edge `e` may take class `c` given edges `0..e` already set.
    fn admissible(&self, e: usize, c: usize) -> bool {
        let p = self.partner[e];
        if p < e {
            self.classes[p] == c
        } else {
            !self.classes[..e].contains(&c)
        }
    }

    fn descend(&mut self, depth: usize) -> u64 {
        let edges = self.idx.len();
        let prev = self.idx[depth - 1];
        let edge = depth - 1;
        let mut count = 0;
        for next in 0..self.n {
            let Some(c) = self.table[prev * self.n + next] else {
                continue;
            };
            if !self.admissible(edge, c) {
                continue;
            }
            self.idx[depth] = next;
            self.classes[edge] = c;
            if depth + 1 == edges {
                // closing edge (i_{2k}, i_1)
                let last = edges - 1;
                if let Some(c) = self.table[next * self.n + self.idx[0]] {
                    if self.admissible(last, c) {
                        count += 1;
                    }
                }
            } else {
                count += self.descend(depth + 1);
            }
        }
        count
    }
}

/// `(N, count / N^{k+1})` for each `N` in `ns`.
pub fn matching_contribution_series(
    kind: EnsembleKind,
    matching: &Matching,
    ns: &[usize],
) -> Result<Vec<(usize, f64)>> {
    ns.iter()
        .map(|&n| {
            let count = matching_solution_count(kind, matching, n)?;
            Ok((n, count as f64 / (n as f64).powi(matching.k() as i32 + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_double_factorials() {
        let expected = [1, 3, 15, 105, 945, 10395];
        for (k, &e) in (1..=6).zip(&expected) {
            let ms = enumerate_matchings(k).unwrap();
            assert_eq!(ms.len(), e);
            let mut sorted = ms.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), e, "duplicates at k={k}");
        }
        assert!(enumerate_matchings(0).is_err());
        assert!(enumerate_matchings(7).is_err());
    }

    #[test]
    fn canonical_order_k2() {
        let ms = enumerate_matchings(2).unwrap();
        let pairs: Vec<_> = ms.iter().map(|m| m.pairs().to_vec()).collect();
        assert_eq!(
            pairs,
            vec![
                vec![(1, 2), (3, 4)],
                vec![(1, 3), (2, 4)],
                vec![(1, 4), (2, 3)],
            ]
        );
        assert_eq!(ms[1].crossings(), 1);
        assert_eq!(ms[0].crossings(), 0);
        assert_eq!(ms[1].to_string(), "(1 3)(2 4)");
    }

    #[test]
    fn matching_validation() {
        assert!(Matching::new(vec![(1, 2), (2, 3)]).is_err());
        assert!(Matching::new(vec![(1, 5), (2, 3)]).is_err());
        let m = Matching::new(vec![(4, 2), (3, 1)]).unwrap();
        assert_eq!(m.pairs(), &[(1, 3), (2, 4)]);
        assert_eq!(m.partner(4), Some(2));
    }

    #[test]
    fn single_pair_is_n_squared() {
        let m = &enumerate_matchings(1).unwrap()[0];
        for kind in [
            EnsembleKind::PALINDROMIC,
            EnsembleKind::PLAIN,
            EnsembleKind::CIRCULANT,
        ] {
            for n in [2, 4, 10] {
                assert_eq!(matching_solution_count(kind, m, n).unwrap(), (n * n) as u64);
            }
        }
    }

    #[test]
    fn diagonal_has_no_pairings() {
        for m in enumerate_matchings(2).unwrap() {
            let series =
                matching_contribution_series(EnsembleKind::DIAGONAL, &m, &[8, 16]).unwrap();
            assert!(series.iter().all(|&(_, v)| v == 0.0));
        }
    }

    #[test]
    fn budget_enforced() {
        let m = &enumerate_matchings(2).unwrap()[1];
        assert!(matches!(
            matching_solution_count_with_budget(EnsembleKind::PLAIN, m, 10, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
