//! Combinatorial side of the method of moments.
//!
//! The expected `m`-th moment of the normalized spectral measure is
//!
//! ```text
//! E[M_m(A_N)] = N^{-(m/2+1)} * sum_{i_1..i_m} E[a_{i_1 i_2} a_{i_2 i_3} ... a_{i_m i_1}]
//! ```
//!
//! For every index tuple the expectation factors over the distinct entry
//! classes hit by the `m` cyclic edges: a class hit `n_j` times contributes
//! the `n_j`-th moment of the entry law. [`exact_expected_moment`] walks all
//! `N^m` tuples and tallies them by the sorted multiplicity signature; the
//! expectation follows exactly from those integer counts.
//!
//! [`matching_solution_count`] counts the tuples whose edges pair up
//! according to one fixed perfect matching, with different pairs on
//! different classes. Summed over all matchings these are exactly the tuples
//! of signature `(2, 2, ..., 2)`.

mod enumerate;
mod matchings;

pub use enumerate::{
    exact_expected_moment, exact_expected_moment_with_budget, DiagonalProfile, ExactMomentReport,
    Signature,
};
pub use matchings::{
    enumerate_matchings, matching_contribution_series, matching_solution_count,
    matching_solution_count_with_budget, Matching,
};

use num_rational::Ratio;

use crate::ensembles::EntryDistribution;

/// Default cap on the number of enumerated tuples.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// `(m-1)!!` for even `m` (with `0!! = 1`), zero for odd `m`.
pub fn gaussian_moment(m: u32) -> f64 {
    double_factorial_odd(m) as f64
}

/// Exact `E[X^m]` for the standard normal as an integer.
fn double_factorial_odd(m: u32) -> i128 {
    if m % 2 == 1 {
        return 0;
    }
    (1..m as i128).step_by(2).product()
}

/// `j`-th moment of the entry law.
pub fn distribution_moment(dist: EntryDistribution, j: u32) -> f64 {
    let r = distribution_moment_exact(dist, j);
    *r.numer() as f64 / *r.denom() as f64
}

/// `j`-th moment of the entry law as an exact rational.
pub fn distribution_moment_exact(dist: EntryDistribution, j: u32) -> Ratio<i128> {
    if j % 2 == 1 {
        return Ratio::from_integer(0);
    }
    match dist {
        EntryDistribution::StdNormal => Ratio::from_integer(double_factorial_odd(j)),
        EntryDistribution::Rademacher => Ratio::from_integer(1),
        EntryDistribution::UniformSymmetric => Ratio::new(3_i128.pow(j / 2), j as i128 + 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_moment(0), 1.0);
        assert_eq!(gaussian_moment(2), 1.0);
        assert_eq!(gaussian_moment(4), 3.0);
        assert_eq!(gaussian_moment(6), 15.0);
        assert_eq!(gaussian_moment(8), 105.0);
        assert_eq!(gaussian_moment(7), 0.0);
    }

    #[test]
    fn distribution_examples() {
        assert_eq!(distribution_moment(EntryDistribution::StdNormal, 2), 1.0);
        assert_eq!(distribution_moment(EntryDistribution::Rademacher, 4), 1.0);
        assert_eq!(
            distribution_moment_exact(EntryDistribution::UniformSymmetric, 4),
            Ratio::new(9, 5)
        );
        for d in EntryDistribution::ALL {
            assert_eq!(distribution_moment(d, 0), 1.0);
            assert_eq!(distribution_moment(d, 1), 0.0);
            assert_eq!(distribution_moment(d, 2), 1.0);
            assert_eq!(distribution_moment(d, 5), 0.0);
        }
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
        let h = (b - a) / intervals as f64;
        let mut s = f(a) + f(b);
        for i in 1..intervals {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + h * i as f64);
        }
        s * h / 3.0
    }

    #[test]
    fn uniform_moments_by_quadrature() {
        let r3 = 3.0_f64.sqrt();
        for j in [2_u32, 4, 6, 8] {
            let q = simpson(|x| x.powi(j as i32) / (2.0 * r3), -r3, r3, 2000);
            let exact = distribution_moment(EntryDistribution::UniformSymmetric, j);
            assert!((q - exact).abs() < 1e-9, "j={j}: {q} vs {exact}");
        }
    }

    #[test]
    fn gaussian_moments_by_quadrature() {
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        for j in [2_u32, 4, 6, 8] {
            let q = simpson(|x| x.powi(j as i32) * pdf(x), -20.0, 20.0, 20_000);
            assert!((q - gaussian_moment(j)).abs() < 1e-8, "j={j}: {q}");
        }
    }
}
