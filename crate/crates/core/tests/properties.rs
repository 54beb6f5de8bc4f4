use proptest::prelude::*;

use structured_spectra::ensembles::class_table;
use structured_spectra::spectra::{eigenvalues, normalize_spectrum, spectral_moment};
use structured_spectra::stats::{ks_statistic, phi, SpacingSample};
use structured_spectra::{
    build_matrix, diagonal_class, free_parameter_count, EnsembleKind, EntryClass, ParameterVector,
    Structure,
};

fn kind_strategy() -> impl Strategy<Value = EnsembleKind> {
    prop::sample::select(Structure::ALL.to_vec()).prop_map(EnsembleKind::new)
}

/// A kind with a compatible dimension of at most `max + 1`, and parameters
/// for it.
fn matrix_case(max: usize) -> impl Strategy<Value = (EnsembleKind, usize, ParameterVector)> {
    (kind_strategy(), 1..=max).prop_flat_map(|(kind, raw)| {
        let n = if kind.structure.requires_even() {
            raw + raw % 2
        } else {
            raw
        };
        let count = free_parameter_count(kind, n).unwrap();
        (
            Just(kind),
            Just(n),
            prop::collection::vec(-10.0..10.0_f64, count).prop_map(ParameterVector::new),
        )
    })
}

/// Inverse of the normal CDF by bisection, for building quantile samples.
fn normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrices_are_exactly_symmetric((kind, n, params) in matrix_case(40)) {
        let m = build_matrix(kind, &params, n).unwrap();
        for r in 0..n {
            for c in 0..n {
                prop_assert_eq!(m.get(r, c).to_bits(), m.get(c, r).to_bits());
            }
        }
    }

    #[test]
    fn entries_follow_their_class((kind, n, params) in matrix_case(30)) {
        let m = build_matrix(kind, &params, n).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let expected = match diagonal_class(kind, n, i, j).unwrap() {
                    EntryClass::Param(a) => params.values()[a],
                    EntryClass::Zero => 0.0,
                };
                prop_assert_eq!(m.get(i - 1, j - 1), expected);
            }
        }
    }

    #[test]
    fn palindromic_equalities_are_exactly_the_classes(half in 1usize..12, seed in any::<u64>()) {
        let n = 2 * half;
        // generic parameters: pairwise distinct
        let params = ParameterVector::new(
            (0..half).map(|a| 1.0 + a as f64 + (seed % 997) as f64 * 1e-3).collect(),
        );
        let m = build_matrix(EnsembleKind::PALINDROMIC, &params, n).unwrap();
        let table = class_table(EnsembleKind::PALINDROMIC, n).unwrap();
        for x in 0..n * n {
            for y in 0..n * n {
                let equal_values = m.as_slice()[x] == m.as_slice()[y];
                prop_assert_eq!(equal_values, table[x] == table[y]);
            }
        }
    }

    #[test]
    fn class_count_matches_parameter_count((kind, n, _params) in matrix_case(40)) {
        let table = class_table(kind, n).unwrap();
        let mut seen: Vec<usize> = table.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), free_parameter_count(kind, n).unwrap());
        let has_zero = table.iter().any(Option::is_none);
        prop_assert_eq!(has_zero, kind.structure == Structure::Diagonal && n > 1);
    }

    #[test]
    fn hankel_is_reflected_toeplitz(half in 1usize..20, values in prop::collection::vec(-5.0..5.0_f64, 20)) {
        let n = 2 * half;
        let params = ParameterVector::new(values[..half].to_vec());
        let h = build_matrix(EnsembleKind::HANKEL, &params, n).unwrap();
        let t = build_matrix(EnsembleKind::PALINDROMIC, &params, n).unwrap();
        prop_assert_eq!(h.to_square(), t.reverse_columns());
    }

    #[test]
    fn trace_identity((kind, n, params) in matrix_case(24)) {
        let a = build_matrix(kind, &params, n).unwrap();
        let s = normalize_spectrum(&eigenvalues(&a).unwrap(), n).unwrap();
        let sq = a.to_square();
        let a2 = sq.power(2).unwrap();
        let a4 = sq.power(4).unwrap();
        for (m, tr) in [(2u32, a2.trace()), (4, a4.trace())] {
            let from_spectrum = (n as f64).powf(m as f64 / 2.0 + 1.0) * spectral_moment(&s, m);
            let rel = (from_spectrum - tr).abs() / tr.abs().max(1e-300);
            prop_assert!(rel <= 1e-8, "m = {}: {} vs {}", m, from_spectrum, tr);
        }
    }

    #[test]
    fn even_palindromic_is_singular(half in 1usize..30, values in prop::collection::vec(-5.0..5.0_f64, 30)) {
        let n = 2 * half;
        let a = build_matrix(EnsembleKind::PALINDROMIC, &ParameterVector::new(values[..half].to_vec()), n).unwrap();
        let eigs = eigenvalues(&a).unwrap();
        let smallest = eigs.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        prop_assert!(smallest <= 1e-8 * a.frobenius_norm().max(1.0), "{}", smallest);
    }

    #[test]
    fn negation_flips_odd_moments((kind, n, params) in matrix_case(30), m in 0u32..8) {
        let a = build_matrix(kind, &params, n).unwrap();
        let s = normalize_spectrum(&eigenvalues(&a).unwrap(), n).unwrap();
        let neg = s.negated();
        let (p, q) = (spectral_moment(&s, m), spectral_moment(&neg, m));
        let expected = if m % 2 == 1 { -p } else { p };
        prop_assert!((q - expected).abs() <= 1e-12 * p.abs().max(1.0), "{} vs {}", q, expected);
    }

    #[test]
    fn ks_after_adding_quantile_points(
        mut sample in prop::collection::vec(-4.0..4.0_f64, 1..50),
        q in 1usize..200,
    ) {
        sample.sort_by(f64::total_cmp);
        let before = ks_statistic(&sample, phi).unwrap();
        let mut joined = sample.clone();
        joined.extend((1..=q).map(|i| normal_quantile((i as f64 - 0.5) / q as f64)));
        joined.sort_by(f64::total_cmp);
        let after = ks_statistic(&joined, phi).unwrap();
        prop_assert!((0.0..=1.0).contains(&after));
        prop_assert!(after <= before.max(0.5 / q as f64) + 1e-12, "{} > max({}, 1/(2q))", after, before);
    }

    #[test]
    fn spacings_have_unit_mean(raw in prop::collection::vec(0.0..100.0_f64, 1..300)) {
        prop_assume!(raw.iter().any(|&v| v > 0.0));
        let s = SpacingSample::from_raw(raw, 1, 2).unwrap();
        prop_assert!((s.mean() - 1.0).abs() <= 1e-12);
        prop_assert!(s.spacings.iter().all(|&v| v >= 0.0));
    }
}
