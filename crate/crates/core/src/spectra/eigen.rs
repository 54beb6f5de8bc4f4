//! Symmetric eigenvalues: Householder reduction to tridiagonal form, then
//! implicit QL with Wilkinson-type shifts. Eigenvalues only.

use crate::ensembles::SymmetricMatrix;
use crate::error::{Error, Result};
use crate::numeric::sort_finite;

/// Iteration cap per eigenvalue.
pub const MAX_ITERATIONS: usize = 50;

/// Sorted eigenvalues of `m`. An off-diagonal element `e_i` is deflated when
/// `|e_i| <= tol * (|d_i| + |d_{i+1}|)`.
pub fn eigenvalues_dense(m: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let (mut d, mut e) = tridiagonalize(m);
    tridiagonal_ql(&mut d, &mut e, tol)?;
    sort_finite(&mut d, "eigenvalues")?;
    Ok(d)
}

/// [`eigenvalues_dense`] at machine-epsilon tolerance.
pub fn eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    eigenvalues_dense(m, f64::EPSILON)
}

/// Returns `(diagonal, subdiagonal)` of an orthogonally similar tridiagonal
/// matrix. `subdiagonal[i]` couples rows `i - 1` and `i`; `subdiagonal[0]`
/// is zero.
///
/// The working copy is kept fully symmetric so every inner product runs
/// along contiguous rows.
pub(crate) fn tridiagonalize(m: &SymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut p = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let row_i = i * n;
        if l == 0 {
            e[i] = a[row_i];
            continue;
        }
        let scale: f64 = a[row_i..=row_i + l].iter().map(|v| v.abs()).sum();
        if scale == 0.0 {
            e[i] = a[row_i + l];
            continue;
        }
        let mut h = 0.0;
        for k in 0..=l {
            u[k] = a[row_i + k] / scale;
            h += u[k] * u[k];
        }
        let f = u[l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        u[l] = f - g;

        // p = A u / h, restricted to the leading (l+1) block
        let mut f_acc = 0.0;
        for j in 0..=l {
            let row_j = &a[j * n..j * n + l + 1];
            let dot: f64 = row_j.iter().zip(&u[..=l]).map(|(x, y)| x * y).sum();
            p[j] = dot / h;
            f_acc += p[j] * u[j];
        }
        let hh = f_acc / (h + h);
        for j in 0..=l {
            p[j] -= hh * u[j];
        }
        // A <- A - u p^T - p u^T
        for j in 0..=l {
            let (uj, pj) = (u[j], p[j]);
            let row_j = &mut a[j * n..j * n + l + 1];
            for (k, x) in row_j.iter_mut().enumerate() {
                *x -= uj * p[k] + pj * u[k];
            }
        }
    }
    for (r, dr) in d.iter_mut().enumerate() {
        *dr = a[r * n + r];
    }
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix; eigenvalues overwrite `d`.
/// `e` is in the layout produced by [`tridiagonalize`] and is destroyed.
pub(crate) fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], tol: f64) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= tol * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: MAX_ITERATIONS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{build_matrix, EnsembleKind, ParameterVector};

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal_matrix() {
        let m = SymmetricMatrix::from_diagonal(&[3.0, 1.0, 2.0]);
        close(&eigenvalues(&m).unwrap(), &[1.0, 2.0, 3.0], 1e-14);
    }

    #[test]
    fn exchange_two() {
        close(
            &eigenvalues(&SymmetricMatrix::exchange(2)).unwrap(),
            &[-1.0, 1.0],
            1e-14,
        );
    }

    #[test]
    fn exchange_odd_and_even() {
        // J_n has floor(n/2) eigenvalues -1 and ceil(n/2) eigenvalues +1
        for n in [5, 8] {
            let ev = eigenvalues(&SymmetricMatrix::exchange(n)).unwrap();
            let neg = n / 2;
            let mut expected = vec![-1.0; neg];
            expected.extend(vec![1.0; n - neg]);
            close(&ev, &expected, 1e-12);
        }
    }

    #[test]
    fn rank_one_palindromic() {
        for c in [0.5, 1.0, 3.0] {
            let m =
                build_matrix(EnsembleKind::PALINDROMIC, &ParameterVector::new(vec![c]), 2).unwrap();
            close(&eigenvalues(&m).unwrap(), &[0.0, 2.0 * c], 1e-14);
        }
    }

    #[test]
    fn one_by_one_and_zero() {
        close(
            &eigenvalues(&SymmetricMatrix::from_diagonal(&[-4.0])).unwrap(),
            &[-4.0],
            0.0,
        );
        let z = SymmetricMatrix::from_diagonal(&[0.0; 6]);
        close(&eigenvalues(&z).unwrap(), &[0.0; 6], 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let m = SymmetricMatrix::from_diagonal(&[1.0, f64::NAN]);
        assert!(matches!(eigenvalues(&m), Err(Error::NonFinite(_))));
        let m = SymmetricMatrix::identity(2);
        assert!(eigenvalues_dense(&m, 0.0).is_err());
    }

    #[test]
    fn path_graph_spectrum() {
        // tridiagonal 1s: eigenvalues 2 cos(k pi/(n+1))
        let n = 12;
        let mut data = vec![0.0; n * n];
        for r in 0..n - 1 {
            data[r * n + r + 1] = 1.0;
            data[(r + 1) * n + r] = 1.0;
        }
        let m = SymmetricMatrix::from_row_major(n, data).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        close(&eigenvalues(&m).unwrap(), &expected, 1e-12);
    }
}
