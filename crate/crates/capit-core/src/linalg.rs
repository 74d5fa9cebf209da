//! Dense real matrix kernel: symmetric eigendecomposition, SVD through the
//! Gram matrix, spectral norm, and the projector (sin-theta) loss.
//!
//! Everything here is deterministic: the same input bytes produce the same
//! output bytes on every run, which the benchmark harness relies on.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Hard cap on implicit-QL iterations per eigenvalue.
const QL_MAX_ITER: usize = 30;

/// Singular values below `RANK_EPS * s_max` are treated as zero for rank
/// decisions (basis completion, pseudo-inverses).
pub const RANK_EPS: f64 = 1e-12;

/// Symmetric eigendecomposition `S = Q diag(d) Q'` with eigenvalues sorted
/// nonincreasing and eigenvectors in the columns of `Q`.
///
/// Householder tridiagonalization followed by implicit-shift QL. Rejects
/// inputs that are not square, not finite, or asymmetric beyond `1e-8`.
pub fn sym_eig(s: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = s.nrows();
    if n == 0 || s.ncols() != n {
        return Err(Error::InvalidInput(format!(
            "sym_eig needs a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    check_finite(s)?;
    for i in 0..n {
        for j in (i + 1)..n {
            if (s[[i, j]] - s[[j, i]]).abs() > 1e-8 {
                return Err(Error::InvalidInput(format!(
                    "asymmetric input: |S[{i},{j}] - S[{j},{i}]| = {:e}",
                    (s[[i, j]] - s[[j, i]]).abs()
                )));
            }
        }
    }

    // Work on the symmetrized copy so that 1e-8-level asymmetry cannot leak
    // into the orthogonal accumulation.
    let mut q = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            q[[i, j]] = 0.5 * (s[[i, j]] + s[[j, i]]);
        }
    }
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tred2(&mut q, &mut d, &mut e);
    tql2(&mut q, &mut d, &mut e)?;

    // Sort eigenpairs by nonincreasing eigenvalue; stable in the original
    // (QL) order for ties so the result is deterministic.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap());
    let values = Array1::from_iter(order.iter().map(|&k| d[k]));
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[[row, new_col]] = q[[row, old_col]];
        }
    }
    Ok((values, vectors))
}

/// Householder reduction to tridiagonal form; `v` holds the input on entry
/// and the accumulated orthogonal transform on exit (EISPACK `tred2`).
fn tred2(v: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[[n - 1, j]];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[[i - 1, j]];
                v[[i, j]] = 0.0;
                v[[j, i]] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[[j, i]] = f;
                g = e[j] + v[[j, j]] * f;
                for k in (j + 1)..i {
                    g += v[[k, j]] * d[k];
                    e[k] += v[[k, j]] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let upd = f * e[k] + g * d[k];
                    v[[k, j]] -= upd;
                }
                d[j] = v[[i - 1, j]];
                v[[i, j]] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..(n - 1) {
        v[[n - 1, i]] = v[[i, i]];
        v[[i, i]] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[[k, i + 1]] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[[k, i + 1]] * v[[k, j]];
                }
                for k in 0..=i {
                    let upd = g * d[k];
                    v[[k, j]] -= upd;
                }
            }
        }
        for k in 0..=i {
            v[[k, i + 1]] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[[n - 1, j]];
        v[[n - 1, j]] = 0.0;
    }
    v[[n - 1, n - 1]] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal (d, e), accumulating rotations into
/// the columns of `v` (EISPACK `tql2`).
fn tql2(v: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    return Err(Error::NumericalFailure(format!(
                        "eigendecomposition failed to converge for eigenvalue {l} after {QL_MAX_ITER} QL iterations"
                    )));
                }

                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut sn = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = sn;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = sn * r;
                    sn = e[i] / r;
                    c = p / r;
                    p = c * d[i] - sn * g;
                    d[i + 1] = h + sn * (c * g + sn * d[i]);
                    for k in 0..n {
                        h = v[[k, i + 1]];
                        v[[k, i + 1]] = sn * v[[k, i]] + c * h;
                        v[[k, i]] = c * v[[k, i]] - sn * h;
                    }
                }
                p = -sn * s2 * c3 * el1 * e[l] / dl1;
                e[l] = sn * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Thin SVD `M = U diag(s) V'` with orthonormal columns in `U` and `V` and
/// singular values sorted nonincreasing.
///
/// Computed through the symmetric eigendecomposition of the smaller Gram
/// matrix. For singular values below `RANK_EPS * s_max` the corresponding
/// left (or right) vectors are completed to an orthonormal set from
/// coordinate vectors, so the reconstruction `U diag(s) V'` is still exact
/// to rounding. When the leading singular values tie, the returned order is
/// whatever the deterministic decomposition produces; callers must not rely
/// on which of the tied vectors comes first.
pub fn svd(m: &Array2<f64>) -> Result<(Array2<f64>, Array1<f64>, Array2<f64>)> {
    let (rows, cols) = m.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidInput("svd of an empty matrix".into()));
    }
    check_finite(m)?;
    if rows >= cols {
        let gram = m.t().dot(m);
        let (vals, v) = sym_eig(&gram)?;
        let s = vals.mapv(|x| x.max(0.0).sqrt());
        let u = left_factor(m, &v, &s);
        Ok((u, s, v))
    } else {
        let gram = m.dot(&m.t());
        let (vals, u) = sym_eig(&gram)?;
        let s = vals.mapv(|x| x.max(0.0).sqrt());
        let mt = m.t().to_owned();
        let v = left_factor(&mt, &u, &s);
        Ok((u, s, v))
    }
}

/// Builds `U = M V diag(1/s)` column by column, re-orthonormalizing by
/// modified Gram-Schmidt and completing rank-deficient tails from coordinate
/// vectors.
fn left_factor(m: &Array2<f64>, v: &Array2<f64>, s: &Array1<f64>) -> Array2<f64> {
    let rows = m.nrows();
    let k = v.ncols();
    let s_max = s.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = RANK_EPS * s_max;
    let mut u = Array2::<f64>::zeros((rows, k));
    for j in 0..k {
        let mut col: Array1<f64> = if s[j] > cutoff && s[j] > 0.0 {
            m.dot(&v.column(j)) / s[j]
        } else {
            Array1::zeros(rows)
        };
        // Orthogonalize against the columns already placed.
        for prev in 0..j {
            let proj = u.column(prev).dot(&col);
            for i in 0..rows {
                col[i] -= proj * u[[i, prev]];
            }
        }
        let mut norm = col.dot(&col).sqrt();
        if norm < 0.5 {
            // Degenerate direction: extend the basis from coordinate vectors.
            'candidates: for cand in 0..rows {
                let mut trial = Array1::<f64>::zeros(rows);
                trial[cand] = 1.0;
                for prev in 0..j {
                    let proj = u.column(prev).dot(&trial);
                    for i in 0..rows {
                        trial[i] -= proj * u[[i, prev]];
                    }
                }
                let trial_norm = trial.dot(&trial).sqrt();
                if trial_norm > 0.5 {
                    col = trial;
                    norm = trial_norm;
                    break 'candidates;
                }
            }
        }
        if norm > 0.0 {
            col /= norm;
        }
        u.column_mut(j).assign(&col);
    }
    u
}

/// Largest singular value.
pub fn spectral_norm(m: &Array2<f64>) -> Result<f64> {
    let (_, s, _) = svd(m)?;
    Ok(s[0])
}

/// Projector distance `L(a, b) = || aa'/|a|^2 - bb'/|b|^2 ||_F`, which equals
/// `sqrt(2) |sin angle(a, b)|`. Invariant to rescaling and sign flips of
/// either argument; ranges over [0, sqrt(2)].
pub fn subspace_loss(a: &Array1<f64>, b: &Array1<f64>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "subspace_loss dimension mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let na = a.dot(a).sqrt();
    let nb = b.dot(b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::InvalidInput(
            "subspace_loss is undefined for the zero vector".into(),
        ));
    }
    let cos = (a.dot(b) / (na * nb)).clamp(-1.0, 1.0);
    Ok((2.0 * (1.0 - cos * cos)).max(0.0).sqrt())
}

/// Frobenius norm.
pub fn frobenius_norm(m: &Array2<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Max absolute entry.
pub fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// `|| M v ||_inf` distance of `omega * sigma` from the identity, as a
/// spectral norm. See `precision::omega_consistency_diagnostic` for the
/// public wrapper.
pub(crate) fn spectral_distance_from_identity(m: &Array2<f64>) -> Result<f64> {
    let n = m.nrows();
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[[i, i]] -= 1.0;
    }
    spectral_norm(&shifted)
}

/// Symmetric positive semidefinite square root `S^{1/2}` with negative
/// eigenvalues clipped to zero.
pub fn psd_sqrt(s: &Array2<f64>) -> Result<Array2<f64>> {
    let (vals, q) = sym_eig(s)?;
    let roots = vals.mapv(|x| x.max(0.0).sqrt());
    Ok(scaled_eigenproduct(&q, &roots))
}

/// Pseudo-inverse square root `S^{-1/2}` treating eigenvalues below
/// `RANK_EPS * max` as zero.
pub fn pinv_sqrt(s: &Array2<f64>) -> Result<Array2<f64>> {
    let (vals, q) = sym_eig(s)?;
    let top = vals.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = RANK_EPS * top;
    let inv_roots = vals.mapv(|x| if x > cutoff { 1.0 / x.sqrt() } else { 0.0 });
    Ok(scaled_eigenproduct(&q, &inv_roots))
}

/// `Q diag(w) Q'` without forming the diagonal matrix.
pub fn scaled_eigenproduct(q: &Array2<f64>, w: &Array1<f64>) -> Array2<f64> {
    let mut scaled = q.clone();
    for (mut col, &weight) in scaled.columns_mut().into_iter().zip(w.iter()) {
        col.mapv_inplace(|x| x * weight);
    }
    scaled.dot(&q.t())
}

pub(crate) fn check_finite(m: &Array2<f64>) -> Result<()> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix contains non-finite entries".into()));
    }
    Ok(())
}

/// Unit-normalizes in place; errors on the zero vector.
pub fn normalize(v: &mut Array1<f64>) -> Result<()> {
    let norm = v.dot(v).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateInput("cannot normalize a zero vector".into()));
    }
    *v /= norm;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use ndarray::array;
    use rand::Rng;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Array2<f64> {
        let mut rng = stream_rng(seed, 0);
        Array2::from_shape_fn((rows, cols), |_| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn sym_eig_identity() {
        let (vals, _) = sym_eig(&Array2::<f64>::eye(3)).unwrap();
        for v in vals.iter() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sym_eig_two_by_two_closed_form() {
        let s = array![[2.0, 1.0], [1.0, 2.0]];
        let (vals, q) = sym_eig(&s).unwrap();
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        let recon = scaled_eigenproduct(&q, &vals);
        assert!(frobenius_norm(&(&recon - &s)) < 1e-12);
    }

    #[test]
    fn sym_eig_rejects_asymmetric() {
        let s = array![[1.0, 0.5], [0.0, 1.0]];
        assert!(matches!(sym_eig(&s), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn sym_eig_reconstructs_random_symmetric() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 7);
            let a = random_matrix(n, n, 100 + seed);
            let s = &a + &a.t();
            let (vals, q) = sym_eig(&s).unwrap();
            // nonincreasing
            for i in 1..n {
                assert!(vals[i] <= vals[i - 1] + 1e-12);
            }
            let recon = scaled_eigenproduct(&q, &vals);
            let rel = frobenius_norm(&(&recon - &s)) / frobenius_norm(&s).max(1.0);
            assert!(rel < 1e-10, "reconstruction error {rel}");
            let qtq = q.t().dot(&q);
            let err = frobenius_norm(&(&qtq - &Array2::<f64>::eye(n)));
            assert!(err < 1e-10, "orthonormality error {err}");
        }
    }

    #[test]
    fn svd_diagonal_case() {
        let m = array![[2.0, 0.0], [0.0, 1.0]];
        let (u, s, v) = svd(&m).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-12);
        assert!((s[1] - 1.0).abs() < 1e-12);
        for mat in [&u, &v] {
            for i in 0..2 {
                for j in 0..2 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((mat[[i, j]].abs() - expect).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn svd_rank_one_frobenius() {
        let m = array![[1.0, 2.0], [2.0, 4.0]];
        let (_, s, _) = svd(&m).unwrap();
        assert!((s[0] - 5.0).abs() < 1e-10);
        assert!(s[1].abs() < 1e-10);
    }

    #[test]
    fn svd_reconstruction_and_orthonormality_random() {
        // shapes up to 50x50, covering tall, wide, and square
        let shapes = [(3, 2), (2, 3), (5, 5), (10, 4), (4, 10), (50, 50), (37, 50), (50, 21)];
        let mut count = 0;
        for (si, &(r, c)) in shapes.iter().cycle().take(100).enumerate() {
            let m = random_matrix(r, c, 500 + si as u64);
            let (u, s, v) = svd(&m).unwrap();
            let k = r.min(c);
            assert_eq!(u.ncols(), k.max(r.min(c)));
            for i in 1..s.len() {
                assert!(s[i] <= s[i - 1] + 1e-12);
                assert!(s[i] >= 0.0);
            }
            let mut us = u.clone();
            for (mut col, &sv) in us.columns_mut().into_iter().zip(s.iter()) {
                col.mapv_inplace(|x| x * sv);
            }
            let recon = us.dot(&v.t());
            let rel = frobenius_norm(&(&recon - &m)) / frobenius_norm(&m).max(1e-30);
            assert!(rel < 1e-10, "shape {r}x{c} reconstruction {rel}");
            let utu = u.t().dot(&u);
            let vtv = v.t().dot(&v);
            let k = utu.nrows();
            assert!(frobenius_norm(&(&utu - &Array2::<f64>::eye(k))) < 1e-9);
            let k = vtv.nrows();
            assert!(frobenius_norm(&(&vtv - &Array2::<f64>::eye(k))) < 1e-9);
            count += 1;
        }
        assert_eq!(count, 100);
    }

    #[test]
    fn svd_zero_matrix() {
        let m = Array2::<f64>::zeros((3, 2));
        let (u, s, v) = svd(&m).unwrap();
        assert!(s.iter().all(|&x| x == 0.0));
        let utu = u.t().dot(&u);
        assert!(frobenius_norm(&(&utu - &Array2::<f64>::eye(2))) < 1e-12);
        let vtv = v.t().dot(&v);
        assert!(frobenius_norm(&(&vtv - &Array2::<f64>::eye(2))) < 1e-12);
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&array![[3.0, 0.0], [0.0, 1.0]]).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(spectral_norm(&Array2::<f64>::zeros((4, 3))).unwrap(), 0.0);
        // rank-1 uv' with |u| = 2, |v| = 3 has norm 6
        let u = array![2.0, 0.0];
        let v = array![0.0, 3.0, 0.0];
        let mut m = Array2::<f64>::zeros((2, 3));
        for i in 0..2 {
            for j in 0..3 {
                m[[i, j]] = u[i] * v[j];
            }
        }
        assert!((spectral_norm(&m).unwrap() - 6.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_norm_matches_unit_vector_sup() {
        let m = random_matrix(10, 10, 42);
        let norm = spectral_norm(&m).unwrap();
        let mut rng = stream_rng(43, 0);
        let mut best = 0.0f64;
        let mut best_v = Array1::<f64>::zeros(10);
        for _ in 0..1000 {
            let mut v = Array1::from_shape_fn(10, |_| rng.random_range(-1.0..1.0f64));
            let n = v.dot(&v).sqrt();
            if n == 0.0 {
                continue;
            }
            v /= n;
            let mv = m.dot(&v);
            let len = mv.dot(&mv).sqrt();
            if len > best {
                best = len;
                best_v = v;
            }
        }
        // every ||Mv|| over unit vectors is a lower bound
        assert!(best <= norm + 1e-9);
        // power iteration from the best random start tightens the lower
        // bound to the first singular value
        let gram = m.t().dot(&m);
        let mut v = best_v;
        for _ in 0..500 {
            let w = gram.dot(&v);
            let n = w.dot(&w).sqrt();
            if n == 0.0 {
                break;
            }
            v = w / n;
        }
        let mv = m.dot(&v);
        let refined = mv.dot(&mv).sqrt();
        assert!((norm - refined).abs() < 1e-6, "norm {norm} vs refined bound {refined}");
    }

    #[test]
    fn subspace_loss_examples() {
        let e1 = array![1.0, 0.0];
        let e2 = array![0.0, 1.0];
        assert!(subspace_loss(&e1, &e1).unwrap() < 1e-15);
        let minus3 = array![-3.0, 0.0];
        assert!(subspace_loss(&e1, &minus3).unwrap() < 1e-15);
        let loss = subspace_loss(&e1, &e2).unwrap();
        assert!((loss - 2.0f64.sqrt()).abs() < 1e-12);
        let diag = array![1.0 / 2.0f64.sqrt(), 1.0 / 2.0f64.sqrt()];
        assert!((subspace_loss(&diag, &e1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subspace_loss_zero_vector_rejected() {
        let z = array![0.0, 0.0];
        let e1 = array![1.0, 0.0];
        assert!(subspace_loss(&z, &e1).is_err());
    }

    #[test]
    fn subspace_loss_scale_and_sign_invariance() {
        let mut rng = stream_rng(7, 0);
        for _ in 0..200 {
            let n = rng.random_range(2..8usize);
            let a = Array1::from_shape_fn(n, |_| rng.random_range(-1.0..1.0f64));
            let b = Array1::from_shape_fn(n, |_| rng.random_range(-1.0..1.0f64));
            if a.dot(&a) == 0.0 || b.dot(&b) == 0.0 {
                continue;
            }
            let c: f64 = rng.random_range(0.1..5.0);
            let d: f64 = -rng.random_range(0.1..5.0);
            let base = subspace_loss(&a, &b).unwrap();
            let scaled = subspace_loss(&(&a * c), &(&b * d)).unwrap();
            assert!((base - scaled).abs() < 1e-12);
        }
    }

    #[test]
    fn subspace_loss_triangle_inequality() {
        let mut rng = stream_rng(8, 0);
        for _ in 0..500 {
            let n = rng.random_range(2..6usize);
            let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
                Array1::from_shape_fn(n, |_| rng.random_range(-1.0..1.0f64))
            };
            let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            if [&a, &b, &c].iter().any(|v| v.dot(*v) < 1e-12) {
                continue;
            }
            let ac = subspace_loss(&a, &c).unwrap();
            let ab = subspace_loss(&a, &b).unwrap();
            let bc = subspace_loss(&b, &c).unwrap();
            assert!(ac <= ab + bc + 1e-10);
        }
    }

    #[test]
    fn pinv_sqrt_inverts_pd_matrices() {
        let a = random_matrix(5, 5, 77);
        let s = a.dot(&a.t()) + Array2::<f64>::eye(5);
        let r = pinv_sqrt(&s).unwrap();
        let should_be_inv = r.dot(&r);
        let prod = should_be_inv.dot(&s);
        assert!(frobenius_norm(&(&prod - &Array2::<f64>::eye(5))) < 1e-8);
    }
}
