//! CLIME column programs: for each j, minimize `||b||_1` subject to
//! `|| S b - e_j ||_inf <= lambda`.
//!
//! Solver: two-block ADMM with the splitting `z1 = b`, `z2 = S b - e_j`. The
//! b-step solves `(I + S^2) b = (z1 - u1) + S (z2 + e_j - u2)`, whose matrix
//! is independent of the penalty parameter, so one dense inverse is shared by
//! every column, every penalty value, and every warm start. All unconverged
//! columns iterate together as one matrix per step; converged columns drop
//! out at checkpoints.
//!
//! At each checkpoint a column attempts an active-set polish: solve the
//! square system on the identified support against the identified active
//! constraints and verify the full KKT conditions (primal feasibility, dual
//! sign pattern, dual feasibility). A column that passes exits with an
//! exactly feasible, certified-optimal solution; otherwise ADMM continues
//! until the splitting residual falls under the tolerance.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg;

/// Primal-residual tolerance for [`clime_columns`].
pub const FINAL_TOLERANCE: f64 = 1e-7;

/// Relaxed tolerance for cross-validation grid sweeps; the selected lambda is
/// refit at [`FINAL_TOLERANCE`].
pub(crate) const CV_TOLERANCE: f64 = 1e-5;

const MAX_ITER: usize = 30_000;
const CHECK_EVERY: usize = 25;
const OVER_RELAX: f64 = 1.7;
const RHO_INIT: f64 = 32.0;
const RHO_MIN: f64 = 1.0;
const RHO_MAX: f64 = 256.0;
/// Polish is attempted only when the candidate support is this small; denser
/// solutions fall back to plain ADMM convergence.
const POLISH_MAX_SUPPORT: usize = 64;

/// Warm-start state carried between lambda values of a cross-validation
/// sweep: primal matrix and scaled duals per column, plus per-column rho.
#[derive(Debug, Clone)]
pub struct ClimeWarm {
    b: Array2<f64>,
    u1: Array2<f64>,
    u2: Array2<f64>,
    rho: Vec<f64>,
}

/// Raw (unsymmetrized) CLIME columns at the default tolerance. Column j of
/// the result solves the j-th constrained l1 program; every column satisfies
/// `|| S w_j - e_j ||_inf <= lambda + 1e-6`.
pub fn clime_columns(s_hat: &Array2<f64>, lambda: f64) -> Result<Array2<f64>> {
    solve_columns(s_hat, lambda, None, FINAL_TOLERANCE).map(|(b, _)| b)
}

/// [`clime_columns`] with an explicit tolerance.
pub fn clime_columns_with_tolerance(
    s_hat: &Array2<f64>,
    lambda: f64,
    tol: f64,
) -> Result<Array2<f64>> {
    solve_columns(s_hat, lambda, None, tol).map(|(b, _)| b)
}

pub(crate) fn solve_columns(
    s_hat: &Array2<f64>,
    lambda: f64,
    warm: Option<&ClimeWarm>,
    tol: f64,
) -> Result<(Array2<f64>, ClimeWarm)> {
    let p = s_hat.nrows();
    if p == 0 || s_hat.ncols() != p {
        return Err(Error::InvalidInput("CLIME needs a square covariance".into()));
    }
    if lambda < 0.0 {
        return Err(Error::InvalidConfig(format!("CLIME lambda {lambda} < 0")));
    }
    linalg::check_finite(s_hat)?;

    let (vals, q) = linalg::sym_eig(s_hat)?;
    let inv_gram = vals.mapv(|v| 1.0 / (1.0 + v * v));
    let d = linalg::scaled_eigenproduct(&q, &inv_gram); // (I + S^2)^{-1}

    let (mut b, mut u1, mut u2, mut rho) = match warm {
        Some(w) if w.b.nrows() == p => {
            (w.b.clone(), w.u1.clone(), w.u2.clone(), w.rho.clone())
        }
        _ => (
            Array2::zeros((p, p)),
            Array2::zeros((p, p)),
            Array2::zeros((p, p)),
            vec![RHO_INIT; p],
        ),
    };
    let mut z1 = b.clone();
    let mut z2 = {
        let mut sb = s_hat.dot(&b);
        for j in 0..p {
            sb[[j, j]] -= 1.0;
        }
        sb.mapv(|v| v.clamp(-lambda, lambda))
    };

    let mut out = Array2::<f64>::zeros((p, p));
    let mut active: Vec<usize> = (0..p).collect();
    let mut iters_done = 0usize;

    while !active.is_empty() {
        if iters_done >= MAX_ITER {
            return Err(Error::NumericalFailure(format!(
                "CLIME column {} did not converge within {MAX_ITER} ADMM iterations (lambda = {lambda})",
                active[0]
            )));
        }
        let m = active.len();
        // Compact the active columns into contiguous blocks.
        let mut z1a = gather(&z1, &active);
        let mut z2a = gather(&z2, &active);
        let mut u1a = gather(&u1, &active);
        let mut u2a = gather(&u2, &active);
        let rho_a: Vec<f64> = active.iter().map(|&j| rho[j]).collect();

        let mut ba = Array2::<f64>::zeros((p, m));
        let mut sba = Array2::<f64>::zeros((p, m));
        let mut dz1 = 0.0f64; // tracked on the last inner iteration
        let mut dz2 = 0.0f64;
        let steps = CHECK_EVERY.min(MAX_ITER - iters_done);
        for step in 0..steps {
            // rhs = (z1 - u1) + S (z2 - u2) + S[:, j]
            let w2 = &z2a - &u2a;
            ba.assign(&(&z1a - &u1a));
            ba += &s_hat.dot(&w2);
            for (idx, &j) in active.iter().enumerate() {
                for i in 0..p {
                    ba[[i, idx]] += s_hat[[i, j]];
                }
            }
            let bnew = d.dot(&ba);
            ba.assign(&bnew);
            sba.assign(&s_hat.dot(&ba));

            let last = step + 1 == steps;
            if last {
                dz1 = 0.0;
                dz2 = 0.0;
            }
            for (idx, &j) in active.iter().enumerate() {
                let rho_j = rho_a[idx];
                let thresh = 1.0 / rho_j;
                for i in 0..p {
                    let b_r = OVER_RELAX * ba[[i, idx]] + (1.0 - OVER_RELAX) * z1a[[i, idx]];
                    let e_i = if i == j { 1.0 } else { 0.0 };
                    let sb_r = OVER_RELAX * sba[[i, idx]]
                        + (1.0 - OVER_RELAX) * (z2a[[i, idx]] + e_i);
                    let v1 = b_r + u1a[[i, idx]];
                    let z1_new = v1.signum() * (v1.abs() - thresh).max(0.0);
                    let z2_new = (sb_r - e_i + u2a[[i, idx]]).clamp(-lambda, lambda);
                    if last {
                        dz1 = dz1.max((z1_new - z1a[[i, idx]]).abs() * rho_j);
                        dz2 = dz2.max((z2_new - z2a[[i, idx]]).abs() * rho_j);
                    }
                    u1a[[i, idx]] += b_r - z1_new;
                    u2a[[i, idx]] += sb_r - e_i - z2_new;
                    z1a[[i, idx]] = z1_new;
                    z2a[[i, idx]] = z2_new;
                }
            }
        }
        iters_done += steps;

        // Checkpoint: residuals, polish, adaptation, and compaction.
        let mut still_active = Vec::with_capacity(m);
        for (idx, &j) in active.iter().enumerate() {
            let mut r1 = 0.0f64;
            let mut r2 = 0.0f64;
            for i in 0..p {
                r1 = r1.max((ba[[i, idx]] - z1a[[i, idx]]).abs());
                let e_i = if i == j { 1.0 } else { 0.0 };
                r2 = r2.max((sba[[i, idx]] - e_i - z2a[[i, idx]]).abs());
            }
            let r = r1.max(r2);
            let s_res = dz1.max(dz2);
            if r < tol && s_res < tol * 10.0 {
                out.column_mut(j).assign(&ba.column(idx));
                scatter_back(&mut b, &mut u1, &mut u2, &ba, &u1a, &u2a, idx, j);
                z1.column_mut(j).assign(&z1a.column(idx));
                z2.column_mut(j).assign(&z2a.column(idx));
                continue;
            }
            let z1_col = z1a.column(idx).to_owned();
            let mut resid = sba.column(idx).to_owned();
            resid[j] -= 1.0;
            if let Some(polished) = try_polish(s_hat, j, lambda, &z1_col, &resid) {
                let obj_polished: f64 = polished.iter().map(|v| v.abs()).sum();
                let obj_iterate: f64 = z1a.column(idx).iter().map(|v| v.abs()).sum();
                if obj_polished <= obj_iterate + 1e-6 {
                    out.column_mut(j).assign(&polished);
                    scatter_back(&mut b, &mut u1, &mut u2, &ba, &u1a, &u2a, idx, j);
                    z1.column_mut(j).assign(&z1a.column(idx));
                    z2.column_mut(j).assign(&z2a.column(idx));
                    continue;
                }
            }
            // Residual balancing within fixed bounds; the scaled duals move
            // with rho to keep y = rho * u unchanged.
            if r > 10.0 * s_res && rho[j] < RHO_MAX {
                rho[j] *= 2.0;
                for i in 0..p {
                    u1a[[i, idx]] /= 2.0;
                    u2a[[i, idx]] /= 2.0;
                }
            } else if s_res > 10.0 * r && rho[j] > RHO_MIN {
                rho[j] /= 2.0;
                for i in 0..p {
                    u1a[[i, idx]] *= 2.0;
                    u2a[[i, idx]] *= 2.0;
                }
            }
            scatter_back(&mut b, &mut u1, &mut u2, &ba, &u1a, &u2a, idx, j);
            z1.column_mut(j).assign(&z1a.column(idx));
            z2.column_mut(j).assign(&z2a.column(idx));
            still_active.push(j);
        }
        active = still_active;
    }

    Ok((out, ClimeWarm { b, u1, u2, rho }))
}

fn gather(src: &Array2<f64>, cols: &[usize]) -> Array2<f64> {
    let p = src.nrows();
    let mut out = Array2::<f64>::zeros((p, cols.len()));
    for (idx, &j) in cols.iter().enumerate() {
        out.column_mut(idx).assign(&src.column(j));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn scatter_back(
    b: &mut Array2<f64>,
    u1: &mut Array2<f64>,
    u2: &mut Array2<f64>,
    ba: &Array2<f64>,
    u1a: &Array2<f64>,
    u2a: &Array2<f64>,
    idx: usize,
    j: usize,
) {
    b.column_mut(j).assign(&ba.column(idx));
    u1.column_mut(j).assign(&u1a.column(idx));
    u2.column_mut(j).assign(&u2a.column(idx));
}

/// Active-set polish with full KKT verification. Returns a certified optimal
/// column or None.
fn try_polish(
    s_hat: &Array2<f64>,
    j: usize,
    lambda: f64,
    z1_col: &Array1<f64>,
    resid: &Array1<f64>,
) -> Option<Array1<f64>> {
    let p = s_hat.nrows();
    let support: Vec<usize> = (0..p).filter(|&i| z1_col[i].abs() > 1e-7).collect();
    let k = support.len();
    if k == 0 || k > POLISH_MAX_SUPPORT.min(p) {
        return None;
    }
    let mut candidates: Vec<usize> =
        (0..p).filter(|&i| resid[i].abs() >= lambda - 1e-5).collect();
    if candidates.len() < k {
        return None;
    }
    candidates.sort_by(|&a, &c| resid[c].abs().partial_cmp(&resid[a].abs()).unwrap());
    let constraint_rows = &candidates[..k];
    let signs: Vec<f64> = constraint_rows.iter().map(|&i| resid[i].signum()).collect();

    let mut m = Array2::<f64>::zeros((k, k));
    for (r, &ci) in constraint_rows.iter().enumerate() {
        for (c, &ti) in support.iter().enumerate() {
            m[[r, c]] = s_hat[[ci, ti]];
        }
    }
    let rhs = Array1::from_shape_fn(k, |r| {
        let e = if constraint_rows[r] == j { 1.0 } else { 0.0 };
        e + lambda * signs[r]
    });
    let beta_support = solve_square(&m, &rhs)?;

    let mut beta = Array1::<f64>::zeros(p);
    for (c, &ti) in support.iter().enumerate() {
        beta[ti] = beta_support[c];
    }
    // Primal feasibility, exactly.
    let mut full_resid = s_hat.dot(&beta);
    full_resid[j] -= 1.0;
    if full_resid.iter().any(|v| v.abs() > lambda + 1e-9) {
        return None;
    }
    // Stationarity duals on the support, then global dual feasibility.
    let neg_signs = Array1::from_shape_fn(k, |c| -beta_support[c].signum());
    let y = solve_square(&m.t().to_owned(), &neg_signs)?;
    for (r, &yr) in y.iter().enumerate() {
        if yr * signs[r] < -1e-8 {
            return None;
        }
    }
    let mut dual = Array1::<f64>::zeros(p);
    for (r, &ci) in constraint_rows.iter().enumerate() {
        let yr = y[r];
        for i in 0..p {
            dual[i] += s_hat[[i, ci]] * yr;
        }
    }
    if dual.iter().any(|v| v.abs() > 1.0 + 1e-6) {
        return None;
    }
    Some(beta)
}

/// Dense LU solve with partial pivoting; None on (near-)singularity.
fn solve_square(a: &Array2<f64>, b: &Array1<f64>) -> Option<Array1<f64>> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut x = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot = col;
        let mut best = lu[[perm[col], col]].abs();
        for row in (col + 1)..n {
            let v = lu[[perm[row], col]].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best < 1e-12 {
            return None;
        }
        perm.swap(col, pivot);
        let diag = lu[[perm[col], col]];
        for row in (col + 1)..n {
            let factor = lu[[perm[row], col]] / diag;
            lu[[perm[row], col]] = factor;
            for c in (col + 1)..n {
                let upd = factor * lu[[perm[col], c]];
                lu[[perm[row], c]] -= upd;
            }
        }
    }
    // forward/backward substitution on the permuted system
    let mut y = Array1::<f64>::zeros(n);
    for row in 0..n {
        let mut acc = x[perm[row]];
        for c in 0..row {
            acc -= lu[[perm[row], c]] * y[c];
        }
        y[row] = acc;
    }
    for row in (0..n).rev() {
        let mut acc = y[row];
        for c in (row + 1)..n {
            acc -= lu[[perm[row], c]] * x[c];
        }
        x[row] = acc / lu[[perm[row], row]];
    }
    Some(x)
}
