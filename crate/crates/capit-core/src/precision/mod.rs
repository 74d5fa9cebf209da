//! Sample covariance and the four nuisance precision estimators: tapering,
//! Toeplitz off-diagonal averaging, hard thresholding (each inverted with a
//! positive-definiteness repair), and CLIME. Tuning parameters come from a
//! 2:1 train/tune split: Frobenius distance for the covariance estimators,
//! Gaussian log-likelihood for CLIME.

mod clime;

pub use clime::{clime_columns, clime_columns_with_tolerance, ClimeWarm};

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::stream_rng;

/// Which estimator produced a precision matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrecisionMethod {
    Tapering,
    Toeplitz,
    Thresholding,
    Clime,
    Oracle,
}

/// The tuning value an estimate was built with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tuning {
    /// Tapering / Toeplitz bandwidth k.
    Bandwidth(usize),
    /// Threshold constant gamma or CLIME lambda.
    Level(f64),
    /// Oracle input; nothing was tuned.
    None,
}

/// Estimated precision matrix plus method metadata and the record of any
/// eigenvalue repair that was needed to make it positive definite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrecisionEstimate {
    pub omega: Array2<f64>,
    pub method: PrecisionMethod,
    pub tuning: Tuning,
    pub pd_repair_applied: bool,
    pub repair_floor: f64,
}

impl PrecisionEstimate {
    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }
}

/// How to obtain a precision matrix for one data side.
#[derive(Debug, Clone)]
pub enum PrecisionSpec {
    Tapering(BandwidthChoice),
    Toeplitz(BandwidthChoice),
    Thresholding(LevelChoice),
    Clime(LevelChoice),
    /// Use this matrix as-is (rate study; known-truth experiments).
    Oracle(Array2<f64>),
}

#[derive(Debug, Clone)]
pub enum BandwidthChoice {
    Fixed(usize),
    CrossValidated(Vec<usize>),
    /// Cross-validated over [`default_bandwidth_grid`].
    Default,
}

#[derive(Debug, Clone)]
pub enum LevelChoice {
    Fixed(f64),
    CrossValidated(Vec<f64>),
    /// Cross-validated over the method's default grid.
    Default,
}

impl PrecisionSpec {
    pub fn method(&self) -> PrecisionMethod {
        match self {
            PrecisionSpec::Tapering(_) => PrecisionMethod::Tapering,
            PrecisionSpec::Toeplitz(_) => PrecisionMethod::Toeplitz,
            PrecisionSpec::Thresholding(_) => PrecisionMethod::Thresholding,
            PrecisionSpec::Clime(_) => PrecisionMethod::Clime,
            PrecisionSpec::Oracle(_) => PrecisionMethod::Oracle,
        }
    }
}

/// Sample covariance `(1/n) Xc' Xc` after column-mean centering.
pub fn sample_covariance(x: &Array2<f64>) -> Array2<f64> {
    let n = x.nrows() as f64;
    let means = x.mean_axis(Axis(0)).expect("nonempty");
    let centered = x - &means;
    centered.t().dot(&centered) / n
}

/// Cross covariance `(1/n) Xc' Yc` after centering each side.
pub fn sample_cross_covariance(x: &Array2<f64>, y: &Array2<f64>) -> Result<Array2<f64>> {
    if x.nrows() != y.nrows() {
        return Err(Error::InvalidInput(format!(
            "cross-covariance needs equal row counts, got {} and {}",
            x.nrows(),
            y.nrows()
        )));
    }
    let n = x.nrows() as f64;
    let mx = x.mean_axis(Axis(0)).expect("nonempty");
    let my = y.mean_axis(Axis(0)).expect("nonempty");
    let xc = x - &mx;
    let yc = y - &my;
    Ok(xc.t().dot(&yc) / n)
}

/// Tapering weights `w_m` for offsets m = 0..p-1: 1 up to k/2, linear decay
/// `2 - 2m/k` up to k, then 0.
pub fn tapering_weights(p: usize, k: usize) -> Result<Array1<f64>> {
    if k == 0 || k > 2 * p {
        return Err(Error::InvalidConfig(format!(
            "bandwidth {k} out of range for dimension {p}"
        )));
    }
    let kf = k as f64;
    Ok(Array1::from_shape_fn(p, |m| {
        let mf = m as f64;
        if mf <= kf / 2.0 {
            1.0
        } else if mf <= kf {
            2.0 - 2.0 * mf / kf
        } else {
            0.0
        }
    }))
}

/// Entrywise product of a covariance with the tapering weight by |i-j|.
pub fn taper_covariance(s: &Array2<f64>, k: usize) -> Result<Array2<f64>> {
    let p = s.nrows();
    let w = tapering_weights(p, k)?;
    Ok(Array2::from_shape_fn((p, p), |(i, j)| s[[i, j]] * w[i.abs_diff(j)]))
}

/// Tapered sample covariance of the data `x`.
pub fn taper_estimate(x: &Array2<f64>, k: usize) -> Result<Array2<f64>> {
    taper_covariance(&sample_covariance(x), k)
}

/// Averages a covariance along each off-diagonal, then tapers: the entry at
/// (s, t) becomes `w_|s-t| * mean of the |s-t|-th off-diagonal`.
pub fn toeplitz_covariance(s: &Array2<f64>, k: usize) -> Result<Array2<f64>> {
    let p = s.nrows();
    let w = tapering_weights(p, k)?;
    let mut avg = vec![0.0f64; p];
    for (m, slot) in avg.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..(p - m) {
            acc += s[[i, i + m]];
        }
        *slot = acc / (p - m) as f64;
    }
    Ok(Array2::from_shape_fn((p, p), |(i, j)| {
        let m = i.abs_diff(j);
        avg[m] * w[m]
    }))
}

/// Toeplitz-averaged, tapered sample covariance of the data `x`.
pub fn toeplitz_estimate(x: &Array2<f64>, k: usize) -> Result<Array2<f64>> {
    toeplitz_covariance(&sample_covariance(x), k)
}

/// Hard-thresholds off-diagonal covariance entries at an absolute cutoff;
/// entries equal to the cutoff are kept, the diagonal is never touched.
pub fn hard_threshold_covariance(s: &Array2<f64>, cutoff: f64) -> Array2<f64> {
    Array2::from_shape_fn(s.raw_dim(), |(i, j)| {
        if i == j || s[[i, j]].abs() >= cutoff {
            s[[i, j]]
        } else {
            0.0
        }
    })
}

/// Thresholded sample covariance with cutoff `gamma * sqrt(log p / n)`.
pub fn threshold_estimate(x: &Array2<f64>, gamma: f64) -> Result<Array2<f64>> {
    if gamma < 0.0 {
        return Err(Error::InvalidConfig(format!("threshold constant {gamma} < 0")));
    }
    let (n, p) = x.dim();
    let cutoff = gamma * ((p as f64).ln() / n as f64).sqrt();
    Ok(hard_threshold_covariance(&sample_covariance(x), cutoff))
}

/// CLIME estimate from data: per-column constrained l1 programs on the sample
/// covariance, assembled and symmetrized by keeping the smaller-magnitude
/// entry of each (i, j)/(j, i) pair.
///
/// Each raw column satisfies `|| S w_j - e_j ||_inf <= lambda + 1e-6`; the
/// min-magnitude symmetrization can loosen that, so callers needing the raw
/// feasible columns should use [`clime_columns`].
pub fn clime_estimate(x: &Array2<f64>, lambda: f64) -> Result<Array2<f64>> {
    let s = sample_covariance(x);
    let raw = clime_columns(&s, lambda)?;
    Ok(symmetrize_min_magnitude(&raw))
}

/// Keeps, for each (i, j), the smaller-magnitude entry between omega_ij and
/// omega_ji. The result is exactly symmetric.
pub fn symmetrize_min_magnitude(omega: &Array2<f64>) -> Array2<f64> {
    Array2::from_shape_fn(omega.raw_dim(), |(i, j)| {
        let a = omega[[i, j]];
        let b = omega[[j, i]];
        if a.abs() <= b.abs() {
            a
        } else {
            b
        }
    })
}

/// Clips the spectrum of a symmetric matrix at `floor` and inverts, recording
/// whether any eigenvalue needed clipping. The default floor is
/// `1e-4 * max(eig_max, 1)`.
pub fn pd_repair_invert(
    sigma_hat: &Array2<f64>,
    floor: Option<f64>,
    method: PrecisionMethod,
    tuning: Tuning,
) -> Result<PrecisionEstimate> {
    let (vals, q) = linalg::sym_eig(sigma_hat)?;
    let floor_val = floor.unwrap_or_else(|| 1e-4 * vals[0].max(1.0));
    let repaired = vals.iter().any(|&v| v < floor_val);
    let inv = vals.mapv(|v| 1.0 / v.max(floor_val));
    Ok(PrecisionEstimate {
        omega: linalg::scaled_eigenproduct(&q, &inv),
        method,
        tuning,
        pd_repair_applied: repaired,
        repair_floor: floor_val,
    })
}

/// Clips the spectrum of an already-estimated precision matrix at `floor`
/// (no inversion); used for CLIME output, which has no PD guarantee.
pub fn pd_repair(
    omega_hat: &Array2<f64>,
    floor: Option<f64>,
    method: PrecisionMethod,
    tuning: Tuning,
) -> Result<PrecisionEstimate> {
    let (vals, q) = linalg::sym_eig(omega_hat)?;
    let floor_val = floor.unwrap_or_else(|| 1e-4 * vals[0].max(1.0));
    let repaired = vals.iter().any(|&v| v < floor_val);
    let clipped = vals.mapv(|v| v.max(floor_val));
    Ok(PrecisionEstimate {
        omega: linalg::scaled_eigenproduct(&q, &clipped),
        method,
        tuning,
        pd_repair_applied: repaired,
        repair_floor: floor_val,
    })
}

/// Spectral norm of `omega_hat * sigma - I`, the per-matrix consistency term.
pub fn omega_consistency_diagnostic(
    omega_hat: &Array2<f64>,
    sigma_true: &Array2<f64>,
) -> Result<f64> {
    if omega_hat.dim() != sigma_true.dim() {
        return Err(Error::InvalidInput("dimension mismatch in consistency diagnostic".into()));
    }
    linalg::spectral_distance_from_identity(&omega_hat.dot(sigma_true))
}

/// All bandwidths 1..p when p <= 50, otherwise 50 log-spaced distinct values.
pub fn default_bandwidth_grid(p: usize) -> Vec<usize> {
    if p <= 50 {
        (1..=p).collect()
    } else {
        let mut grid: Vec<usize> = (0..50)
            .map(|i| {
                let t = i as f64 / 49.0;
                ((p as f64).powf(t)).round() as usize
            })
            .collect();
        grid.sort_unstable();
        grid.dedup();
        grid
    }
}

/// 50 equispaced threshold cutoffs in [0.01, 0.5], expressed as gamma
/// constants for the given (p, n): gamma = cutoff / sqrt(log p / n).
pub fn default_threshold_grid(p: usize, n: usize) -> Vec<f64> {
    let scale = ((p as f64).ln() / n as f64).sqrt();
    (0..50)
        .map(|i| (0.01 + (0.5 - 0.01) * i as f64 / 49.0) / scale)
        .collect()
}

/// Six log-spaced CLIME lambdas in [0.05, 0.4]; kept short because each grid
/// point is a full set of column programs.
pub fn default_clime_grid() -> Vec<f64> {
    let (lo, hi) = (0.05f64, 0.4f64);
    (0..6)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / 5.0).exp())
        .collect()
}

/// Deterministic 2:1 train/tune row split by seeded permutation.
fn cv_split(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(seed, 0);
    use rand::Rng;
    for i in (1..rows.len()).rev() {
        let j = rng.random_range(0..=i);
        rows.swap(i, j);
    }
    let n_train = (2 * n) / 3;
    let train = rows[..n_train].to_vec();
    let tune = rows[n_train..].to_vec();
    (train, tune)
}

fn select_rows(x: &Array2<f64>, rows: &[usize]) -> Array2<f64> {
    let mut out = Array2::<f64>::zeros((rows.len(), x.ncols()));
    for (r, &idx) in rows.iter().enumerate() {
        out.row_mut(r).assign(&x.row(idx));
    }
    out
}

/// Gaussian log-likelihood term `log det(omega) - tr(s * omega)` up to
/// constants; `omega` must be PD.
fn gaussian_loglik(omega: &Array2<f64>, s_tune: &Array2<f64>) -> Result<f64> {
    let (vals, _) = linalg::sym_eig(omega)?;
    if vals[vals.len() - 1] <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let logdet: f64 = vals.iter().map(|v| v.ln()).sum();
    let trace: f64 = s_tune.dot(omega).diag().sum();
    Ok(logdet - trace)
}

/// Picks the tuning value on a 2:1 train/tune split: the covariance
/// estimators minimize the Frobenius distance between the estimate fit on the
/// training rows and the tuning rows' sample covariance; CLIME maximizes the
/// tuning-split Gaussian log-likelihood. Ties go to the earliest grid entry.
pub fn cv_select(
    x: &Array2<f64>,
    method: PrecisionMethod,
    grid: &TuningGrid,
    seed: u64,
) -> Result<Tuning> {
    let n = x.nrows();
    if n < 3 {
        return Err(Error::InvalidInput("cross-validation needs at least 3 rows".into()));
    }
    let (train_rows, tune_rows) = cv_split(n, seed);
    let x_train = select_rows(x, &train_rows);
    let x_tune = select_rows(x, &tune_rows);
    let s_train = sample_covariance(&x_train);
    let s_tune = sample_covariance(&x_tune);
    let n_train = x_train.nrows();
    let p = x.ncols();

    match (method, grid) {
        (PrecisionMethod::Tapering, TuningGrid::Bandwidths(ks))
        | (PrecisionMethod::Toeplitz, TuningGrid::Bandwidths(ks)) => {
            if ks.is_empty() {
                return Err(Error::InvalidConfig("empty bandwidth grid".into()));
            }
            let mut best = (f64::INFINITY, ks[0]);
            for &k in ks {
                let est = match method {
                    PrecisionMethod::Tapering => taper_covariance(&s_train, k)?,
                    _ => toeplitz_covariance(&s_train, k)?,
                };
                let loss = linalg::frobenius_norm(&(&est - &s_tune));
                if loss < best.0 {
                    best = (loss, k);
                }
            }
            Ok(Tuning::Bandwidth(best.1))
        }
        (PrecisionMethod::Thresholding, TuningGrid::Levels(gammas)) => {
            if gammas.is_empty() {
                return Err(Error::InvalidConfig("empty threshold grid".into()));
            }
            let scale = ((p as f64).ln() / n_train as f64).sqrt();
            let mut best = (f64::INFINITY, gammas[0]);
            for &g in gammas {
                let est = hard_threshold_covariance(&s_train, g * scale);
                let loss = linalg::frobenius_norm(&(&est - &s_tune));
                if loss < best.0 {
                    best = (loss, g);
                }
            }
            Ok(Tuning::Level(best.1))
        }
        (PrecisionMethod::Clime, TuningGrid::Levels(lambdas)) => {
            if lambdas.is_empty() {
                return Err(Error::InvalidConfig("empty CLIME grid".into()));
            }
            // Descend the grid so each solve warm-starts the next; grid-point
            // solves run at a relaxed tolerance, only the final fit at the
            // full one.
            let mut order: Vec<f64> = lambdas.to_vec();
            order.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let mut warm: Option<ClimeWarm> = None;
            let mut best: Option<(f64, f64)> = None;
            for &lam in &order {
                let (raw, state) =
                    clime::solve_columns(&s_train, lam, warm.as_ref(), clime::CV_TOLERANCE)?;
                warm = Some(state);
                let sym = symmetrize_min_magnitude(&raw);
                let repaired = pd_repair(&sym, None, PrecisionMethod::Clime, Tuning::Level(lam))?;
                let ll = gaussian_loglik(&repaired.omega, &s_tune)?;
                let better = match best {
                    None => true,
                    Some((best_ll, best_lam)) => {
                        ll > best_ll + 1e-12 || (ll >= best_ll - 1e-12 && earlier(lambdas, lam, best_lam))
                    }
                };
                if better {
                    best = Some((ll, lam));
                }
            }
            Ok(Tuning::Level(best.expect("non-empty grid").1))
        }
        (PrecisionMethod::Oracle, _) => {
            Err(Error::InvalidConfig("oracle precision has nothing to tune".into()))
        }
        _ => Err(Error::InvalidConfig(
            "grid kind does not match the estimator's tuning parameter".into(),
        )),
    }
}

fn earlier(grid: &[f64], a: f64, b: f64) -> bool {
    let pos = |v: f64| grid.iter().position(|&g| g == v).unwrap_or(usize::MAX);
    pos(a) < pos(b)
}

/// Tuning grid for [`cv_select`].
#[derive(Debug, Clone)]
pub enum TuningGrid {
    Bandwidths(Vec<usize>),
    Levels(Vec<f64>),
}

/// Full pipeline for one data side: resolve tuning (fixed or CV), build the
/// covariance or CLIME estimate, repair and (for covariances) invert.
pub fn estimate_precision(
    x: &Array2<f64>,
    spec: &PrecisionSpec,
    seed: u64,
) -> Result<PrecisionEstimate> {
    let p = x.ncols();
    let n = x.nrows();
    match spec {
        PrecisionSpec::Tapering(choice) | PrecisionSpec::Toeplitz(choice) => {
            let method = spec.method();
            let k = match choice {
                BandwidthChoice::Fixed(k) => *k,
                BandwidthChoice::CrossValidated(grid) => {
                    match cv_select(x, method, &TuningGrid::Bandwidths(grid.clone()), seed)? {
                        Tuning::Bandwidth(k) => k,
                        _ => unreachable!(),
                    }
                }
                BandwidthChoice::Default => {
                    let grid = default_bandwidth_grid(p);
                    match cv_select(x, method, &TuningGrid::Bandwidths(grid), seed)? {
                        Tuning::Bandwidth(k) => k,
                        _ => unreachable!(),
                    }
                }
            };
            let sigma = match method {
                PrecisionMethod::Tapering => taper_estimate(x, k)?,
                _ => toeplitz_estimate(x, k)?,
            };
            pd_repair_invert(&sigma, None, method, Tuning::Bandwidth(k))
        }
        PrecisionSpec::Thresholding(choice) => {
            let gamma = match choice {
                LevelChoice::Fixed(g) => *g,
                LevelChoice::CrossValidated(grid) => match cv_select(
                    x,
                    PrecisionMethod::Thresholding,
                    &TuningGrid::Levels(grid.clone()),
                    seed,
                )? {
                    Tuning::Level(g) => g,
                    _ => unreachable!(),
                },
                LevelChoice::Default => {
                    let grid = default_threshold_grid(p, n);
                    match cv_select(
                        x,
                        PrecisionMethod::Thresholding,
                        &TuningGrid::Levels(grid),
                        seed,
                    )? {
                        Tuning::Level(g) => g,
                        _ => unreachable!(),
                    }
                }
            };
            let sigma = threshold_estimate(x, gamma)?;
            pd_repair_invert(&sigma, None, PrecisionMethod::Thresholding, Tuning::Level(gamma))
        }
        PrecisionSpec::Clime(choice) => {
            let lambda = match choice {
                LevelChoice::Fixed(l) => *l,
                LevelChoice::CrossValidated(grid) => match cv_select(
                    x,
                    PrecisionMethod::Clime,
                    &TuningGrid::Levels(grid.clone()),
                    seed,
                )? {
                    Tuning::Level(l) => l,
                    _ => unreachable!(),
                },
                LevelChoice::Default => {
                    match cv_select(
                        x,
                        PrecisionMethod::Clime,
                        &TuningGrid::Levels(default_clime_grid()),
                        seed,
                    )? {
                        Tuning::Level(l) => l,
                        _ => unreachable!(),
                    }
                }
            };
            let sym = clime_estimate(x, lambda)?;
            pd_repair(&sym, None, PrecisionMethod::Clime, Tuning::Level(lambda))
        }
        PrecisionSpec::Oracle(omega) => {
            if omega.nrows() != p || omega.ncols() != p {
                return Err(Error::InvalidInput(format!(
                    "oracle precision is {}x{}, data has {p} columns",
                    omega.nrows(),
                    omega.ncols()
                )));
            }
            Ok(PrecisionEstimate {
                omega: omega.clone(),
                method: PrecisionMethod::Oracle,
                tuning: Tuning::None,
                pd_repair_applied: false,
                repair_floor: 0.0,
            })
        }
    }
}
