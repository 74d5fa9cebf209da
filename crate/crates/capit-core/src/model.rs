//! The single canonical pair model: a centered Gaussian on (X, Y) whose
//! cross-covariance is `lambda * Sigma1 theta eta' Sigma2`, together with the
//! two simulation scenarios and weak-lq direction generation.

use ndarray::{s, Array1, Array2};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{stream_rng, StreamRng};

/// Normalization tolerance for `theta' Sigma theta = 1`.
const NORMALIZATION_TOL: f64 = 1e-8;

/// Ground-truth parameter bundle (Sigma1, Sigma2, theta, eta, lambda).
#[derive(Debug, Clone)]
pub struct CanonicalPairModel {
    pub sigma1: Array2<f64>,
    pub sigma2: Array2<f64>,
    pub theta: Array1<f64>,
    pub eta: Array1<f64>,
    pub lambda: f64,
}

impl CanonicalPairModel {
    pub fn p1(&self) -> usize {
        self.sigma1.nrows()
    }

    pub fn p2(&self) -> usize {
        self.sigma2.nrows()
    }
}

/// n paired rows: `x` is n x p1, `y` is n x p2.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedDataset {
    pub x: Array2<f64>,
    pub y: Array2<f64>,
}

impl PairedDataset {
    pub fn new(x: Array2<f64>, y: Array2<f64>) -> Result<Self> {
        if x.nrows() != y.nrows() {
            return Err(Error::InvalidInput(format!(
                "paired data needs equal row counts, got {} and {}",
                x.nrows(),
                y.nrows()
            )));
        }
        if x.nrows() < 2 {
            return Err(Error::InvalidInput("need at least 2 paired rows".into()));
        }
        linalg::check_finite(&x)?;
        linalg::check_finite(&y)?;
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Front and back halves by row order; a trailing odd row is dropped.
    pub fn split_halves(&self) -> (PairedDataset, PairedDataset) {
        let m = self.n() / 2;
        let first = PairedDataset {
            x: self.x.slice(s![..m, ..]).to_owned(),
            y: self.y.slice(s![..m, ..]).to_owned(),
        };
        let second = PairedDataset {
            x: self.x.slice(s![m..2 * m, ..]).to_owned(),
            y: self.y.slice(s![m..2 * m, ..]).to_owned(),
        };
        (first, second)
    }
}

/// Which synthetic covariance family a scenario uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// `sigma_ij = rho^|i-j|` on both sides (sparse covariance).
    ToeplitzCovariance,
    /// Banded precision (1 on the diagonal, 0.5 and 0.4 on the first two
    /// off-diagonals), `Sigma = Omega^{-1}` (sparse precision).
    BandedPrecision,
    /// Identity covariances on both sides.
    Custom,
}

/// Generator settings for a simulation scenario.
///
/// `support_x` / `support_y` are zero-based coordinate lists; the canonical
/// directions take a common positive value there and zero elsewhere, then are
/// normalized so `theta' Sigma theta = 1`. `n` is the per-half sample size
/// (one replicate draws `2n` rows).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario_id: Scenario,
    pub p1: usize,
    pub p2: usize,
    pub n: usize,
    pub support_x: Vec<usize>,
    pub support_y: Vec<usize>,
    #[serde(default = "default_rho")]
    pub rho: f64,
    pub lambda: f64,
}

fn default_rho() -> f64 {
    0.3
}

impl ScenarioConfig {
    /// The Table 1 generator: Toeplitz covariance, rho 0.3, support
    /// {1, 6, 11, 16, 21} (one-based), lambda 0.9.
    pub fn scenario_one(p: usize, n: usize) -> Self {
        ScenarioConfig {
            scenario_id: Scenario::ToeplitzCovariance,
            p1: p,
            p2: p,
            n,
            support_x: vec![0, 5, 10, 15, 20],
            support_y: vec![0, 5, 10, 15, 20],
            rho: 0.3,
            lambda: 0.9,
        }
    }

    /// The Table 2 generator: banded precision, same directions and lambda.
    pub fn scenario_two(p: usize, n: usize) -> Self {
        ScenarioConfig {
            scenario_id: Scenario::BandedPrecision,
            ..Self::scenario_one(p, n)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p1 == 0 || self.p2 == 0 {
            return Err(Error::InvalidConfig("dimensions must be positive".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig("per-half sample size must be >= 2".into()));
        }
        for (name, support, p) in [
            ("support_x", &self.support_x, self.p1),
            ("support_y", &self.support_y, self.p2),
        ] {
            if support.is_empty() {
                return Err(Error::InvalidConfig(format!("{name} must be non-empty")));
            }
            let mut seen = std::collections::HashSet::new();
            for &idx in support {
                if idx >= p {
                    return Err(Error::InvalidConfig(format!(
                        "{name} index {idx} out of range for dimension {p}"
                    )));
                }
                if !seen.insert(idx) {
                    return Err(Error::InvalidConfig(format!("{name} has duplicate index {idx}")));
                }
            }
        }
        if !(self.rho.abs() < 1.0) {
            return Err(Error::InvalidConfig(format!("rho {} outside (-1, 1)", self.rho)));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::LambdaOutOfRange(self.lambda));
        }
        Ok(())
    }
}

/// Checks every model invariant, reporting the first violated one:
/// covariances symmetric positive definite, directions normalized in the
/// covariance metric, lambda in (0, 1].
pub fn validate_model(model: &CanonicalPairModel) -> Result<()> {
    let p1 = model.sigma1.nrows();
    let p2 = model.sigma2.nrows();
    if model.sigma1.ncols() != p1 || model.sigma2.ncols() != p2 {
        return Err(Error::InvalidModel("covariance blocks must be square".into()));
    }
    if model.theta.len() != p1 || model.eta.len() != p2 {
        return Err(Error::InvalidModel(format!(
            "direction lengths ({}, {}) do not match covariance dimensions ({p1}, {p2})",
            model.theta.len(),
            model.eta.len()
        )));
    }
    for (name, sigma) in [("sigma1", &model.sigma1), ("sigma2", &model.sigma2)] {
        let (vals, _) = linalg::sym_eig(sigma).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::InvalidModel(format!("{name}: {msg}")),
            other => other,
        })?;
        let min = vals[vals.len() - 1];
        // an eigenvalue at rounding level counts as zero
        if min <= 1e-10 * vals[0].abs().max(1.0) {
            return Err(Error::NotPositiveDefinite {
                which: if name == "sigma1" { "sigma1" } else { "sigma2" },
                min_eigenvalue: min,
            });
        }
    }
    let q1 = model.theta.dot(&model.sigma1.dot(&model.theta));
    if (q1 - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { which: "theta", value: q1 });
    }
    let q2 = model.eta.dot(&model.sigma2.dot(&model.eta));
    if (q2 - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { which: "eta", value: q2 });
    }
    if !(model.lambda > 0.0 && model.lambda <= 1.0) {
        return Err(Error::LambdaOutOfRange(model.lambda));
    }
    Ok(())
}

/// The (p1+p2) x (p1+p2) joint covariance
/// `[Sigma1, B; B', Sigma2]` with `B = lambda (Sigma1 theta)(Sigma2 eta)'`.
pub fn assemble_joint_covariance(model: &CanonicalPairModel) -> Result<Array2<f64>> {
    validate_model(model)?;
    let p1 = model.p1();
    let p2 = model.p2();
    let s1t = model.sigma1.dot(&model.theta);
    let s2e = model.sigma2.dot(&model.eta);
    let mut joint = Array2::<f64>::zeros((p1 + p2, p1 + p2));
    joint.slice_mut(s![..p1, ..p1]).assign(&model.sigma1);
    joint.slice_mut(s![p1.., p1..]).assign(&model.sigma2);
    for i in 0..p1 {
        for j in 0..p2 {
            let b = model.lambda * s1t[i] * s2e[j];
            joint[[i, p1 + j]] = b;
            joint[[p1 + j, i]] = b;
        }
    }
    Ok(joint)
}

/// Reusable sampler holding the eigendecomposition square root of the joint
/// covariance. The square-root route (rather than Cholesky) keeps
/// PSD-boundary models (lambda = 1) sampleable.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    factor: Array2<f64>,
    p1: usize,
}

impl GaussianSampler {
    pub fn from_model(model: &CanonicalPairModel) -> Result<Self> {
        let joint = assemble_joint_covariance(model)?;
        let (vals, q) = linalg::sym_eig(&joint).map_err(|e| match e {
            Error::NumericalFailure(msg) => Error::InvalidModel(msg),
            other => other,
        })?;
        let norm = vals[0].abs().max(1.0);
        if vals[vals.len() - 1] < -1e-8 * norm {
            return Err(Error::InvalidModel(format!(
                "joint covariance is not PSD: min eigenvalue {:e}",
                vals[vals.len() - 1]
            )));
        }
        let roots = vals.mapv(|x| x.max(0.0).sqrt());
        let mut factor = q;
        for (mut col, &r) in factor.columns_mut().into_iter().zip(roots.iter()) {
            col.mapv_inplace(|x| x * r);
        }
        Ok(Self { factor, p1: model.p1() })
    }

    /// n i.i.d. zero-mean rows; standard normals are drawn row-major.
    pub fn sample(&self, n: usize, rng: &mut StreamRng) -> PairedDataset {
        let d = self.factor.nrows();
        let z = Array2::from_shape_fn((n, d), |_| StandardNormal.sample(rng));
        let data = z.dot(&self.factor.t());
        PairedDataset {
            x: data.slice(s![.., ..self.p1]).to_owned(),
            y: data.slice(s![.., self.p1..]).to_owned(),
        }
    }
}

/// n i.i.d. draws from the model, deterministic given `seed` (stream 0).
pub fn sample(model: &CanonicalPairModel, n: usize, seed: u64) -> Result<PairedDataset> {
    let sampler = GaussianSampler::from_model(model)?;
    let mut rng = stream_rng(seed, 0);
    Ok(sampler.sample(n, &mut rng))
}

/// Builds the model a scenario describes. Directions take a common positive
/// value on the configured support and are normalized after assignment by
/// dividing by `sqrt(v' Sigma v)`.
pub fn make_scenario_model(cfg: &ScenarioConfig) -> Result<CanonicalPairModel> {
    cfg.validate()?;
    let sigma1 = scenario_covariance(cfg.scenario_id, cfg.p1, cfg.rho)?;
    let sigma2 = if cfg.p2 == cfg.p1 {
        sigma1.clone()
    } else {
        scenario_covariance(cfg.scenario_id, cfg.p2, cfg.rho)?
    };
    let theta = support_direction(&sigma1, &cfg.support_x)?;
    let eta = support_direction(&sigma2, &cfg.support_y)?;
    let model = CanonicalPairModel {
        sigma1,
        sigma2,
        theta,
        eta,
        lambda: cfg.lambda,
    };
    validate_model(&model)?;
    Ok(model)
}

fn scenario_covariance(id: Scenario, p: usize, rho: f64) -> Result<Array2<f64>> {
    match id {
        Scenario::ToeplitzCovariance => {
            Ok(Array2::from_shape_fn((p, p), |(i, j)| {
                rho.powi((i as i32 - j as i32).abs())
            }))
        }
        Scenario::BandedPrecision => {
            let omega = banded_precision(p);
            let (vals, q) = linalg::sym_eig(&omega)?;
            let min = vals[vals.len() - 1];
            if min <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "banded precision is not PD at p = {p}: min eigenvalue {min:e}"
                )));
            }
            let inv = vals.mapv(|x| 1.0 / x);
            Ok(linalg::scaled_eigenproduct(&q, &inv))
        }
        Scenario::Custom => Ok(Array2::<f64>::eye(p)),
    }
}

/// diag 1, first off-diagonal 0.5, second off-diagonal 0.4.
pub fn banded_precision(p: usize) -> Array2<f64> {
    Array2::from_shape_fn((p, p), |(i, j)| match i.abs_diff(j) {
        0 => 1.0,
        1 => 0.5,
        2 => 0.4,
        _ => 0.0,
    })
}

fn support_direction(sigma: &Array2<f64>, support: &[usize]) -> Result<Array1<f64>> {
    let p = sigma.nrows();
    let mut v = Array1::<f64>::zeros(p);
    for &idx in support {
        v[idx] = 1.0;
    }
    let quad = v.dot(&sigma.dot(&v));
    if quad <= 0.0 {
        return Err(Error::InvalidModel("support direction has nonpositive Sigma-norm".into()));
    }
    Ok(v / quad.sqrt())
}

/// Draws a direction in the weak-lq ball `|v_(k)|^q <= s / k` (order
/// statistics by magnitude), normalized so `v' Sigma v = 1`.
///
/// For `q = 0` the ball is hard sparsity: `floor(s)` coordinates get a common
/// magnitude with random signs on a random support. For `q > 0` magnitudes
/// follow the boundary profile `(s/k)^{1/q}` on a random coordinate
/// assignment; the profile is then scaled down by the Sigma-normalization.
/// If normalization would have to scale the profile up, no vector in the ball
/// reaches `v' Sigma v = 1` on that assignment and the draw is rejected.
pub fn weak_lq_direction(
    p: usize,
    s: f64,
    q: f64,
    sigma: &Array2<f64>,
    seed: u64,
) -> Result<Array1<f64>> {
    if p == 0 || sigma.nrows() != p || sigma.ncols() != p {
        return Err(Error::InvalidConfig("dimension mismatch in weak_lq_direction".into()));
    }
    if s <= 0.0 {
        return Err(Error::InvalidConfig("sparsity level s must be positive".into()));
    }
    if !(0.0..=2.0).contains(&q) {
        return Err(Error::InvalidConfig(format!("q = {q} outside [0, 2]")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut coords: Vec<usize> = (0..p).collect();
    shuffle(&mut coords, &mut rng);

    let mut v = Array1::<f64>::zeros(p);
    if q == 0.0 {
        let k = (s.floor() as usize).clamp(1, p);
        for &idx in coords.iter().take(k) {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            v[idx] = sign;
        }
    } else {
        for (rank, &idx) in coords.iter().enumerate() {
            let magnitude = (s / (rank + 1) as f64).powf(1.0 / q);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            v[idx] = sign * magnitude;
        }
    }
    let quad = v.dot(&sigma.dot(&v));
    if quad <= 0.0 {
        return Err(Error::InvalidConfig("weak-lq draw has nonpositive Sigma-norm".into()));
    }
    let scale = quad.sqrt();
    if q > 0.0 && scale < 1.0 - 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "weak-lq ball with s = {s}, q = {q} is too small to Sigma-normalize (scale {scale})"
        )));
    }
    Ok(v / scale)
}

fn shuffle(items: &mut [usize], rng: &mut StreamRng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, spectral_norm, subspace_loss, sym_eig};
    use ndarray::array;

    fn identity_model(lambda: f64) -> CanonicalPairModel {
        CanonicalPairModel {
            sigma1: Array2::<f64>::eye(2),
            sigma2: Array2::<f64>::eye(2),
            theta: array![1.0, 0.0],
            eta: array![1.0, 0.0],
            lambda,
        }
    }

    #[test]
    fn joint_covariance_identity_blocks() {
        let joint = assemble_joint_covariance(&identity_model(0.9)).unwrap();
        assert_eq!(joint.dim(), (4, 4));
        assert!((joint[[0, 2]] - 0.9).abs() < 1e-15);
        assert!((joint[[2, 0]] - 0.9).abs() < 1e-15);
        assert_eq!(joint[[0, 3]], 0.0);
        assert_eq!(joint[[1, 2]], 0.0);
    }

    #[test]
    fn joint_covariance_perfect_correlation_is_psd_boundary() {
        let joint = assemble_joint_covariance(&identity_model(1.0)).unwrap();
        let (vals, _) = sym_eig(&joint).unwrap();
        let min = vals[vals.len() - 1];
        assert!(min.abs() < 1e-12, "expected zero eigenvalue, got {min}");
        // still sampleable
        let model = identity_model(1.0);
        let data = sample(&model, 16, 3).unwrap();
        assert_eq!(data.n(), 16);
    }

    #[test]
    fn scenario_one_joint_covariance_is_psd() {
        let cfg = ScenarioConfig {
            scenario_id: Scenario::ToeplitzCovariance,
            p1: 10,
            p2: 10,
            n: 10,
            support_x: vec![0, 5],
            support_y: vec![0, 5],
            rho: 0.3,
            lambda: 0.9,
        };
        let model = make_scenario_model(&cfg).unwrap();
        let joint = assemble_joint_covariance(&model).unwrap();
        let (vals, _) = sym_eig(&joint).unwrap();
        assert!(vals[vals.len() - 1] >= -1e-8 * vals[0].abs());
        // symmetry
        let asym = frobenius_norm(&(&joint - &joint.t().to_owned()));
        assert!(asym < 1e-12);
    }

    #[test]
    fn validate_model_reports_violations() {
        let ok = identity_model(0.9);
        assert!(validate_model(&ok).is_ok());

        let mut scaled = ok.clone();
        scaled.theta = array![2.0, 0.0];
        assert!(matches!(
            validate_model(&scaled),
            Err(Error::NotNormalized { which: "theta", .. })
        ));

        let mut bad_lambda = ok.clone();
        bad_lambda.lambda = 1.2;
        assert!(matches!(validate_model(&bad_lambda), Err(Error::LambdaOutOfRange(_))));

        let mut not_pd = ok;
        not_pd.sigma1 = array![[1.0, 1.0], [1.0, 1.0]];
        // theta normalization is checked after positive definiteness
        assert!(matches!(
            validate_model(&not_pd),
            Err(Error::NotPositiveDefinite { which: "sigma1", .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = ScenarioConfig::scenario_one(30, 10);
        let model = make_scenario_model(&cfg).unwrap();
        let a = sample(&model, 5, 99).unwrap();
        let b = sample(&model, 5, 99).unwrap();
        assert_eq!(a, b);
        let c = sample(&model, 5, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn independent_blocks_have_small_cross_covariance() {
        // lambda -> 0 limit is exercised through a tiny-but-valid lambda and a
        // hand-built model with zero cross block.
        let model = CanonicalPairModel {
            sigma1: Array2::<f64>::eye(3),
            sigma2: Array2::<f64>::eye(3),
            theta: array![1.0, 0.0, 0.0],
            eta: array![1.0, 0.0, 0.0],
            lambda: 1e-12,
        };
        let n = 200_000;
        let data = sample(&model, n, 7).unwrap();
        let cross = crate::precision::sample_cross_covariance(&data.x, &data.y).unwrap();
        for v in cross.iter() {
            assert!(v.abs() < 0.02, "cross-covariance entry {v}");
        }
    }

    #[test]
    fn sampled_canonical_correlation_matches_lambda() {
        let cfg = ScenarioConfig {
            scenario_id: Scenario::ToeplitzCovariance,
            p1: 10,
            p2: 10,
            n: 10,
            support_x: vec![0, 5],
            support_y: vec![0, 5],
            rho: 0.3,
            lambda: 0.9,
        };
        let model = make_scenario_model(&cfg).unwrap();
        let data = sample(&model, 200_000, 11).unwrap();
        let u = data.x.dot(&model.theta);
        let v = data.y.dot(&model.eta);
        let n = u.len() as f64;
        let mu = u.sum() / n;
        let mv = v.sum() / n;
        let mut cov = 0.0;
        let mut var_u = 0.0;
        let mut var_v = 0.0;
        for i in 0..u.len() {
            cov += (u[i] - mu) * (v[i] - mv);
            var_u += (u[i] - mu).powi(2);
            var_v += (v[i] - mv).powi(2);
        }
        let corr = cov / (var_u.sqrt() * var_v.sqrt());
        assert!((corr - 0.9).abs() < 0.02, "empirical correlation {corr}");
    }

    #[test]
    fn scenario_models_pass_validation() {
        for cfg in [
            ScenarioConfig::scenario_one(60, 50),
            ScenarioConfig::scenario_two(60, 50),
        ] {
            let model = make_scenario_model(&cfg).unwrap();
            validate_model(&model).unwrap();
        }
    }

    #[test]
    fn scenario_two_covariance_inverts_banded_precision() {
        let cfg = ScenarioConfig::scenario_two(40, 50);
        let model = make_scenario_model(&cfg).unwrap();
        let omega = banded_precision(40);
        let prod = model.sigma1.dot(&omega);
        let resid = &prod - &Array2::<f64>::eye(40);
        assert!(spectral_norm(&resid).unwrap() <= 1e-8);
    }

    #[test]
    fn scenario_one_degenerate_single_coordinate() {
        let cfg = ScenarioConfig {
            scenario_id: Scenario::ToeplitzCovariance,
            p1: 1,
            p2: 1,
            n: 5,
            support_x: vec![0],
            support_y: vec![0],
            rho: 0.3,
            lambda: 0.5,
        };
        let model = make_scenario_model(&cfg).unwrap();
        assert!((model.theta[0] - 1.0).abs() < 1e-12);
        validate_model(&model).unwrap();
    }

    #[test]
    fn weak_lq_hard_sparsity() {
        let sigma = Array2::<f64>::eye(30);
        let v = weak_lq_direction(30, 5.0, 0.0, &sigma, 4).unwrap();
        let nnz = v.iter().filter(|x| **x != 0.0).count();
        assert_eq!(nnz, 5);
        assert!((v.dot(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weak_lq_profile_dominated_after_scaling() {
        let sigma = Array2::<f64>::eye(100);
        let v = weak_lq_direction(100, 2.0, 1.0, &sigma, 9).unwrap();
        let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (k, m) in mags.iter().enumerate() {
            assert!(m <= &(2.0 / (k + 1) as f64 + 1e-12), "rank {k}: {m}");
        }
        let quad = v.dot(&sigma.dot(&v));
        assert!((quad - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weak_lq_is_deterministic() {
        let sigma = Array2::<f64>::eye(20);
        let a = weak_lq_direction(20, 3.0, 0.5, &sigma, 123).unwrap();
        let b = weak_lq_direction(20, 3.0, 0.5, &sigma, 123).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn weak_lq_infeasible_when_s_too_small() {
        let sigma = Array2::<f64>::eye(4);
        // boundary profile (s/k)^{1/q} with tiny s cannot reach unit norm
        let err = weak_lq_direction(4, 1e-6, 1.0, &sigma, 5);
        assert!(matches!(err, Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn split_halves_by_row_order() {
        let x = Array2::from_shape_fn((5, 2), |(i, j)| (i * 2 + j) as f64);
        let y = Array2::from_shape_fn((5, 3), |(i, j)| (100 + i * 3 + j) as f64);
        let data = PairedDataset::new(x, y).unwrap();
        let (a, b) = data.split_halves();
        assert_eq!(a.n(), 2);
        assert_eq!(b.n(), 2);
        assert_eq!(a.x[[0, 0]], 0.0);
        assert_eq!(b.x[[0, 0]], 4.0);
    }

    #[test]
    fn directions_recovered_by_population_svd() {
        // sanity: the leading singular pair of Omega1 Sigma12 Omega2 spans theta/eta
        let cfg = ScenarioConfig::scenario_two(30, 50);
        let model = make_scenario_model(&cfg).unwrap();
        let omega = banded_precision(30);
        let s1t = model.sigma1.dot(&model.theta);
        let s2e = model.sigma2.dot(&model.eta);
        let mut sigma12 = Array2::<f64>::zeros((30, 30));
        for i in 0..30 {
            for j in 0..30 {
                sigma12[[i, j]] = model.lambda * s1t[i] * s2e[j];
            }
        }
        let a_mat = omega.dot(&sigma12).dot(&omega);
        let (u, _, v) = crate::linalg::svd(&a_mat).unwrap();
        let lu = subspace_loss(&u.column(0).to_owned(), &model.theta).unwrap();
        let lv = subspace_loss(&v.column(0).to_owned(), &model.eta).unwrap();
        assert!(lu < 1e-8, "left loss {lu}");
        assert!(lv < 1e-8, "right loss {lv}");
    }
}
