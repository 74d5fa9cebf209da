//! Sparse canonical correlation analysis via precision-adjusted iterative
//! thresholding (CAPIT).
//!
//! The crate estimates the leading pair of sparse canonical directions of two
//! high-dimensional random vectors under the single canonical pair model: a
//! joint Gaussian whose cross-covariance has the rank-one structure
//! `Sigma12 = lambda * Sigma1 theta eta' Sigma2`. Estimation proceeds in three
//! stages: estimate the nuisance precision matrices on one half of the sample,
//! form the precision-adjusted cross-covariance `A = Omega1 S12 Omega2` on the
//! other half, and run a thresholded power iteration on `A` seeded by a
//! coordinate-thresholding initializer. Swapping the halves and averaging the
//! two fits gives the final estimate.
//!
//! Modules:
//! - [`linalg`]: dense symmetric eigendecomposition, SVD, norms, and the
//!   projector (sin-theta) loss used throughout.
//! - [`model`]: the canonical pair model, scenario generators, and seeded
//!   Gaussian sampling.
//! - [`precision`]: sample covariance plus four nuisance precision estimators
//!   (tapering, Toeplitz averaging, hard thresholding, CLIME) with
//!   cross-validated tuning and positive-definiteness repair.
//! - [`capit`]: thresholding rules, data-driven levels, the coordinate
//!   thresholding initializer, the iterative thresholding loop, and the
//!   split/swap/average pipeline.
//! - [`baselines`]: classical SVD-based CCA and rank-one penalized matrix
//!   decomposition.
//! - [`bench`]: replicated benchmark harness and the rate-scaling study.

pub mod baselines;
pub mod bench;
pub mod capit;
pub mod error;
pub mod linalg;
pub mod model;
pub mod precision;
pub mod rng;

pub use error::{Error, Result};
