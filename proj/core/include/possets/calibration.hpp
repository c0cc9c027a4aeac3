#pragma once

#include <optional>

#include "possets/rng.hpp"
#include "possets/uncertainty_set.hpp"

namespace possets {

// Data-driven fitting of the set parameters (nominal value, shape matrix),
// the three uncertainty-level selection methods, and the lognormal
// probabilistic guarantee.

/// N observed positive vectors, one per row.
struct SampleMatrix {
  Mat rows;

  Eigen::Index count() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
  void validate() const;
};

struct GuaranteeParams {
  double epsilon = 0.0;
  double lambda = 0.0;
  double delta_eps = 0.0;   // chi-squared quantile term
  double tau = 0.0;         // smallest certified uncertainty level
};

struct CalibrationReport {
  Vec a0;
  Mat A;
  double tau_full = 0.0;
  std::optional<double> tau_bound;
  std::optional<double> tau_value;
  std::optional<GuaranteeParams> guarantee;
  NormKind norm = NormKind::L2;
};

/// Arithmetic-moment description of independent lognormal coordinates with
/// the derived log-space parameters.
struct LognormalSpec {
  Vec mu;         // arithmetic means
  Vec sigma2;     // arithmetic variances (diagonal covariance)
  Vec mu_ln;      // mu_ln_i =  ln mu_i - 0.5 ln(1 + sigma2_i / mu_i^2)
  Vec sigma2_ln;  // sigma2_ln_i = ln(1 + sigma2_i / mu_i^2)
  double lambda = 0.0;  // max_i sigma2_ln_i
};

/// Sample mean of the data.
Vec fit_nominal(const SampleMatrix& samples);

/// Inverse principal square root of a symmetric PSD matrix, by symmetric
/// eigendecomposition with eigenvalue floor 1e-12.  Throws numerical_error
/// (reporting the offending eigenvalue) when the matrix is singular or
/// indefinite.
Mat inverse_sqrt_psd(const Mat& S);

/// Four-step shape fit: scale samples by the nominal, map through the
/// variation function, take the sample covariance (unbiased, N-1) of the
/// variation vectors, return its inverse principal square root.
Mat fit_shape_matrix(const SampleMatrix& samples, const Vec& a0);

/// Smallest level putting every sample inside the set: max_i ||A y^i||.
double tau_full(const SampleMatrix& samples, const Vec& a0, const Mat& A, NormKind norm);

/// Level guaranteeing worst-case coordinates >= beta_i a0_i for increasing
/// constraints: min_i g(beta_i) / ||A^{-1}||.
double tau_from_bound(const Vec& beta, const Mat& A, NormKind norm);

/// Level keeping the certificate lower bound of the linear objective above
/// gamma:  [t ln(1 + 1/t) (a0)^T x0 - gamma] / [t ||A^{-T} diag(a0) x0||_*].
double tau_from_value_bound(double gamma, double t, const Vec& x0, const Vec& a0,
                            const Mat& A, NormKind norm);

LognormalSpec lognormal_params(const Vec& mu, const Vec& sigma2);

/// Per-coordinate log-space sample mean / variance (coordinates treated as
/// independent, matching the diagonal guarantee setting).
LognormalSpec lognormal_fit(const SampleMatrix& samples);

/// One lognormal draw / a sample matrix of N draws with the given spec.
Vec lognormal_draw(const LognormalSpec& spec, Rng& rng);
SampleMatrix lognormal_draws(const LognormalSpec& spec, Eigen::Index n, Rng& rng);

/// Smallest tau certified by the lognormal guarantee:
/// delta(eps) = sqrt(chi2_inv(m, 1 - eps)), tau = delta (exp(sqrt(lambda)
/// delta) - 1).  A robust-feasible decision then stays feasible with
/// probability at least 1 - eps under the matching set construction.
double tau_guarantee(double epsilon, int m, double lambda);

/// Checks alpha g(t) <= |ln t| on a grid inside (max{0, 1 - 1/alpha},
/// 1 + 1/alpha]; throws if a grid point leaves that interval.
bool alpha_g_inequality_check(double alpha, const Vec& t_grid);

/// The set construction the guarantee certifies: a0_i = exp(mu_ln_i),
/// A = diag(sigma2_ln)^{-1/2}, L2 norm, level tau.
UncertaintySet guarantee_set(const LognormalSpec& spec, double tau);

}  // namespace possets
