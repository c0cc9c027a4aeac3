#include "possets/calibration.hpp"

#include <cmath>
#include <limits>

#include "possets/special.hpp"
#include "possets/variation.hpp"

namespace possets {

void SampleMatrix::validate() const {
  require(rows.rows() >= 1 && rows.cols() >= 1, "SampleMatrix: empty sample set");
  if ((rows.array() <= 0.0).any())
    throw domain_error("SampleMatrix: every entry must be strictly positive");
}

Vec fit_nominal(const SampleMatrix& samples) {
  samples.validate();
  return samples.rows.colwise().mean();
}

Mat inverse_sqrt_psd(const Mat& S) {
  require(S.rows() == S.cols(), "inverse_sqrt_psd: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> eig(S);
  if (eig.info() != Eigen::Success)
    throw numerical_error("inverse_sqrt_psd: eigendecomposition failed");
  Vec lam = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] <= 0.0)
      throw numerical_error("inverse_sqrt_psd: matrix not positive definite (eigenvalue " +
                            std::to_string(lam[i]) + ")");
    lam[i] = std::max(lam[i], 1e-12);
  }
  const Vec inv_sqrt = lam.cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

// Variation vectors of the scaled samples, one per row.
Mat variation_rows(const SampleMatrix& samples, const Vec& a0) {
  require(a0.size() == samples.dim(), "calibration: nominal dimension mismatch");
  require((a0.array() > 0.0).all(), "calibration: nominal must be strictly positive");
  Mat Y(samples.count(), samples.dim());
  for (Eigen::Index i = 0; i < samples.count(); ++i)
    for (Eigen::Index j = 0; j < samples.dim(); ++j)
      Y(i, j) = variation(samples.rows(i, j) / a0[j]);
  return Y;
}

}  // namespace

Mat fit_shape_matrix(const SampleMatrix& samples, const Vec& a0) {
  samples.validate();
  require(samples.count() >= 2, "fit_shape_matrix: need at least two samples");
  const Mat Y = variation_rows(samples, a0);
  const Vec mean = Y.colwise().mean();
  const Mat centered = Y.rowwise() - mean.transpose();
  const Mat cov =
      centered.transpose() * centered / static_cast<double>(samples.count() - 1);
  return inverse_sqrt_psd(cov);
}

double tau_full(const SampleMatrix& samples, const Vec& a0, const Mat& A, NormKind norm) {
  samples.validate();
  const Mat Y = variation_rows(samples, a0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < Y.rows(); ++i)
    worst = std::max(worst, vector_norm(A * Y.row(i).transpose(), norm));
  return worst;
}

double tau_from_bound(const Vec& beta, const Mat& A, NormKind norm) {
  require((beta.array() > 0.0).all() && (beta.array() < 1.0).all(),
          "tau_from_bound: beta must lie in (0,1) coordinatewise");
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw numerical_error("tau_from_bound: singular A");
  const double ainv = operator_norm(lu.inverse(), norm);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    best = std::min(best, variation(beta[i]) / ainv);
  return best;
}

double tau_from_value_bound(double gamma, double t, const Vec& x0, const Vec& a0,
                            const Mat& A, NormKind norm) {
  require(t > 0.0, "tau_from_value_bound: t must be positive");
  require(x0.size() == a0.size(), "tau_from_value_bound: dimension mismatch");
  Eigen::FullPivLU<Mat> lu(A.transpose());
  if (!lu.isInvertible()) throw numerical_error("tau_from_value_bound: singular A");
  const Vec s = lu.solve(a0.cwiseProduct(x0));
  const double denom = t * dual_vector_norm(s, norm);
  require(denom > 0.0, "tau_from_value_bound: x0 must be nonzero");
  const double numer = t * std::log1p(1.0 / t) * a0.dot(x0) - gamma;
  require(numer >= 0.0, "tau_from_value_bound: gamma exceeds the achievable bound");
  return numer / denom;
}

LognormalSpec lognormal_params(const Vec& mu, const Vec& sigma2) {
  require(mu.size() == sigma2.size(), "lognormal_params: dimension mismatch");
  require((mu.array() > 0.0).all(), "lognormal_params: means must be positive");
  require((sigma2.array() >= 0.0).all(), "lognormal_params: variances must be nonnegative");
  LognormalSpec spec;
  spec.mu = mu;
  spec.sigma2 = sigma2;
  spec.mu_ln.resize(mu.size());
  spec.sigma2_ln.resize(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double ratio = sigma2[i] / (mu[i] * mu[i]);
    spec.sigma2_ln[i] = std::log1p(ratio);
    spec.mu_ln[i] = std::log(mu[i]) - 0.5 * spec.sigma2_ln[i];
  }
  spec.lambda = spec.sigma2_ln.maxCoeff();
  return spec;
}

LognormalSpec lognormal_fit(const SampleMatrix& samples) {
  samples.validate();
  require(samples.count() >= 2, "lognormal_fit: need at least two samples");
  const Mat logs = samples.rows.array().log();
  const Vec mean = logs.colwise().mean();
  const Mat centered = logs.rowwise() - mean.transpose();
  const Vec var = centered.array().square().colwise().sum() /
                  static_cast<double>(samples.count() - 1);
  LognormalSpec spec;
  spec.mu_ln = mean;
  spec.sigma2_ln = var;
  spec.lambda = var.maxCoeff();
  spec.mu.resize(mean.size());
  spec.sigma2.resize(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    spec.mu[i] = std::exp(mean[i] + 0.5 * var[i]);
    spec.sigma2[i] = std::expm1(var[i]) * std::exp(2.0 * mean[i] + var[i]);
  }
  return spec;
}

Vec lognormal_draw(const LognormalSpec& spec, Rng& rng) {
  Vec a(spec.mu_ln.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    a[i] = rng.lognormal(spec.mu_ln[i], std::sqrt(spec.sigma2_ln[i]));
  return a;
}

SampleMatrix lognormal_draws(const LognormalSpec& spec, Eigen::Index n, Rng& rng) {
  SampleMatrix s;
  s.rows.resize(n, spec.mu_ln.size());
  for (Eigen::Index i = 0; i < n; ++i) s.rows.row(i) = lognormal_draw(spec, rng).transpose();
  return s;
}

double tau_guarantee(double epsilon, int m, double lambda) {
  require(epsilon > 0.0 && epsilon < 1.0, "tau_guarantee: epsilon must lie in (0,1)");
  require(lambda >= 0.0, "tau_guarantee: lambda must be nonnegative");
  const double delta_eps = std::sqrt(chi2_inv(m, 1.0 - epsilon));
  return delta_eps * std::expm1(std::sqrt(lambda) * delta_eps);
}

bool alpha_g_inequality_check(double alpha, const Vec& t_grid) {
  require(alpha > 0.0, "alpha_g_inequality_check: alpha must be positive");
  const double lo = std::max(0.0, 1.0 - 1.0 / alpha);
  const double hi = 1.0 + 1.0 / alpha;
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    require(t > lo && t <= hi, "alpha_g_inequality_check: grid point outside the interval");
    if (alpha * variation(t) > std::abs(std::log(t))) return false;
  }
  return true;
}

UncertaintySet guarantee_set(const LognormalSpec& spec, double tau) {
  const Eigen::Index m = spec.mu_ln.size();
  Vec a0(m);
  for (Eigen::Index i = 0; i < m; ++i) a0[i] = std::exp(spec.mu_ln[i]);
  Mat A = Mat::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    require(spec.sigma2_ln[i] > 0.0, "guarantee_set: zero log-variance coordinate");
    A(i, i) = 1.0 / std::sqrt(spec.sigma2_ln[i]);
  }
  return UncertaintySet(a0, tau, A, NormKind::L2);
}

}  // namespace possets
