#include "possets/special.hpp"

#include <cmath>
#include <limits>

#include "possets/types.hpp"

namespace possets {

namespace {

// The series/continued fraction converge in O(sqrt(a)) steps when x ~ a;
// the cap accommodates dof up to 10^4.
constexpr int kMaxIter = 100000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Series representation, converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw numerical_error("gamma_p: series did not converge");
}

// Continued fraction for Q(a, x) = 1 - P(a, x), modified Lentz.
double gamma_q_contfrac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw numerical_error("gamma_p: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
  require(a > 0.0, "gamma_p: shape must be positive");
  require(x >= 0.0, "gamma_p: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double chi2_cdf(int dof, double x) {
  require(dof >= 1, "chi2_cdf: dof must be positive");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_pdf(int dof, double x) {
  require(dof >= 1, "chi2_pdf: dof must be positive");
  if (x <= 0.0) return 0.0;
  const double half = 0.5 * dof;
  return std::exp((half - 1.0) * std::log(x) - 0.5 * x - half * std::log(2.0) -
                  std::lgamma(half));
}

double chi2_inv(int dof, double p) {
  require(dof >= 1 && dof <= 10000, "chi2_inv: dof out of range");
  require(p > 0.0 && p < 1.0, "chi2_inv: p must lie in (0,1)");

  // Expand an upper bracket, then bisect; Newton polishes once the bracket
  // is tight enough that the pdf is well behaved.
  double lo = 0.0;
  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
  for (int k = 0; k < 200 && chi2_cdf(dof, hi) < p; ++k) hi *= 2.0;

  for (int it = 0; it < 300 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf(dof, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int k = 0; k < 4; ++k) {
    const double f = chi2_cdf(dof, x) - p;
    const double df = chi2_pdf(dof, x);
    if (df <= 0.0) break;
    const double next = x - f / df;
    if (next <= lo || next >= hi) break;
    x = next;
    if (std::abs(f) < 1e-14) break;
  }
  return x;
}

}  // namespace possets
