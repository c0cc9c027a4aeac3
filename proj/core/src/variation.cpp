#include "possets/variation.hpp"

#include <cmath>

namespace possets {

double variation(double t) {
  if (!(t > 0.0)) throw domain_error("variation: argument must be positive");
  // Near t = 1 compute via log1p(t-1) so the value stays accurate where g ~ 0.
  const double d = t - 1.0;
  if (std::abs(d) < 0.5) return d - std::log1p(d);
  return t - std::log(t) - 1.0;
}

double variation_deriv(double t) {
  if (!(t > 0.0)) throw domain_error("variation_deriv: argument must be positive");
  return 1.0 - 1.0 / t;
}

Vec variation_vec(const Vec& z) {
  Vec y(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) y[i] = variation(z[i]);
  return y;
}

namespace {

// g as a function of theta = ln t: G(theta) = exp(theta) - theta - 1.
// Both inverse branches bisect in theta, which keeps the bracket meaningful
// across the 600 orders of magnitude the lower branch spans.
double g_of_log(double theta) {
  return std::expm1(theta) - theta;
}

double invert_on_log_bracket(double y, double theta_lo, double theta_hi, double tol) {
  const double width_target = std::min(tol, 1e-12);
  double lo = theta_lo;
  double hi = theta_hi;
  // G is decreasing in theta for theta < 0 and increasing for theta > 0;
  // brackets sit on one side of 0, so orientation is fixed up front.
  const bool increasing = g_of_log(hi) >= g_of_log(lo);
  for (int it = 0; it < 200 && hi - lo > width_target; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((g_of_log(mid) > y) == increasing)
      hi = mid;
    else
      lo = mid;
  }
  double theta = 0.5 * (lo + hi);
  for (int k = 0; k < 2; ++k) {  // Newton polish, safeguarded by the bracket
    const double slope = std::expm1(theta);  // dG/dtheta = e^theta - 1
    if (std::abs(slope) < 1e-18) break;
    double next = theta - (g_of_log(theta) - y) / slope;
    if (next < lo || next > hi) break;
    theta = next;
  }
  return theta;
}

}  // namespace

double variation_inverse_lower(double y, double tol) {
  if (!(y >= 0.0)) throw domain_error("variation_inverse_lower: target must be nonnegative");
  if (y == 0.0) return 1.0;
  // g(exp(-(y+1))) = y + exp(-(y+1)) > y, so theta_lo = -(y+1) brackets.
  double theta_lo = -(y + 1.0);
  const double theta_floor = std::log(kVariationArgFloor);
  if (theta_lo < theta_floor) {
    // Beyond double range; saturate at the smallest argument we hand out.
    if (g_of_log(theta_floor) <= y) return kVariationArgFloor;
    theta_lo = theta_floor;
  }
  const double theta = invert_on_log_bracket(y, theta_lo, 0.0, tol);
  return std::max(std::exp(theta), kVariationArgFloor);
}

double variation_inverse_upper(double y, double tol) {
  if (!(y >= 0.0)) throw domain_error("variation_inverse_upper: target must be nonnegative");
  if (y == 0.0) return 1.0;
  // Doubling bracket: grow t until g(t) >= y.
  double theta_hi = std::log(2.0);
  for (int k = 0; k < 1100 && g_of_log(theta_hi) < y; ++k) theta_hi += std::log(2.0);
  const double theta = invert_on_log_bracket(y, 0.0, theta_hi, tol);
  return std::exp(theta);
}

}  // namespace possets
