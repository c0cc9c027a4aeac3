#pragma once

#include <functional>
#include <vector>

#include "possets/uncertainty_set.hpp"

namespace possets {

// Pessimization oracle: worst-case scenarios min_{a in set} f(a, x),
// boundary/KKT diagnostics, analytic per-coordinate bounds and the
// exponential decay envelope of the lower inverse branch.

struct MonotoneObjective {
  enum class Tag { increasing, decreasing, general };

  std::function<double(const Vec& a, const Vec& x)> evaluate;
  std::function<Vec(const Vec& a, const Vec& x)> gradient_a;
  /// Optional; treated as zero when absent (exact for linear objectives).
  std::function<Mat(const Vec& a, const Vec& x)> hessian_a;
  Tag tag = Tag::general;
  bool linear_in_a = false;

  /// Indices with a numerically nonvanishing partial at the probe point:
  /// |df/da_i| > thresh evaluated at a0.
  std::vector<int> active_indices(const Vec& a0, const Vec& x,
                                  double thresh = 1e-10) const;
};

/// f(a, x) = a^T x, the workhorse for uncertain linear rows: the x argument
/// carries the coefficient vector the parameter multiplies.
MonotoneObjective linear_objective();

struct WorstCaseCertificate {
  Vec a_star;
  Vec z_star;
  Vec y_star;
  double value = 0.0;
  double budget_residual = 0.0;  // ||A y*|| - tau
  Vec theta;                     // multiplier of a - diag(a0) z = 0
  Vec lambda;                    // m+1 multipliers: variation rows, then budget
  std::vector<int> active;       // numerically active coordinate set
  std::vector<int> free_indices; // inactive coordinates; positions unconstrained
  bool converged = false;
};

/// Solves min f(diag(a0) z, x) over g(z_i) <= y_i, ||A y|| <= tau (plus the
/// ellipsoidal component when present).  Closed-form routes handle tau = 0
/// and the diagonal-A monotone-linear case (single dual variable located by
/// bisection); everything else goes through the log-barrier Newton solver on
/// (z, y) with feasible start z = e.
WorstCaseCertificate worst_case(const UncertaintySet& set, const MonotoneObjective& obj,
                                const Vec& x, double tol = 1e-8);

struct CoordinateBounds {
  Vec lower;
  Vec upper;
};

/// Per-coordinate envelope of the worst-case scenario:
/// increasing case  [g_-^{-1}(tau ||A^{-1}||) a0_i, a0_i], decreasing mirrored.
/// ||A^{-1}|| is the operator norm induced by set.norm.
CoordinateBounds worst_case_bounds(const UncertaintySet& set,
                                   MonotoneObjective::Tag monotonicity,
                                   double tol = 1e-12);

/// Exponential envelope (lower, upper) for g_-^{-1}(tau ||A^{-1}||):
///   beta(alpha) exp(-tau ||A^{-1}|| / alpha) <= g_-^{-1}(.) <= exp(-tau ||A^{-1}||)
/// with beta(alpha) = exp(-(alpha + (1-alpha) ln(1-alpha)) / alpha); at
/// alpha = 1/2 the lower factor is (2/e) exp(-2 ||A^{-1}|| tau).
std::pair<double, double> decay_envelope(double tau, const Mat& A, double alpha,
                                         NormKind norm = NormKind::L2);

/// Boundary check: | ||A y*|| - tau | <= tol and g(z*_i) = y*_i within tol on
/// the given active indices.  Vacuous (true) for an empty active set.
bool verify_boundary(const WorstCaseCertificate& cert, const UncertaintySet& set,
                     const std::vector<int>& active, double tol);

}  // namespace possets
