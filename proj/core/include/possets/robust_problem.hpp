#pragma once

#include <optional>
#include <vector>

#include "possets/uncertainty_set.hpp"

namespace possets {

inline constexpr double kInfBound = 1e18;  // sentinel for infinite bounds

enum class RowSense { le, ge, eq };
enum class ObjSense { minimize, maximize };
enum class Monotone { increasing, decreasing, unspecified };

/// Reference ellipsoidal model (a - a0)^T Sigma^{-1} (a - a0) <= delta^2,
/// used to contrast against the positivity-preserving set.  Supported by the
/// cutting-plane path only; its pessimization is closed-form.
struct EllipsoidSet {
  Vec a0;
  Mat Sigma;
  double delta = 0.0;
};

/// Uncertain addition to a row:  sum_k a_k * scale_k * chi_k(x)  with
/// chi_k(x) = x[vars_k] (or the constant 1 when vars_k < 0) and a ranging
/// over the attached set.  The default mapping (vars_k = k, scale = 1)
/// makes the row's whole coefficient vector uncertain.
struct UncertainTerm {
  std::optional<UncertaintySet> omega;
  std::optional<EllipsoidSet> ellipsoid;
  std::vector<int> vars;
  Vec scale;
  Monotone monotone = Monotone::unspecified;

  Eigen::Index dim() const;
  const Vec& nominal() const;
  /// q(x): the vector the uncertain parameter multiplies.
  Vec factor(const Vec& x) const;
  void validate(Eigen::Index num_vars) const;
};

struct LinearRow {
  Vec coeffs;  // certain part, over all variables
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  std::optional<UncertainTerm> uncertainty;
};

/// Linear objective + linear rows, a subset of which carry an uncertainty
/// set on their coefficients.  Bounds use +-1e18 sentinels for infinity.
struct RobustProblem {
  ObjSense sense = ObjSense::minimize;
  Vec c;
  Vec lower;
  Vec upper;
  std::vector<LinearRow> rows;

  Eigen::Index num_vars() const { return c.size(); }
  void validate() const;
};

}  // namespace possets
