#pragma once

#include <optional>

#include "possets/norms.hpp"
#include "possets/types.hpp"

namespace possets {

// The positivity-preserving uncertainty set
//
//   { a = diag(a0) z : g(z_i) <= y_i,  ||A y|| <= tau }
//
// optionally intersected with the ellipsoidal component ||V (z - e)|| <= delta.
// Every member has strictly positive coordinates for any finite tau, which is
// the point of the model.
struct UncertaintySet {
  Vec a0;                     // nominal value, strictly positive
  double tau = 0.0;           // uncertainty level, >= 0
  Mat A;                      // variation-space shape, m x m
  std::optional<Mat> V;       // ellipsoidal-component shape
  std::optional<double> delta;  // ellipsoidal radius, >= 0
  NormKind norm = NormKind::L2;

  UncertaintySet() = default;
  UncertaintySet(Vec a0_, double tau_, Mat A_, NormKind norm_ = NormKind::L2);
  UncertaintySet(Vec a0_, double tau_, Mat A_, Mat V_, double delta_,
                 NormKind norm_ = NormKind::L2);

  Eigen::Index dim() const { return a0.size(); }
  bool has_ellipsoid() const { return V.has_value(); }

  /// Validates the invariants (positive a0, nonnegative tau/delta, square
  /// shapes of matching dimension).  Called by the constructors; constructing
  /// a set with any a0_i <= 0 is a hard error, not a runtime NaN.
  void validate() const;
};

struct PointDiagnostics {
  Vec z;            // scaled point diag(a0)^{-1} a
  Vec y;            // coordinatewise variations g(z_i) (tight, not relaxed)
  double budget = 0.0;  // ||A y|| in the set's norm
  double ell_budget = 0.0;  // ||V (z - e)|| when the ellipsoid is active
  bool inside = false;
};

/// Membership test at the tight witness y = g(z).  This is the sufficient
/// test of the membership criterion: exact whenever the minimal feasible y
/// is optimal for the norm (A with nonnegative entries, which covers the
/// diagonal and calibrated covariance cases), and conservative-safe
/// otherwise -- it never reports an outside point as inside.
/// Points with a nonpositive coordinate come back inside=false, budget=inf.
PointDiagnostics contains(const UncertaintySet& set, const Vec& a, double tol = 1e-12);

/// A point on the boundary surface { ||A y|| = tau, y_i = g(z_i) }.
/// `direction` is scaled so that ||A (rho * direction)|| = tau; its entries
/// must be nonnegative and not all zero.  `upper_branch[i]` picks z_i >= 1
/// instead of z_i <= 1.  For tau = 0 the boundary degenerates to {a0}.
/// The result is strictly positive in every coordinate.
Vec boundary_sample(const UncertaintySet& set, const Vec& direction,
                    const std::vector<bool>& upper_branch, double tol = 1e-12);

}  // namespace possets
