#include "possets/uncertainty_set.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "possets/variation.hpp"

namespace possets {

UncertaintySet::UncertaintySet(Vec a0_, double tau_, Mat A_, NormKind norm_)
    : a0(std::move(a0_)), tau(tau_), A(std::move(A_)), norm(norm_) {
  validate();
}

UncertaintySet::UncertaintySet(Vec a0_, double tau_, Mat A_, Mat V_, double delta_,
                               NormKind norm_)
    : a0(std::move(a0_)),
      tau(tau_),
      A(std::move(A_)),
      V(std::move(V_)),
      delta(delta_),
      norm(norm_) {
  validate();
}

void UncertaintySet::validate() const {
  require(a0.size() > 0, "UncertaintySet: empty nominal value");
  for (Eigen::Index i = 0; i < a0.size(); ++i)
    require(a0[i] > 0.0, "UncertaintySet: nominal value must be strictly positive");
  require(tau >= 0.0, "UncertaintySet: tau must be nonnegative");
  require(A.rows() == a0.size() && A.cols() == a0.size(),
          "UncertaintySet: shape matrix dimension mismatch");
  require(V.has_value() == delta.has_value(),
          "UncertaintySet: V and delta must be given together");
  if (V) {
    require(V->rows() == a0.size() && V->cols() == a0.size(),
            "UncertaintySet: ellipsoid shape dimension mismatch");
    require(*delta >= 0.0, "UncertaintySet: delta must be nonnegative");
  }
}

PointDiagnostics contains(const UncertaintySet& set, const Vec& a, double tol) {
  require(a.size() == set.dim(), "contains: dimension mismatch");
  PointDiagnostics d;
  d.z = a.cwiseQuotient(set.a0);
  if ((d.z.array() <= 0.0).any()) {
    d.y = Vec::Constant(set.dim(), std::numeric_limits<double>::infinity());
    d.budget = std::numeric_limits<double>::infinity();
    d.inside = false;
    return d;
  }
  d.y = variation_vec(d.z);
  d.budget = vector_norm(set.A * d.y, set.norm);
  d.inside = d.budget <= set.tau + tol;
  if (set.V) {
    d.ell_budget = vector_norm((*set.V) * (d.z - Vec::Ones(set.dim())), set.norm);
    d.inside = d.inside && d.ell_budget <= *set.delta + tol;
  }
  return d;
}

Vec boundary_sample(const UncertaintySet& set, const Vec& direction,
                    const std::vector<bool>& upper_branch, double tol) {
  require(direction.size() == set.dim(), "boundary_sample: dimension mismatch");
  require(upper_branch.size() == static_cast<size_t>(set.dim()),
          "boundary_sample: branch selector dimension mismatch");
  if (set.tau == 0.0) return set.a0;  // the boundary degenerates to the nominal point
  require((direction.array() >= 0.0).all(), "boundary_sample: direction must be nonnegative");
  const double scale = vector_norm(set.A * direction, set.norm);
  require(scale > 0.0, "boundary_sample: direction not scalable to the budget surface");
  const Vec y = (set.tau / scale) * direction;
  Vec z(set.dim());
  for (Eigen::Index i = 0; i < set.dim(); ++i)
    z[i] = upper_branch[i] ? variation_inverse_upper(y[i], tol)
                           : variation_inverse_lower(y[i], tol);
  return set.a0.cwiseProduct(z);
}

}  // namespace possets
