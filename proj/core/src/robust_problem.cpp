#include "possets/robust_problem.hpp"

namespace possets {

Eigen::Index UncertainTerm::dim() const {
  return omega ? omega->dim() : ellipsoid->a0.size();
}

const Vec& UncertainTerm::nominal() const {
  return omega ? omega->a0 : ellipsoid->a0;
}

Vec UncertainTerm::factor(const Vec& x) const {
  Vec q(dim());
  for (Eigen::Index k = 0; k < q.size(); ++k)
    q[k] = scale[k] * (vars[static_cast<size_t>(k)] < 0 ? 1.0 : x[vars[static_cast<size_t>(k)]]);
  return q;
}

void UncertainTerm::validate(Eigen::Index num_vars) const {
  require(omega.has_value() != ellipsoid.has_value(),
          "UncertainTerm: exactly one uncertainty model per row");
  const Eigen::Index m = dim();
  require(static_cast<Eigen::Index>(vars.size()) == m && scale.size() == m,
          "UncertainTerm: mapping dimension must match the set dimension");
  for (int v : vars)
    require(v >= -1 && v < static_cast<int>(num_vars), "UncertainTerm: variable index out of range");
  if (ellipsoid)
    require(ellipsoid->Sigma.rows() == m && ellipsoid->Sigma.cols() == m,
            "UncertainTerm: ellipsoid shape dimension mismatch");
}

void RobustProblem::validate() const {
  const Eigen::Index n = num_vars();
  require(n > 0, "RobustProblem: no variables");
  require(lower.size() == n && upper.size() == n, "RobustProblem: bounds dimension mismatch");
  for (Eigen::Index j = 0; j < n; ++j)
    require(lower[j] <= upper[j], "RobustProblem: crossing bounds");
  for (const auto& row : rows) {
    require(row.coeffs.size() == n, "RobustProblem: row dimension mismatch");
    if (row.uncertainty) {
      require(row.sense != RowSense::eq, "RobustProblem: equality rows cannot be uncertain");
      row.uncertainty->validate(n);
    }
  }
}

}  // namespace possets
