#include "possets/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "possets/convex_solver.hpp"
#include "possets/variation.hpp"

namespace possets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// h(z) = g(z) g'(z) = g(z)(1 - 1/z): the stationarity function of the
// diagonal fast path.  Strictly increasing on each branch, negative below 1,
// positive above.  With z floored at 1e-300 the value stays finite.
double stationarity(double z) {
  return variation(z) * (1.0 - 1.0 / z);
}

// Solves h(z) = theta on the lower branch (theta < 0) or upper branch
// (theta > 0); bisection in ln z.
double solve_stationarity(double theta) {
  if (theta == 0.0) return 1.0;
  double lo, hi;
  if (theta < 0.0) {
    lo = std::log(kVariationArgFloor);
    hi = 0.0;
    if (stationarity(kVariationArgFloor) >= theta) return kVariationArgFloor;
  } else {
    lo = 0.0;
    hi = std::log(2.0);
    while (stationarity(std::exp(hi)) < theta && hi < 700.0) hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (stationarity(std::exp(mid)) < theta)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

struct FastPathResult {
  bool applicable = false;
  Vec z;
  Vec y;
  double dual_nu = 0.0;  // budget multiplier of the scalar dual search
};

// Diagonal A, L2 budget, linear objective: coordinatewise stationarity
// g(z_i) g'(z_i) = -q_i a0_i / (nu d_i^2) plus a single scalar dual variable
// nu located by bisection on the budget ||diag(d) y(nu)|| = tau.
FastPathResult diagonal_fast_path(const UncertaintySet& set, const Vec& q,
                                  const std::vector<int>& active, double tol) {
  FastPathResult res;
  const Eigen::Index m = set.dim();
  Vec d = set.A.diagonal().cwiseAbs();

  res.z = Vec::Ones(m);
  res.y = Vec::Zero(m);
  if (active.empty()) {
    res.applicable = true;
    return res;
  }

  if (active.size() == 1) {
    // All budget on the single active coordinate.
    const int i = active.front();
    const double yi = set.tau / d[i];
    res.y[i] = yi;
    res.z[i] = q[i] > 0.0 ? variation_inverse_lower(yi, tol)
                          : variation_inverse_upper(yi, tol);
    res.applicable = true;
    return res;
  }

  auto budget_at = [&](double nu, Vec* z_out, Vec* y_out) {
    double b2 = 0.0;
    for (int i : active) {
      const double theta = -q[i] * set.a0[i] / (nu * d[i] * d[i]);
      const double zi = solve_stationarity(theta);
      const double yi = variation(zi);
      if (z_out) (*z_out)[i] = zi;
      if (y_out) (*y_out)[i] = yi;
      b2 += d[i] * d[i] * yi * yi;
    }
    return std::sqrt(b2);
  };

  // Budget is strictly decreasing in nu; bracket in log space.
  double lo = 1e-300, hi = 1.0;
  while (budget_at(hi, nullptr, nullptr) > set.tau && hi < 1e280) hi *= 10.0;
  while (budget_at(lo, nullptr, nullptr) < set.tau && lo < 1.0) lo *= 10.0;
  if (lo >= hi) lo = hi * 1e-16;
  double llo = std::log(lo), lhi = std::log(hi);
  for (int it = 0; it < 300 && lhi - llo > 1e-13; ++it) {
    const double mid = 0.5 * (llo + lhi);
    if (budget_at(std::exp(mid), nullptr, nullptr) > set.tau)
      llo = mid;
    else
      lhi = mid;
  }
  res.dual_nu = std::exp(0.5 * (llo + lhi));
  budget_at(res.dual_nu, &res.z, &res.y);
  res.applicable = true;
  return res;
}

bool is_diagonal(const Mat& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (i != j && A(i, j) != 0.0) return false;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (A(i, i) == 0.0) return false;
  return true;
}

// General route: log-barrier Newton over (z, y) (plus auxiliaries for the
// L1 budget), feasible start z = e.
WorstCaseCertificate barrier_worst_case(const UncertaintySet& set,
                                        const MonotoneObjective& obj, const Vec& x,
                                        double tol,
                                        const std::vector<int>& active) {
  const Eigen::Index m = set.dim();
  const int naux_budget = set.norm == NormKind::L1 ? static_cast<int>(m) : 0;
  const int naux_ell = (set.V && set.norm == NormKind::L1) ? static_cast<int>(m) : 0;
  const int idx_y = static_cast<int>(m);
  const int idx_pb = 2 * static_cast<int>(m);
  const int idx_pe = idx_pb + naux_budget;

  ConvexProgram prog;
  prog.n = 2 * static_cast<int>(m) + naux_budget + naux_ell;

  const Vec& a0 = set.a0;
  prog.objective = [&obj, &a0, &x, m](const Vec& v, Vec* grad, Mat* hess) -> double {
    const Vec z = v.head(m);
    if ((z.array() <= 0.0).any()) return kInf;
    const Vec a = a0.cwiseProduct(z);
    const double val = obj.evaluate(a, x);
    if (grad) grad->head(m) += a0.cwiseProduct(obj.gradient_a(a, x));
    if (hess && obj.hessian_a) {
      const Mat Ha = obj.hessian_a(a, x);
      hess->topLeftCorner(m, m) += a0.asDiagonal() * Ha * a0.asDiagonal();
    }
    return val;
  };

  // Variation epigraph rows g(z_i) - y_i <= 0.
  for (Eigen::Index i = 0; i < m; ++i) {
    prog.inequalities.push_back([i, idx_y](const Vec& v, Vec* grad, Mat* hess) -> double {
      const double zi = v[i];
      if (!(zi > 0.0)) return kInf;
      if (grad) {
        (*grad)[i] += 1.0 - 1.0 / zi;
        (*grad)[idx_y + i] -= 1.0;
      }
      if (hess) (*hess)(i, i) += 1.0 / (zi * zi);
      return variation(zi) - v[idx_y + i];
    });
  }

  const Mat& A = set.A;
  const double tau = set.tau;
  switch (set.norm) {
    case NormKind::L2: {
      const Mat AtA = A.transpose() * A;
      prog.inequalities.push_back([&A, AtA, tau, m, idx_y](const Vec& v, Vec* grad,
                                                           Mat* hess) -> double {
        const Vec y = v.segment(idx_y, m);
        const Vec Ay = A * y;
        if (grad) grad->segment(idx_y, m) += 2.0 * (AtA * y);
        if (hess) hess->block(idx_y, idx_y, m, m) += 2.0 * AtA;
        return Ay.squaredNorm() - tau * tau;
      });
      break;
    }
    case NormKind::LInf: {
      for (Eigen::Index j = 0; j < m; ++j)
        for (const double sgn : {1.0, -1.0})
          prog.inequalities.push_back([&A, tau, j, sgn, m, idx_y](const Vec& v, Vec* grad,
                                                                  Mat*) -> double {
            const double rowval = A.row(j).dot(Vec(v.segment(idx_y, m)));
            if (grad) grad->segment(idx_y, m) += sgn * A.row(j).transpose();
            return sgn * rowval - tau;
          });
      break;
    }
    case NormKind::L1: {
      for (Eigen::Index j = 0; j < m; ++j)
        for (const double sgn : {1.0, -1.0})
          prog.inequalities.push_back([&A, j, sgn, m, idx_y, idx_pb](const Vec& v, Vec* grad,
                                                                     Mat*) -> double {
            const double rowval = A.row(j).dot(Vec(v.segment(idx_y, m)));
            if (grad) {
              grad->segment(idx_y, m) += sgn * A.row(j).transpose();
              (*grad)[idx_pb + j] -= 1.0;
            }
            return sgn * rowval - v[idx_pb + j];
          });
      prog.inequalities.push_back([m, idx_pb, tau](const Vec& v, Vec* grad, Mat*) -> double {
        if (grad)
          for (Eigen::Index j = 0; j < m; ++j) (*grad)[idx_pb + j] += 1.0;
        return v.segment(idx_pb, m).sum() - tau;
      });
      break;
    }
  }

  if (set.V) {
    const Mat& V = *set.V;
    const double delta = *set.delta;
    switch (set.norm) {
      case NormKind::L2: {
        const Mat VtV = V.transpose() * V;
        prog.inequalities.push_back([&V, VtV, delta, m](const Vec& v, Vec* grad,
                                                        Mat* hess) -> double {
          const Vec ze = v.head(m) - Vec::Ones(m);
          if (grad) grad->head(m) += 2.0 * (VtV * ze);
          if (hess) hess->topLeftCorner(m, m) += 2.0 * VtV;
          return (V * ze).squaredNorm() - delta * delta;
        });
        break;
      }
      case NormKind::LInf: {
        for (Eigen::Index j = 0; j < m; ++j)
          for (const double sgn : {1.0, -1.0})
            prog.inequalities.push_back([&V, delta, j, sgn, m](const Vec& v, Vec* grad,
                                                               Mat*) -> double {
              const double rowval = V.row(j).dot(Vec(v.head(m) - Vec::Ones(m)));
              if (grad) grad->head(m) += sgn * V.row(j).transpose();
              return sgn * rowval - delta;
            });
        break;
      }
      case NormKind::L1: {
        for (Eigen::Index j = 0; j < m; ++j)
          for (const double sgn : {1.0, -1.0})
            prog.inequalities.push_back([&V, j, sgn, m, idx_pe](const Vec& v, Vec* grad,
                                                                Mat*) -> double {
              const double rowval = V.row(j).dot(Vec(v.head(m) - Vec::Ones(m)));
              if (grad) {
                grad->head(m) += sgn * V.row(j).transpose();
                (*grad)[idx_pe + j] -= 1.0;
              }
              return sgn * rowval - v[idx_pe + j];
            });
        const double delta_cap = delta;
        prog.inequalities.push_back([m, idx_pe, delta_cap](const Vec& v, Vec* grad,
                                                           Mat*) -> double {
          if (grad)
            for (Eigen::Index j = 0; j < m; ++j) (*grad)[idx_pe + j] += 1.0;
          return v.segment(idx_pe, m).sum() - delta_cap;
        });
        break;
      }
    }
  }

  // Feasible start: z = e, y = c e with budget tau/2.
  prog.start = Vec::Zero(prog.n);
  prog.start.head(m).setOnes();
  const double ae = vector_norm(A * Vec::Ones(m), set.norm);
  const double c = ae > 0.0 ? 0.5 * tau / ae : 0.5 * tau;
  prog.start.segment(idx_y, m).setConstant(c);
  if (naux_budget > 0) {
    const Vec Ay = (A * prog.start.segment(idx_y, m)).cwiseAbs();
    for (Eigen::Index j = 0; j < m; ++j)
      prog.start[idx_pb + j] = Ay[j] + 0.25 * tau / static_cast<double>(m);
  }
  if (naux_ell > 0)
    prog.start.segment(idx_pe, m).setConstant(0.5 * (*set.delta) / static_cast<double>(m));

  SolverOptions opts;
  opts.tol = tol;
  Vec v;
  const SolveInfo info = smooth_convex_solve(prog, v, opts);

  WorstCaseCertificate cert;
  cert.z_star = v.head(m);
  cert.y_star = v.segment(idx_y, m);
  cert.a_star = set.a0.cwiseProduct(cert.z_star);
  cert.value = obj.evaluate(cert.a_star, x);
  cert.budget_residual = vector_norm(set.A * cert.y_star, set.norm) - set.tau;
  cert.active = active;
  cert.converged = info.status == SolveStatus::optimal;
  cert.theta = -obj.gradient_a(cert.a_star, x);
  cert.lambda = Vec::Zero(m + 1);
  for (Eigen::Index i = 0; i < m; ++i) cert.lambda[i] = info.multipliers[i];
  if (set.norm == NormKind::L2 && info.multipliers.size() > m)
    cert.lambda[m] = 2.0 * set.tau * info.multipliers[m];
  return cert;
}

}  // namespace

std::vector<int> MonotoneObjective::active_indices(const Vec& a0, const Vec& x,
                                                   double thresh) const {
  const Vec g = gradient_a(a0, x);
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (std::abs(g[i]) > thresh) idx.push_back(static_cast<int>(i));
  return idx;
}

MonotoneObjective linear_objective() {
  MonotoneObjective obj;
  obj.evaluate = [](const Vec& a, const Vec& x) { return a.dot(x); };
  obj.gradient_a = [](const Vec&, const Vec& x) { return x; };
  obj.tag = MonotoneObjective::Tag::general;
  obj.linear_in_a = true;
  return obj;
}

WorstCaseCertificate worst_case(const UncertaintySet& set, const MonotoneObjective& obj,
                                const Vec& x, double tol) {
  require(static_cast<bool>(obj.evaluate) && static_cast<bool>(obj.gradient_a),
          "worst_case: objective must provide evaluate and gradient_a");
  const Eigen::Index m = set.dim();
  const std::vector<int> active = obj.active_indices(set.a0, x);
  std::vector<int> free_idx;
  for (int i = 0; i < static_cast<int>(m); ++i)
    if (std::find(active.begin(), active.end(), i) == active.end()) free_idx.push_back(i);

  // Degenerate budgets pin the set to the nominal point.
  if (set.tau == 0.0 || (set.V && *set.delta == 0.0) || active.empty()) {
    WorstCaseCertificate cert;
    cert.z_star = Vec::Ones(m);
    cert.y_star = Vec::Zero(m);
    cert.a_star = set.a0;
    cert.value = obj.evaluate(set.a0, x);
    cert.budget_residual = -set.tau;
    cert.theta = -obj.gradient_a(set.a0, x);
    cert.lambda = Vec::Zero(m + 1);
    cert.active = active;
    cert.free_indices = free_idx;
    cert.converged = true;
    if (active.empty() && set.tau > 0.0) cert.budget_residual = -set.tau;
    return cert;
  }

  if (obj.linear_in_a && !set.V && set.norm == NormKind::L2 && is_diagonal(set.A)) {
    const Vec q = obj.gradient_a(set.a0, x);
    FastPathResult fp = diagonal_fast_path(set, q, active, tol);
    if (fp.applicable) {
      WorstCaseCertificate cert;
      cert.z_star = fp.z;
      cert.y_star = fp.y;
      cert.a_star = set.a0.cwiseProduct(fp.z);
      cert.value = obj.evaluate(cert.a_star, x);
      cert.budget_residual = vector_norm(set.A * fp.y, set.norm) - set.tau;
      cert.theta = -q;
      cert.lambda = Vec::Zero(m + 1);
      for (int i : active) {
        const double zi = fp.z[i];
        if (zi != 1.0)
          cert.lambda[i] = set.a0[i] * q[i] * zi / (1.0 - zi);
      }
      // lambda = lambda_{m+1} eta with eta in the subdifferential of ||A y||.
      const double budget = vector_norm(set.A * fp.y, set.norm);
      if (budget > 0.0) {
        const Vec eta = (set.A.transpose() * (set.A * fp.y)) / budget;
        for (int i : active)
          if (std::abs(eta[i]) > 1e-300) {
            cert.lambda[m] = cert.lambda[i] / eta[i];
            break;
          }
      }
      cert.active = active;
      cert.free_indices = free_idx;
      cert.converged = true;
      return cert;
    }
  }

  WorstCaseCertificate cert = barrier_worst_case(set, obj, x, tol, active);
  cert.free_indices = free_idx;
  return cert;
}

CoordinateBounds worst_case_bounds(const UncertaintySet& set,
                                   MonotoneObjective::Tag monotonicity, double tol) {
  Eigen::FullPivLU<Mat> lu(set.A);
  if (!lu.isInvertible()) throw numerical_error("worst_case_bounds: singular A");
  const double ainv = operator_norm(lu.inverse(), set.norm);
  const double budget = set.tau * ainv;
  CoordinateBounds b;
  if (monotonicity == MonotoneObjective::Tag::increasing) {
    b.lower = variation_inverse_lower(budget, tol) * set.a0;
    b.upper = set.a0;
  } else if (monotonicity == MonotoneObjective::Tag::decreasing) {
    b.lower = set.a0;
    b.upper = variation_inverse_upper(budget, tol) * set.a0;
  } else {
    b.lower = variation_inverse_lower(budget, tol) * set.a0;
    b.upper = variation_inverse_upper(budget, tol) * set.a0;
  }
  return b;
}

std::pair<double, double> decay_envelope(double tau, const Mat& A, double alpha,
                                         NormKind norm) {
  require(alpha > 0.0 && alpha < 1.0, "decay_envelope: alpha must lie in (0,1)");
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw numerical_error("decay_envelope: singular A");
  const double y = tau * operator_norm(lu.inverse(), norm);
  // Smallest admissible shift: delta(alpha) = alpha + (1-alpha) ln(1-alpha).
  const double delta = alpha + (1.0 - alpha) * std::log1p(-alpha);
  const double beta = std::exp(-delta / alpha);
  return {beta * std::exp(-y / alpha), std::exp(-y)};
}

bool verify_boundary(const WorstCaseCertificate& cert, const UncertaintySet& set,
                     const std::vector<int>& active, double tol) {
  if (active.empty()) return true;  // the boundary claim only covers active coordinates
  if (std::abs(vector_norm(set.A * cert.y_star, set.norm) - set.tau) > tol) return false;
  for (int i : active)
    if (std::abs(variation(cert.z_star[i]) - cert.y_star[i]) > tol) return false;
  return true;
}

}  // namespace possets
