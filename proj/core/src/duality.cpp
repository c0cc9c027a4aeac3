#include "possets/duality.hpp"

#include <cmath>
#include <limits>

#include "possets/norm_epigraph.hpp"

namespace possets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUMin = 1e-12;  // floor standing in for the open conditions u > 0, u - w > 0

// sum_k [ u_k ln(1 - w_k/u_k) + w_k ], the log part of the dual constraint.
// +inf domain marker when u or u - w leaves the positive orthant.
double log_term_sum(const Vec& u, const Vec& w) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (!(u[k] > 0.0) || !(u[k] - w[k] > 0.0)) return kInf;
    s += u[k] * std::log1p(-w[k] / u[k]) + w[k];
  }
  return s;
}

Mat inverse_or_throw(const Mat& M, const char* what) {
  Eigen::FullPivLU<Mat> lu(M);
  if (!lu.isInvertible()) throw numerical_error(std::string(what) + ": singular matrix");
  return lu.inverse();
}

struct SupportSolve {
  double value = kInf;
  Vec s1;
  Vec s2;  // empty when the ellipsoidal block is absent
};

// Minimizes, over (s1 [, s2]) with u = A^T s1 - y1 and w = y2 - V^T s2,
//
//   -eps e^T y1 - sum_k [u_k ln(1 - w_k/u_k) + w_k] + tau ||s1||_* + delta ||s2||_*
//
// which is the support function of the intersection evaluated through its
// equality-constrained split form.
SupportSolve support_z_solve(const Vec& y, const ShiftedSupportProblem& prob, double tol) {
  const Eigen::Index m = prob.dim();
  require(y.size() == 2 * m, "support_z: input must have dimension 2m");
  require(prob.tau > 0.0, "support_z: shifted problem needs tau > 0");
  const Vec y1 = y.head(m);
  const Vec y2 = y.tail(m);
  const bool ell = prob.V.has_value();
  const NormKind dual_kind = dual_norm_kind(prob.norm);

  const Mat A_invT = inverse_or_throw(prob.A.transpose(), "support_z (A)");
  Mat V_invT;
  if (ell) V_invT = inverse_or_throw(prob.V->transpose(), "support_z (V)");

  // Layout: s1 (m), r1, [s2 (m), r2], [aux1], [aux2]
  const int naux = NormEpigraph::aux_count(dual_kind, static_cast<int>(m));
  const int idx_r1 = static_cast<int>(m);
  const int idx_s2 = ell ? idx_r1 + 1 : -1;
  const int idx_r2 = ell ? idx_s2 + static_cast<int>(m) : -1;
  int next = ell ? idx_r2 + 1 : idx_r1 + 1;
  const int idx_aux1 = naux > 0 ? next : -1;
  next += naux;
  const int idx_aux2 = (ell && naux > 0) ? next : -1;
  next += ell ? naux : 0;

  ConvexProgram prog;
  prog.n = next;

  const Mat& A = prob.A;
  const double tau = prob.tau;
  const double delta = ell ? *prob.delta : 0.0;
  const Mat V = ell ? *prob.V : Mat();

  prog.objective = [m, ell, idx_r1, idx_r2, &A, &V, y1, y2, tau, delta](
                       const Vec& x, Vec* grad, Mat* hess) -> double {
    const Vec s1 = x.head(m);
    const Vec u = A.transpose() * s1 - y1;
    Vec w = y2;
    Vec s2;
    if (ell) {
      s2 = x.segment(idx_r2 - m, m);  // idx_s2 == idx_r2 - m
      w -= V.transpose() * s2;
    }
    double val = tau * x[idx_r1];
    if (ell) val += delta * x[idx_r2];
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!(u[k] > 0.0) || !(u[k] - w[k] > 0.0)) return kInf;
      val += -u[k] * std::log1p(-w[k] / u[k]) - w[k];
    }
    if (grad || hess) {
      Vec Lu(m), Lw(m), huu(m), huw(m), hww(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const double uk = u[k], wk = w[k], d = uk - wk;
        Lu[k] = -std::log1p(-wk / uk) - wk / d;
        Lw[k] = wk / d;
        huu[k] = wk * wk / (uk * d * d);
        huw[k] = -wk / (d * d);
        hww[k] = uk / (d * d);
      }
      if (grad) {
        grad->head(m) += A * Lu;
        (*grad)[idx_r1] += tau;
        if (ell) {
          grad->segment(idx_r2 - m, m) += -V * Lw;
          (*grad)[idx_r2] += delta;
        }
      }
      if (hess) {
        hess->topLeftCorner(m, m) += A * huu.asDiagonal() * A.transpose();
        if (ell) {
          const Mat Hsw = -(A * huw.asDiagonal() * V.transpose());
          hess->block(0, idx_r2 - m, m, m) += Hsw;
          hess->block(idx_r2 - m, 0, m, m) += Hsw.transpose();
          hess->block(idx_r2 - m, idx_r2 - m, m, m) += V * hww.asDiagonal() * V.transpose();
        }
      }
    }
    return val;
  };

  // Open conditions represented as u >= u_min, u - w >= u_min.
  for (Eigen::Index k = 0; k < m; ++k) {
    prog.inequalities.push_back([k, m, &A, y1](const Vec& x, Vec* grad, Mat*) {
      const double uk = A.col(k).dot(Vec(x.head(m))) - y1[k];
      if (grad) grad->head(m) -= A.col(k);
      return kUMin - uk;
    });
    prog.inequalities.push_back(
        [k, m, ell, idx_r2, &A, &V, y1, y2](const Vec& x, Vec* grad, Mat*) {
          const double uk = A.col(k).dot(Vec(x.head(m))) - y1[k];
          double wk = y2[k];
          if (ell) wk -= V.col(k).dot(Vec(x.segment(idx_r2 - m, m)));
          if (grad) {
            grad->head(m) -= A.col(k);
            if (ell) grad->segment(idx_r2 - m, m) -= V.col(k);
          }
          return kUMin - (uk - wk);
        });
  }

  std::vector<int> s1_idx(m);
  for (Eigen::Index j = 0; j < m; ++j) s1_idx[j] = static_cast<int>(j);
  NormEpigraph::add(prog, dual_kind, s1_idx, idx_r1, idx_aux1);
  if (ell) {
    std::vector<int> s2_idx(m);
    for (Eigen::Index j = 0; j < m; ++j) s2_idx[j] = idx_s2 + static_cast<int>(j);
    NormEpigraph::add(prog, dual_kind, s2_idx, idx_r2, idx_aux2);
  }

  // Strictly feasible start: pick u comfortably above max(w, 0).
  Vec w0 = y2;  // s2 = 0
  Vec u_target(m);
  for (Eigen::Index k = 0; k < m; ++k) u_target[k] = std::max(w0[k], 0.0) + 1.0;
  const Vec s1_start = A_invT * (u_target + y1);
  prog.start = Vec::Zero(prog.n);
  prog.start.head(m) = s1_start;
  double r1s;
  Vec aux1;
  NormEpigraph::feasible_point(dual_kind, s1_start, r1s, aux1);
  prog.start[idx_r1] = r1s;
  if (idx_aux1 >= 0) prog.start.segment(idx_aux1, naux) = aux1;
  if (ell) {
    double r2s;
    Vec aux2;
    NormEpigraph::feasible_point(dual_kind, Vec::Zero(m), r2s, aux2);
    prog.start[idx_r2] = r2s;
    if (idx_aux2 >= 0) prog.start.segment(idx_aux2, naux) = aux2;
  }

  SolverOptions opts;
  opts.tol = tol;
  Vec x;
  const SolveInfo info = smooth_convex_solve(prog, x, opts);
  SupportSolve out;
  if (info.status != SolveStatus::optimal) return out;  // +inf
  out.s1 = x.head(m);
  if (ell) out.s2 = x.segment(idx_s2, m);
  // Evaluate with the exact dual norms rather than the epigraph slack.
  Vec u = prob.A.transpose() * out.s1 - y1;
  Vec w = y2;
  if (ell) w -= prob.V->transpose() * out.s2;
  out.value = -prob.eps * y1.sum() - log_term_sum(u, w) +
              prob.tau * dual_vector_norm(out.s1, prob.norm);
  if (ell) out.value += *prob.delta * dual_vector_norm(out.s2, prob.norm);
  return out;
}

}  // namespace

ShiftedSupportProblem::ShiftedSupportProblem(Mat A_, double tau_, double eps_, NormKind norm_)
    : A(std::move(A_)), tau(tau_), eps(eps_), norm(norm_) {
  require(tau > 0.0, "ShiftedSupportProblem: tau must be positive");
  require(eps > 0.0 && eps * vector_norm(A * Vec::Ones(A.rows()), norm) < tau,
          "ShiftedSupportProblem: need eps ||A e|| < tau strictly");
}

ShiftedSupportProblem::ShiftedSupportProblem(Mat A_, double tau_, Mat V_, double delta_,
                                             double eps_, NormKind norm_)
    : ShiftedSupportProblem(std::move(A_), tau_, eps_, norm_) {
  V = std::move(V_);
  delta = delta_;
  require(V->rows() == A.rows() && V->cols() == A.cols(),
          "ShiftedSupportProblem: V dimension mismatch");
  require(delta_ >= 0.0, "ShiftedSupportProblem: delta must be nonnegative");
}

double ShiftedSupportProblem::default_eps(const Mat& A, double tau, NormKind norm) {
  const double ae = vector_norm(A * Vec::Ones(A.rows()), norm);
  return ae > 0.0 ? std::min(1e-9, 0.5 * tau / ae) : 1e-9;
}

double DualCertificate::linear_residual(const UncertaintySet& set) const {
  double r = (set.A.transpose() * s1 - u).cwiseAbs().maxCoeff();
  Vec rhs = set.a0.cwiseProduct(v);
  Vec lhs = w;
  if (s2 && set.V) lhs += set.V->transpose() * (*s2);
  r = std::max(r, (lhs - rhs).cwiseAbs().maxCoeff());
  return r;
}

ConjugateOracle linear_constraint_conjugate(double b, double tol) {
  return [b, tol](const Vec& v, const Vec& x) -> double {
    return (v - x).cwiseAbs().maxCoeff() <= tol ? b : -kInf;
  };
}

ConjugateOracle linear_objective_conjugate(double tol) {
  return [tol](const Vec& v, const Vec& x) -> double {
    return (v - x).cwiseAbs().maxCoeff() <= tol ? 0.0 : -kInf;
  };
}

double support_z1(const Vec& y, double eps) {
  require(y.size() % 2 == 0, "support_z1: input must have even dimension");
  const Eigen::Index m = y.size() / 2;
  const Vec u = -y.head(m);
  const Vec w = y.tail(m);
  const double logs = log_term_sum(u, w);
  if (!std::isfinite(logs)) return kInf;
  return eps * u.sum() - logs;
}

double support_z2(const Vec& y, const Mat& A, double tau, double eps, NormKind norm) {
  require(y.size() == 2 * A.rows(), "support_z2: dimension mismatch");
  const Eigen::Index m = A.rows();
  if (y.tail(m).cwiseAbs().maxCoeff() > 0.0) return kInf;
  Eigen::FullPivLU<Mat> lu(A.transpose());
  if (!lu.isInvertible()) throw numerical_error("support_z2: singular A");
  const Vec s = lu.solve(y.head(m));
  return tau * dual_vector_norm(s, norm) - eps * y.head(m).sum();
}

double support_z3(const Vec& y, const Mat& V, double delta, NormKind norm) {
  require(y.size() == 2 * V.rows(), "support_z3: dimension mismatch");
  const Eigen::Index m = V.rows();
  if (y.head(m).cwiseAbs().maxCoeff() > 0.0) return kInf;
  Eigen::FullPivLU<Mat> lu(V.transpose());
  if (!lu.isInvertible()) throw numerical_error("support_z3: singular V");
  const Vec s = lu.solve(y.tail(m));
  return delta * dual_vector_norm(s, norm);
}

double support_z(const Vec& y, const ShiftedSupportProblem& prob) {
  return support_z_solve(y, prob, 1e-10).value;
}

double dual_constraint_residual(const DualCertificate& cert, const Vec& x,
                                const UncertaintySet& set, const ConjugateOracle& conj) {
  require(cert.u.size() == set.dim() && cert.w.size() == set.dim() &&
              cert.v.size() == set.dim() && cert.s1.size() == set.dim(),
          "dual_constraint_residual: certificate dimension mismatch");
  for (Eigen::Index k = 0; k < set.dim(); ++k) {
    require(cert.u[k] > 0.0, "dual_constraint_residual: certificate needs u > 0");
    require(cert.u[k] - cert.w[k] > 0.0,
            "dual_constraint_residual: certificate needs u - w > 0");
  }
  double val = set.a0.dot(cert.v) - log_term_sum(cert.u, cert.w) +
               set.tau * dual_vector_norm(cert.s1, set.norm);
  if (set.V) {
    require(cert.s2.has_value(), "dual_constraint_residual: missing s2");
    val += *set.delta * dual_vector_norm(*cert.s2, set.norm);
  }
  const double f_star = conj(cert.v, x);
  return val - f_star;  // -(-inf) = +inf marks an inadmissible v
}

double linear_dual_constraint(const Vec& x, const Vec& u, const Vec& s1,
                              const UncertaintySet& set, double b) {
  require(x.size() == set.dim() && u.size() == set.dim(), "linear_dual_constraint: dims");
  double logs = 0.0;
  for (Eigen::Index k = 0; k < set.dim(); ++k) {
    const double c = set.a0[k] * x[k];
    require(u[k] > 0.0 && u[k] - c > 0.0, "linear_dual_constraint: log-domain violation");
    logs += u[k] * std::log1p(-c / u[k]);
  }
  return -logs + set.tau * dual_vector_norm(s1, set.norm) - b;
}

double objective_dual_value(const Vec& x, const DualCertificate& cert,
                            const UncertaintySet& set, const ConjugateOracle& conj) {
  for (Eigen::Index k = 0; k < set.dim(); ++k) {
    require(cert.u[k] > 0.0, "objective_dual_value: certificate needs u > 0");
    require(cert.u[k] - cert.w[k] > 0.0, "objective_dual_value: certificate needs u - w > 0");
  }
  double val = -set.a0.dot(cert.v) + log_term_sum(cert.u, cert.w) -
               set.tau * dual_vector_norm(cert.s1, set.norm);
  if (set.V) {
    require(cert.s2.has_value(), "objective_dual_value: missing s2");
    val -= *set.delta * dual_vector_norm(*cert.s2, set.norm);
  }
  return val - conj(-cert.v, x);
}

namespace {

// Shared assembly for the two optimized-certificate entry points: both are
// support_z at y = (0; -diag(a0) x) up to affine terms.
std::pair<double, DualCertificate> optimize_linear_certificate(const Vec& x,
                                                               const UncertaintySet& set,
                                                               double tol) {
  require(x.size() == set.dim(), "certificate optimization: dimension mismatch");
  const Eigen::Index m = set.dim();
  DualCertificate cert;
  cert.v = -x;
  const Vec w_base = -set.a0.cwiseProduct(x);

  if (set.tau == 0.0) {
    // Degenerate budget: the dual value is approached as u grows; hand back
    // a large-u certificate whose residual is within O(|w|^2/u) of the limit.
    cert.w = w_base;
    cert.u = (w_base.cwiseMax(0.0).array() + 1.0) * 1e8;
    Eigen::FullPivLU<Mat> lu(set.A.transpose());
    cert.s1 = lu.isInvertible() ? Vec(lu.solve(cert.u)) : Vec::Zero(m);
    if (set.V) cert.s2 = Vec::Zero(m);
    return {kInf, cert};  // support value is not defined for tau = 0
  }

  ShiftedSupportProblem prob =
      set.V ? ShiftedSupportProblem(set.A, set.tau, *set.V, *set.delta,
                                    ShiftedSupportProblem::default_eps(set.A, set.tau, set.norm),
                                    set.norm)
            : ShiftedSupportProblem(set.A, set.tau,
                                    ShiftedSupportProblem::default_eps(set.A, set.tau, set.norm),
                                    set.norm);
  Vec y(2 * m);
  y.head(m).setZero();
  y.tail(m) = w_base;
  const SupportSolve sol = support_z_solve(y, prob, tol);
  if (!std::isfinite(sol.value))
    throw numerical_error("certificate optimization: support problem did not solve");
  cert.s1 = sol.s1;
  cert.u = set.A.transpose() * sol.s1;
  cert.w = w_base;
  if (set.V) {
    cert.s2 = sol.s2;
    cert.w -= set.V->transpose() * sol.s2;
  }
  return {sol.value, cert};
}

}  // namespace

std::pair<double, DualCertificate> min_linear_dual_residual(const Vec& x,
                                                            const UncertaintySet& set,
                                                            double b, double tol) {
  auto [support, cert] = optimize_linear_certificate(x, set, tol);
  const double base = b - set.a0.dot(x);
  if (set.tau == 0.0) return {base, cert};
  return {base + support, cert};
}

std::pair<double, DualCertificate> max_linear_objective_bound(const Vec& x,
                                                              const UncertaintySet& set,
                                                              double tol) {
  auto [support, cert] = optimize_linear_certificate(x, set, tol);
  const double base = set.a0.dot(x);
  if (set.tau == 0.0) return {base, cert};
  return {base - support, cert};
}

}  // namespace possets
