#include "possets/convex_solver.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace {
const bool kSolverDebug = std::getenv("POSSETS_SOLVER_DEBUG") != nullptr;
}

namespace possets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Workspace {
  Vec grad;   // full-space gradient accumulator
  Mat hess;   // full-space Hessian accumulator
  Vec gi;     // per-constraint gradient scratch
  Mat hi;     // per-constraint Hessian scratch
};

// F_mu(x) = objective + sum_i -mu ln(-f_i); +inf outside the domain or the
// strictly feasible region.
double barrier_value(const ConvexProgram& p, const Vec& x, double mu) {
  double val = p.objective(x, nullptr, nullptr);
  if (!std::isfinite(val)) return kInf;
  for (const auto& ineq : p.inequalities) {
    const double fi = ineq(x, nullptr, nullptr);
    if (!(fi < 0.0)) return kInf;
    val -= mu * std::log(-fi);
  }
  return val;
}

void barrier_derivatives(const ConvexProgram& p, const Vec& x, double mu, Workspace& w) {
  const Eigen::Index n = x.size();
  w.grad.setZero(n);
  w.hess.setZero(n, n);
  p.objective(x, &w.grad, &w.hess);
  for (const auto& ineq : p.inequalities) {
    w.gi.setZero(n);
    w.hi.setZero(n, n);
    const double fi = ineq(x, &w.gi, &w.hi);
    const double inv = 1.0 / (-fi);
    w.grad.noalias() += (mu * inv) * w.gi;
    w.hess.selfadjointView<Eigen::Lower>().rankUpdate(w.gi, mu * inv * inv);
    w.hess.noalias() += (mu * inv) * w.hi;
  }
  w.hess.triangularView<Eigen::StrictlyUpper>() =
      w.hess.triangularView<Eigen::StrictlyLower>().transpose();
}

struct NewtonResult {
  bool converged = false;
  bool stalled = false;
  int iters = 0;
  double decrement = kInf;
};

// Damped Newton on F_mu restricted to x = x_part + N xi.  N empty (0 cols on
// an n-dim program) means no equalities: x = x_part + xi.
NewtonResult newton_stage(const ConvexProgram& p, const Mat& N, const Vec& x_part,
                          Vec& xi, double mu, double stage_tol, int max_iters,
                          Workspace& w) {
  NewtonResult res;
  const bool reduced = N.size() > 0;
  auto to_full = [&](const Vec& v) -> Vec {
    return reduced ? Vec(x_part + N * v) : Vec(x_part + v);
  };

  Vec x = to_full(xi);
  double fval = barrier_value(p, x, mu);
  if (!std::isfinite(fval)) {  // caller guarantees strict feasibility; be safe
    res.stalled = true;
    return res;
  }

  for (res.iters = 0; res.iters < max_iters; ++res.iters) {
    barrier_derivatives(p, x, mu, w);
    Vec g = reduced ? Vec(N.transpose() * w.grad) : w.grad;
    Mat H = reduced ? Mat(N.transpose() * w.hess * N) : w.hess;

    // Newton direction with escalating Tikhonov fallback; LPs carry no
    // objective curvature, so near-singular reduced Hessians do occur.
    const Eigen::Index k = g.size();
    Vec dxi(k);
    double reg = 0.0;
    const double scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
    bool ok = false;
    for (int attempt = 0; attempt < 14 && !ok; ++attempt) {
      Mat Hr = H;
      if (reg > 0.0) Hr.diagonal().array() += reg;
      Eigen::LDLT<Mat> ldlt(Hr);
      if (ldlt.info() == Eigen::Success) {
        dxi = -ldlt.solve(g);
        if (dxi.allFinite() && g.dot(dxi) < 0.0) ok = true;
      }
      if (!ok) reg = (reg == 0.0) ? 1e-12 * scale : reg * 100.0;
    }
    if (!ok) dxi = -g;
    const double descent = g.dot(dxi);
    if (!(descent < 0.0)) {
      res.decrement = 0.0;
      res.converged = true;  // stationary to machine precision
      break;
    }

    res.decrement = -descent;  // Newton decrement squared
    if (0.5 * res.decrement <= stage_tol) {
      res.converged = true;
      break;
    }

    double alpha = 1.0;
    bool stepped = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Vec xi_trial = xi + alpha * dxi;
      const Vec x_trial = to_full(xi_trial);
      const double f_trial = barrier_value(p, x_trial, mu);
      if (f_trial <= fval + 1e-4 * alpha * descent) {
        xi = xi_trial;
        x = x_trial;
        fval = f_trial;
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      res.stalled = true;
      res.converged = 0.5 * res.decrement <= std::max(stage_tol, 1e-6);
      break;
    }
  }
  return res;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::iteration_cap: return "iteration_cap";
    default: return "numerical_failure";
  }
}

SolveInfo smooth_convex_solve(const ConvexProgram& p, Vec& x, const SolverOptions& opts) {
  SolveInfo info;
  const Eigen::Index n = p.n;
  require(n > 0, "smooth_convex_solve: empty program");
  require(static_cast<bool>(p.objective), "smooth_convex_solve: missing objective");

  // Equality handling: particular solution plus null-space basis, computed
  // once; Newton then runs in the reduced coordinates.
  Mat N;  // empty means identity
  Vec x_part = Vec::Zero(n);
  const bool has_eq = p.eq_A.rows() > 0;
  if (has_eq) {
    require(p.eq_A.cols() == n && p.eq_b.size() == p.eq_A.rows(),
            "smooth_convex_solve: equality dimensions");
    Eigen::ColPivHouseholderQR<Mat> qr(p.eq_A);
    x_part = qr.solve(p.eq_b);
    const double resid = (p.eq_A * x_part - p.eq_b).cwiseAbs().maxCoeff();
    if (resid > 1e-8 * std::max(1.0, p.eq_b.cwiseAbs().maxCoeff())) {
      info.status = SolveStatus::infeasible;
      info.message = "inconsistent equality constraints";
      return info;
    }
    Eigen::FullPivLU<Mat> lu(p.eq_A);
    N = lu.kernel();
    if (N.cols() == 0) {  // the equalities pin the point entirely
      x = x_part;
      for (const auto& ineq : p.inequalities)
        if (!(ineq(x, nullptr, nullptr) <= opts.feas_tol)) {
          info.status = SolveStatus::infeasible;
          return info;
        }
      info.status = SolveStatus::optimal;
      return info;
    }
  }
  if (p.start.size() == n) {
    if (!has_eq) {
      x_part = p.start;
    } else {
      // Project the provided start onto the equality manifold (min-norm
      // correction) so phase 1 begins near the caller's scale.
      const Vec r = p.eq_b - p.eq_A * p.start;
      if (r.cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, p.eq_b.cwiseAbs().maxCoeff())) {
        x_part = p.start;
      } else {
        Eigen::LDLT<Mat> gram(p.eq_A * p.eq_A.transpose());
        if (gram.info() == Eigen::Success) {
          const Vec corrected = p.start + p.eq_A.transpose() * gram.solve(r);
          if ((p.eq_A * corrected - p.eq_b).cwiseAbs().maxCoeff() <=
              1e-7 * std::max(1.0, p.eq_b.cwiseAbs().maxCoeff()))
            x_part = corrected;
        }
      }
    }
  }
  const Eigen::Index k = has_eq ? N.cols() : n;
  Vec xi = Vec::Zero(k);

  // Strict feasibility at the start; otherwise phase 1 with a single slack.
  double worst = -kInf;
  bool domain_ok = std::isfinite(p.objective(x_part, nullptr, nullptr));
  for (const auto& ineq : p.inequalities) {
    const double fi = ineq(x_part, nullptr, nullptr);
    if (!std::isfinite(fi)) {
      domain_ok = false;
      break;
    }
    worst = std::max(worst, fi);
  }
  if (!domain_ok) {
    info.status = SolveStatus::numerical_failure;
    info.message = "start point outside the problem domain";
    return info;
  }

  if (!p.inequalities.empty() && worst >= 0.0) {
    // Phase 1 over (x, s): min s + rho/2 ||x - x0||^2  s.t. f_i(x) <= s,
    // s >= -1, same equalities.  The slack lower bound keeps the phase
    // bounded and the tiny proximal anchor keeps iterates from drifting to
    // the analytic center of the +-1e18 sentinel box, where absolute
    // precision is gone; we only need s < 0, not the phase-1 optimum.
    ConvexProgram ph;
    ph.n = static_cast<int>(n) + 1;
    const Vec anchor_center = x_part;
    ph.objective = [n, anchor_center, kAnchor = 1e-10](const Vec& v, Vec* grad, Mat* hess) {
      const Vec d = v.head(n) - anchor_center;
      if (grad) {
        (*grad)[n] += 1.0;
        grad->head(n) += kAnchor * d;
      }
      if (hess)
        for (Eigen::Index j = 0; j < n; ++j) (*hess)(j, j) += kAnchor;
      return v[n] + 0.5 * kAnchor * d.squaredNorm();
    };
    for (const auto& ineq : p.inequalities) {
      ph.inequalities.push_back(
          [&ineq, n, gfull = Vec(), hfull = Mat()](const Vec& v, Vec* grad,
                                                   Mat* hess) mutable {
            const Vec xs = v.head(n);
            if (!grad && !hess) return ineq(xs, nullptr, nullptr) - v[n];
            gfull.setZero(n);
            double fi;
            if (hess) {
              hfull.setZero(n, n);
              fi = ineq(xs, &gfull, &hfull);
              hess->topLeftCorner(n, n) += hfull;
            } else {
              fi = ineq(xs, &gfull, nullptr);
            }
            if (grad) {
              grad->head(n) += gfull;
              (*grad)[n] -= 1.0;
            }
            return fi - v[n];
          });
    }
    ph.inequalities.push_back([n](const Vec& v, Vec* grad, Mat*) {
      if (grad) (*grad)[n] -= 1.0;
      return -1.0 - v[n];
    });
    if (has_eq) {
      ph.eq_A = Mat::Zero(p.eq_A.rows(), n + 1);
      ph.eq_A.leftCols(n) = p.eq_A;
      ph.eq_b = p.eq_b;
    }
    ph.start = Vec(n + 1);
    ph.start.head(n) = x_part;
    ph.start[n] = worst + std::max(1.0, 0.1 * std::abs(worst));

    SolverOptions ph_opts = opts;
    ph_opts.stop_when = [&p, n](const Vec& v) {
      for (const auto& ineq : p.inequalities)
        if (!(ineq(v.head(n), nullptr, nullptr) < 0.0)) return false;
      return true;
    };
    Vec v = ph.start;
    const SolveInfo ph_info = smooth_convex_solve(ph, v, ph_opts);
    info.newton_iters += ph_info.newton_iters;
    if (kSolverDebug)
      std::fprintf(stderr, "[phase1] status=%s iters=%d s=%g\n",
                   to_string(ph_info.status).c_str(), ph_info.newton_iters, v[n]);

    bool strictly_feasible = true;
    for (const auto& ineq : p.inequalities)
      if (!(ineq(v.head(n), nullptr, nullptr) < 0.0)) {
        strictly_feasible = false;
        break;
      }
    if (!strictly_feasible) {
      info.status = SolveStatus::infeasible;
      x = v.head(n);
      return info;
    }
    if (!std::isfinite(p.objective(v.head(n), nullptr, nullptr))) {
      info.status = SolveStatus::numerical_failure;
      info.message = "phase-1 point outside the objective domain";
      return info;
    }
    // Re-anchor the particular solution at the phase-1 point (eq-feasible by
    // construction) instead of recovering reduced coordinates by least
    // squares, which loses absolute precision at large variable scales.
    x_part = v.head(n);
    xi.setZero();
  }

  // Phase 2: barrier path down to mu_min (plain Newton when unconstrained).
  Workspace w;
  double mu = p.inequalities.empty() ? opts.mu_min : opts.mu_init;
  bool trouble = false;
  while (true) {
    const bool last = p.inequalities.empty() || mu <= opts.mu_min * (1.0 + 1e-12);
    const double stage_tol =
        last ? std::max(1e-13, 1e-3 * opts.tol) : std::max(1e-13, 1e-4 * mu);
    NewtonResult nr =
        newton_stage(p, N, x_part, xi, mu, stage_tol, opts.max_newton_per_stage, w);
    info.newton_iters += nr.iters;
    info.final_decrement = nr.decrement;
    info.final_mu = mu;
    if (kSolverDebug)
      std::fprintf(stderr, "[stage] mu=%g iters=%d dec=%g conv=%d stall=%d\n", mu,
                   nr.iters, nr.decrement, nr.converged, nr.stalled);
    if (nr.stalled && !nr.converged) trouble = true;
    x = has_eq ? Vec(x_part + N * xi) : Vec(x_part + xi);
    if (opts.stop_when && opts.stop_when(x)) break;
    if (info.newton_iters > opts.max_total_newton) {
      info.status = SolveStatus::iteration_cap;
      return info;
    }
    if (last) break;
    mu *= opts.mu_factor;
  }

  info.multipliers.resize(static_cast<Eigen::Index>(p.inequalities.size()));
  for (size_t i = 0; i < p.inequalities.size(); ++i) {
    const double fi = p.inequalities[i](x, nullptr, nullptr);
    info.multipliers[static_cast<Eigen::Index>(i)] = fi < 0.0 ? info.final_mu / (-fi) : 0.0;
  }
  info.status = (trouble && info.final_decrement > 1e-4) ? SolveStatus::numerical_failure
                                                         : SolveStatus::optimal;
  return info;
}

double safeguarded_log(double x, double eps_log) {
  require(eps_log > 0.0, "safeguarded_log: eps_log must be positive");
  if (x >= eps_log) return std::log(x);
  return (x - eps_log) / eps_log + std::log(eps_log);
}

double safeguarded_log_d1(double x, double eps_log) {
  return x >= eps_log ? 1.0 / x : 1.0 / eps_log;
}

double safeguarded_log_d2(double x, double eps_log) {
  return x >= eps_log ? -1.0 / (x * x) : 0.0;
}

}  // namespace possets
