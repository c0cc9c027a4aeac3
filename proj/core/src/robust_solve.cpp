#include "possets/robust_solve.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "possets/norm_epigraph.hpp"
#include "possets/oracle.hpp"

namespace possets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEpsLog = 1e-9;  // safeguarded-log knot
constexpr double kUMin = 1e-12;   // stand-in for the open condition u > 0
constexpr double kVerifyTol = 1e-6;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool is_diagonal(const Mat& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (i != j && A(i, j) != 0.0) return false;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (A(i, i) == 0.0) return false;
  return true;
}

// phi(u, c) = -u l(1 - c/u) with the safeguarded log; the dual-form log term
// of one coordinate.  Convex on u > 0, C^1 everywhere there.
struct PhiEval {
  double val, du, dc, duu, duc, dcc;
};

PhiEval phi_log(double u, double c) {
  const double t = 1.0 - c / u;
  const double l = safeguarded_log(t, kEpsLog);
  const double l1 = safeguarded_log_d1(t, kEpsLog);
  const double l2 = safeguarded_log_d2(t, kEpsLog);
  PhiEval e;
  e.val = -u * l;
  e.dc = l1;
  e.du = -l - l1 * c / u;
  e.dcc = -l2 / u;
  e.duc = l2 * c / (u * u);
  e.duu = -l2 * c * c / (u * u * u);
  return e;
}

// Midpoint-of-box start, strictly interior.
Vec interior_start(const RobustProblem& p) {
  Vec x(p.num_vars());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double lo = std::max(p.lower[j], -1.0);
    const double hi = std::min(p.upper[j], 1.0);
    x[j] = lo < hi ? 0.5 * (lo + hi) : 0.5 * (p.lower[j] + p.upper[j]);
  }
  return x;
}

void add_bound_constraints(ConvexProgram& prog, const RobustProblem& p) {
  for (Eigen::Index j = 0; j < p.num_vars(); ++j) {
    if (p.lower[j] == p.upper[j]) continue;  // handled as an equality
    const int jj = static_cast<int>(j);
    const double lo = p.lower[j];
    const double hi = p.upper[j];
    prog.inequalities.push_back([jj, lo](const Vec& x, Vec* grad, Mat*) {
      if (grad) (*grad)[jj] -= 1.0;
      return lo - x[jj];
    });
    prog.inequalities.push_back([jj, hi](const Vec& x, Vec* grad, Mat*) {
      if (grad) (*grad)[jj] += 1.0;
      return x[jj] - hi;
    });
  }
}

// Linear row c^T x (sense) rhs as one or more SmoothFns over the first
// n variables of a possibly larger program.
void add_linear_row(ConvexProgram& prog, const Vec& coeffs, RowSense sense, double rhs) {
  if (sense == RowSense::le || sense == RowSense::eq) {
    prog.inequalities.push_back([coeffs, rhs](const Vec& x, Vec* grad, Mat*) {
      if (grad) grad->head(coeffs.size()) += coeffs;
      return coeffs.dot(Vec(x.head(coeffs.size()))) - rhs;
    });
  }
  if (sense == RowSense::ge || sense == RowSense::eq) {
    prog.inequalities.push_back([coeffs, rhs](const Vec& x, Vec* grad, Mat*) {
      if (grad) grad->head(coeffs.size()) -= coeffs;
      return rhs - coeffs.dot(Vec(x.head(coeffs.size())));
    });
  }
}

// Collects equality rows and pinned bounds (lo == hi) into eq_A / eq_b over
// a program with n_total variables (extra columns zero).
void build_equalities(const RobustProblem& p, int n_total, ConvexProgram& prog) {
  std::vector<std::pair<Vec, double>> eqs;
  for (const auto& row : p.rows)
    if (row.sense == RowSense::eq) eqs.push_back({row.coeffs, row.rhs});
  for (Eigen::Index j = 0; j < p.num_vars(); ++j)
    if (p.lower[j] == p.upper[j]) {
      Vec e = Vec::Zero(p.num_vars());
      e[j] = 1.0;
      eqs.push_back({e, p.lower[j]});
    }
  if (eqs.empty()) return;
  prog.eq_A = Mat::Zero(static_cast<Eigen::Index>(eqs.size()), n_total);
  prog.eq_b.resize(static_cast<Eigen::Index>(eqs.size()));
  for (size_t i = 0; i < eqs.size(); ++i) {
    prog.eq_A.row(static_cast<Eigen::Index>(i)).head(p.num_vars()) = eqs[i].first;
    prog.eq_b[static_cast<Eigen::Index>(i)] = eqs[i].second;
  }
}

double signed_objective(const RobustProblem& p, const Vec& x) {
  return p.c.dot(x);
}

}  // namespace

std::pair<double, Vec> pessimize_row(const LinearRow& row, const Vec& x, double tol) {
  require(row.uncertainty.has_value(), "pessimize_row: row carries no uncertainty");
  const UncertainTerm& term = *row.uncertainty;
  const Vec q = term.factor(x);
  const bool want_sup = row.sense == RowSense::le;

  if (term.ellipsoid) {
    const EllipsoidSet& ell = *term.ellipsoid;
    const Vec Sq = ell.Sigma * q;
    const double spread = std::sqrt(std::max(0.0, q.dot(Sq)));
    if (spread == 0.0) return {ell.a0.dot(q), ell.a0};
    const Vec dir = Sq / spread;
    const Vec a_star = want_sup ? Vec(ell.a0 + ell.delta * dir) : Vec(ell.a0 - ell.delta * dir);
    return {a_star.dot(q), a_star};
  }

  const UncertaintySet& set = *term.omega;
  // sup_a a^T q = -inf_a a^T (-q)
  const Vec q_eff = want_sup ? Vec(-q) : q;
  const WorstCaseCertificate cert = worst_case(set, linear_objective(), q_eff, tol);
  const double value = want_sup ? -cert.value : cert.value;
  return {value, cert.a_star};
}

Vec robust_row_residuals(const RobustProblem& problem, const Vec& x, double tol) {
  Vec res(static_cast<Eigen::Index>(problem.rows.size()));
  for (size_t i = 0; i < problem.rows.size(); ++i) {
    const auto& row = problem.rows[i];
    double lhs = row.coeffs.dot(x);
    if (row.uncertainty)
      lhs += pessimize_row(row, x, tol).first;
    else if (row.sense == RowSense::eq) {
      res[static_cast<Eigen::Index>(i)] = -std::abs(lhs - row.rhs);
      continue;
    }
    res[static_cast<Eigen::Index>(i)] =
        row.sense == RowSense::le ? row.rhs - lhs : lhs - row.rhs;
  }
  return res;
}

namespace {

// Per-row dual block bookkeeping for solve_dual_form.
struct DualBlock {
  int row = 0;
  std::vector<int> kset;  // coordinates with a log term (structurally active)
  bool diagonal = false;
  int s_base = 0;  // s block start; size = kset.size() (diagonal) or m (general)
  int s_size = 0;
  int r_idx = 0;
  int aux_base = -1;
  double sigma = 1.0;  // +1 for <=, -1 for >=
};

}  // namespace

SolveResult solve_dual_form(const RobustProblem& problem, double tol) {
  const auto t0 = Clock::now();
  problem.validate();
  SolveResult result;

  const Eigen::Index n = problem.num_vars();
  std::vector<DualBlock> blocks;
  int next = static_cast<int>(n);
  for (size_t i = 0; i < problem.rows.size(); ++i) {
    const auto& row = problem.rows[i];
    if (!row.uncertainty) continue;
    const UncertainTerm& term = *row.uncertainty;
    require(term.omega.has_value(),
            "solve_dual_form: ellipsoidal rows are only supported by the cutting-plane path");
    require(!term.omega->V.has_value(),
            "solve_dual_form: rows with an ellipsoidal component are not supported; use cuts");
    if (term.omega->tau == 0.0) continue;  // degenerates to the nominal row

    DualBlock b;
    b.row = static_cast<int>(i);
    b.sigma = row.sense == RowSense::le ? 1.0 : -1.0;
    b.diagonal = is_diagonal(term.omega->A);
    const Eigen::Index m = term.dim();
    if (b.diagonal) {
      for (Eigen::Index k = 0; k < m; ++k)
        if (term.scale[k] != 0.0) b.kset.push_back(static_cast<int>(k));
      b.s_size = static_cast<int>(b.kset.size());
    } else {
      for (Eigen::Index k = 0; k < m; ++k)
        if (term.scale[k] != 0.0) b.kset.push_back(static_cast<int>(k));
      b.s_size = static_cast<int>(m);
    }
    b.s_base = next;
    next += b.s_size;
    b.r_idx = next++;
    const NormKind dual_kind = dual_norm_kind(term.omega->norm);
    const int naux = NormEpigraph::aux_count(dual_kind, b.s_size);
    if (naux > 0) {
      b.aux_base = next;
      next += naux;
    }
    blocks.push_back(b);
  }

  ConvexProgram prog;
  prog.n = next;
  const double obj_sign = problem.sense == ObjSense::minimize ? 1.0 : -1.0;
  const Vec cost = obj_sign * problem.c;
  prog.objective = [cost, n](const Vec& x, Vec* grad, Mat*) {
    if (grad) grad->head(n) += cost;
    return cost.dot(Vec(x.head(n)));
  };

  add_bound_constraints(prog, problem);
  build_equalities(problem, prog.n, prog);

  // Certain rows, and tau = 0 rows at their nominal coefficients.
  for (const auto& row : problem.rows) {
    if (row.sense == RowSense::eq) continue;
    if (!row.uncertainty) {
      add_linear_row(prog, row.coeffs, row.sense, row.rhs);
      continue;
    }
    const UncertainTerm& term = *row.uncertainty;
    if (term.omega->tau > 0.0) continue;
    Vec coeffs = row.coeffs;
    double rhs = row.rhs;
    const Vec& a0 = term.nominal();
    for (Eigen::Index k = 0; k < term.dim(); ++k) {
      const int v = term.vars[static_cast<size_t>(k)];
      const double w = a0[k] * term.scale[k];
      if (v >= 0)
        coeffs[v] += w;
      else
        rhs -= w;
    }
    add_linear_row(prog, coeffs, row.sense, rhs);
  }

  // Dual blocks: the row constraint, the u-floor rows, the log-argument
  // rows, and the dual-norm epigraph.
  for (const auto& b : blocks) {
    const auto& row = problem.rows[static_cast<size_t>(b.row)];
    const UncertainTerm& term = *row.uncertainty;
    const UncertaintySet& set = *term.omega;
    const double tau = set.tau;
    const double sigma = b.sigma;
    const Eigen::Index m = term.dim();

    // u(s) as a dense affine map: u = U s (U = A^T, or diag entries for the
    // reduced diagonal case).
    auto u_of = [&set, &b, m](const Vec& x) -> Vec {
      if (b.diagonal) {
        Vec u(static_cast<Eigen::Index>(b.kset.size()));
        for (size_t p = 0; p < b.kset.size(); ++p)
          u[static_cast<Eigen::Index>(p)] =
              set.A(b.kset[p], b.kset[p]) * x[b.s_base + static_cast<int>(p)];
        return u;
      }
      return set.A.transpose() * x.segment(b.s_base, m);
    };

    // Row constraint: sigma (coeffs x - rhs) + sum_k phi(u_k, sigma c_k) + tau r <= 0.
    const Vec coeffs = row.coeffs;
    const double rhs = row.rhs;
    prog.inequalities.push_back([&term, &set, b, coeffs, rhs, tau, sigma, m, u_of](
                                    const Vec& x, Vec* grad, Mat* hess) -> double {
      const Eigen::Index n0 = coeffs.size();
      double val = sigma * (coeffs.dot(Vec(x.head(n0))) - rhs) + tau * x[b.r_idx];
      const Vec u = u_of(x);
      if ((u.array() <= 0.0).any()) return kInf;
      if (grad) {
        grad->head(n0) += sigma * coeffs;
        (*grad)[b.r_idx] += tau;
      }
      for (size_t p = 0; p < b.kset.size(); ++p) {
        const int k = b.kset[p];
        const int v = term.vars[static_cast<size_t>(k)];
        const double base = set.a0[k] * term.scale[k];
        const double c = sigma * base * (v < 0 ? 1.0 : x[v]);
        const double uk = b.diagonal ? u[static_cast<Eigen::Index>(p)] : u[k];
        const PhiEval e = phi_log(uk, c);
        val += e.val;
        if (grad || hess) {
          // du/ds columns
          if (b.diagonal) {
            const int sj = b.s_base + static_cast<int>(p);
            const double d = set.A(k, k);
            if (grad) (*grad)[sj] += e.du * d;
            if (hess) (*hess)(sj, sj) += e.duu * d * d;
            if (v >= 0) {
              const double dc = sigma * base;
              if (grad) (*grad)[v] += e.dc * dc;
              if (hess) {
                (*hess)(v, v) += e.dcc * dc * dc;
                (*hess)(v, sj) += e.duc * dc * d;
                (*hess)(sj, v) += e.duc * dc * d;
              }
            }
          } else {
            // u_k = sum_j A(j,k) s_j
            for (Eigen::Index j = 0; j < m; ++j) {
              const double Ajk = set.A(j, k);
              if (Ajk == 0.0) continue;
              const int sj = b.s_base + static_cast<int>(j);
              if (grad) (*grad)[sj] += e.du * Ajk;
              if (hess) {
                for (Eigen::Index l = 0; l < m; ++l) {
                  const double Alk = set.A(l, k);
                  if (Alk != 0.0)
                    (*hess)(sj, b.s_base + static_cast<int>(l)) += e.duu * Ajk * Alk;
                }
                if (v >= 0) {
                  const double dc = sigma * base;
                  (*hess)(v, sj) += e.duc * dc * Ajk;
                  (*hess)(sj, v) += e.duc * dc * Ajk;
                }
              }
            }
            if (v >= 0) {
              const double dc = sigma * base;
              if (grad) (*grad)[v] += e.dc * dc;
              if (hess) (*hess)(v, v) += e.dcc * dc * dc;
            }
          }
        }
      }
      return val;
    });

    // u_k >= u_min for every kept coordinate.
    const int u_count = b.diagonal ? b.s_size : static_cast<int>(m);
    for (int p = 0; p < u_count; ++p) {
      prog.inequalities.push_back([&set, b, p, m](const Vec& x, Vec* grad, Mat*) {
        if (b.diagonal) {
          const int k = b.kset[static_cast<size_t>(p)];
          const double d = set.A(k, k);
          if (grad) (*grad)[b.s_base + p] -= d;
          return kUMin - d * x[b.s_base + p];
        }
        double u = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) u += set.A(j, p) * x[b.s_base + static_cast<int>(j)];
        if (grad)
          for (Eigen::Index j = 0; j < m; ++j) (*grad)[b.s_base + static_cast<int>(j)] -= set.A(j, p);
        return kUMin - u;
      });
    }

    // Log-argument rows u_k - sigma c_k >= 0 on the active coordinates,
    // kept as inequalities and verified post-hoc rather than tightened.
    for (size_t p = 0; p < b.kset.size(); ++p) {
      const int k = b.kset[p];
      const int v = term.vars[static_cast<size_t>(k)];
      if (v < 0) continue;  // constant term: u_k >= sigma c_k is linear in s only
      prog.inequalities.push_back([&set, &term, b, p, k, v, sigma, m](const Vec& x, Vec* grad,
                                                                      Mat*) {
        const double base = set.a0[k] * term.scale[k];
        double u;
        if (b.diagonal) {
          u = set.A(k, k) * x[b.s_base + static_cast<int>(p)];
          if (grad) (*grad)[b.s_base + static_cast<int>(p)] -= set.A(k, k);
        } else {
          u = 0.0;
          for (Eigen::Index j = 0; j < m; ++j) u += set.A(j, k) * x[b.s_base + static_cast<int>(j)];
          if (grad)
            for (Eigen::Index j = 0; j < m; ++j)
              (*grad)[b.s_base + static_cast<int>(j)] -= set.A(j, k);
        }
        if (grad) (*grad)[v] += sigma * base;
        return sigma * base * x[v] - u;
      });
    }

    std::vector<int> s_idx(static_cast<size_t>(b.s_size));
    for (int j = 0; j < b.s_size; ++j) s_idx[static_cast<size_t>(j)] = b.s_base + j;
    NormEpigraph::add(prog, dual_norm_kind(set.norm), s_idx, b.r_idx, b.aux_base);
  }

  // Start: interior for bounds; per block pick s with u comfortably above
  // the nominal log arguments.
  prog.start = Vec::Zero(prog.n);
  const Vec x0 = interior_start(problem);
  prog.start.head(n) = x0;
  for (const auto& b : blocks) {
    const auto& row = problem.rows[static_cast<size_t>(b.row)];
    const UncertainTerm& term = *row.uncertainty;
    const UncertaintySet& set = *term.omega;
    const Eigen::Index m = term.dim();
    Vec u_target = Vec::Constant(b.diagonal ? static_cast<Eigen::Index>(b.kset.size()) : m, 1.0);
    for (size_t p = 0; p < b.kset.size(); ++p) {
      const int k = b.kset[p];
      const int v = term.vars[static_cast<size_t>(k)];
      const double c = set.a0[k] * term.scale[k] * (v < 0 ? 1.0 : x0[v]);
      const Eigen::Index slot = b.diagonal ? static_cast<Eigen::Index>(p) : k;
      u_target[slot] = std::abs(c) + 1.0;
    }
    Vec s_start;
    if (b.diagonal) {
      s_start.resize(b.s_size);
      for (size_t p = 0; p < b.kset.size(); ++p)
        s_start[static_cast<Eigen::Index>(p)] = u_target[static_cast<Eigen::Index>(p)] /
                                                set.A(b.kset[p], b.kset[p]);
    } else {
      s_start = set.A.transpose().fullPivLu().solve(u_target);
    }
    prog.start.segment(b.s_base, b.s_size) = s_start;
    double r0;
    Vec aux0;
    NormEpigraph::feasible_point(dual_norm_kind(set.norm), s_start, r0, aux0);
    prog.start[b.r_idx] = r0;
    if (b.aux_base >= 0) prog.start.segment(b.aux_base, aux0.size()) = aux0;
  }

  SolverOptions opts;
  opts.tol = tol;
  Vec xfull;
  const SolveInfo info = smooth_convex_solve(prog, xfull, opts);
  result.iterations = info.newton_iters;
  result.status = info.status;
  if (info.status != SolveStatus::optimal) {
    result.wall_time_ms = elapsed_ms(t0);
    if (xfull.size() >= n) result.x = xfull.head(n);
    return result;
  }

  result.x = xfull.head(n);
  result.objective = signed_objective(problem, result.x);

  // Certificates in Theorem-3.7 form: v = sigma q(x), u = A^T s, w = diag(a0) v.
  for (const auto& b : blocks) {
    const auto& row = problem.rows[static_cast<size_t>(b.row)];
    const UncertainTerm& term = *row.uncertainty;
    const UncertaintySet& set = *term.omega;
    const Eigen::Index m = term.dim();
    DualCertificate cert;
    Vec s_full = Vec::Zero(m);
    if (b.diagonal) {
      for (size_t p = 0; p < b.kset.size(); ++p)
        s_full[b.kset[p]] = xfull[b.s_base + static_cast<int>(p)];
    } else {
      s_full = xfull.segment(b.s_base, m);
    }
    cert.s1 = s_full;
    cert.u = set.A.transpose() * s_full;
    cert.v = b.sigma * term.factor(result.x);
    cert.w = set.a0.cwiseProduct(cert.v);
    result.certificates.push_back(std::move(cert));
  }

  // Independent robust-feasibility verification on every row.
  result.row_residuals = robust_row_residuals(problem, result.x, tol);
  for (Eigen::Index i = 0; i < result.row_residuals.size(); ++i)
    if (result.row_residuals[i] < -kVerifyTol) {
      result.status = SolveStatus::numerical_failure;
      break;
    }
  result.wall_time_ms = elapsed_ms(t0);
  return result;
}

SolveResult solve_cutting_plane(const RobustProblem& problem, double tol, int max_cuts) {
  const auto t0 = Clock::now();
  problem.validate();
  SolveResult result;
  const Eigen::Index n = problem.num_vars();

  // Cut list: (coefficients over x, sense, rhs).
  struct LinCut {
    Vec coeffs;
    RowSense sense;
    double rhs;
  };
  std::vector<LinCut> cut_rows;

  auto scenario_row = [&](const LinearRow& row, const Vec& scenario) -> LinCut {
    LinCut cut{row.coeffs, row.sense, row.rhs};
    const UncertainTerm& term = *row.uncertainty;
    for (Eigen::Index k = 0; k < term.dim(); ++k) {
      const int v = term.vars[static_cast<size_t>(k)];
      const double w = scenario[k] * term.scale[k];
      if (v >= 0)
        cut.coeffs[v] += w;
      else
        cut.rhs -= w;
    }
    return cut;
  };

  // Initial relaxation: nominal scenario on every uncertain row.
  for (const auto& row : problem.rows)
    if (row.uncertainty) cut_rows.push_back(scenario_row(row, row.uncertainty->nominal()));

  const double obj_sign = problem.sense == ObjSense::minimize ? 1.0 : -1.0;
  const Vec cost = obj_sign * problem.c;

  int iterations = 0;
  while (true) {
    ConvexProgram prog;
    prog.n = static_cast<int>(n);
    prog.objective = [cost](const Vec& x, Vec* grad, Mat*) {
      if (grad) *grad += cost;
      return cost.dot(x);
    };
    add_bound_constraints(prog, problem);
    build_equalities(problem, prog.n, prog);
    for (const auto& row : problem.rows) {
      if (row.sense == RowSense::eq || row.uncertainty) continue;
      add_linear_row(prog, row.coeffs, row.sense, row.rhs);
    }
    for (const auto& cut : cut_rows) add_linear_row(prog, cut.coeffs, cut.sense, cut.rhs);
    prog.start = interior_start(problem);

    SolverOptions opts;
    opts.tol = tol;
    Vec x;
    const SolveInfo info = smooth_convex_solve(prog, x, opts);
    result.iterations += info.newton_iters;
    iterations++;
    if (info.status != SolveStatus::optimal) {
      result.status = info.status;
      result.wall_time_ms = elapsed_ms(t0);
      return result;
    }

    // Pessimize every uncertain row at the incumbent.
    bool violated = false;
    for (size_t i = 0; i < problem.rows.size(); ++i) {
      const auto& row = problem.rows[i];
      if (!row.uncertainty) continue;
      const auto [worst, scenario] = pessimize_row(row, x, tol);
      const double lhs = row.coeffs.dot(x) + worst;
      const double viol = row.sense == RowSense::le ? lhs - row.rhs : row.rhs - lhs;
      if (viol > tol) {
        violated = true;
        cut_rows.push_back(scenario_row(row, scenario));
        result.cuts.push_back({static_cast<int>(i), scenario});
      }
    }
    if (!violated) {
      result.x = x;
      result.objective = signed_objective(problem, x);
      result.status = SolveStatus::optimal;
      break;
    }
    if (static_cast<int>(result.cuts.size()) >= max_cuts) {
      result.x = x;
      result.objective = signed_objective(problem, x);
      result.status = SolveStatus::iteration_cap;
      result.wall_time_ms = elapsed_ms(t0);
      return result;
    }
  }

  result.row_residuals = robust_row_residuals(problem, result.x, tol);
  for (Eigen::Index i = 0; i < result.row_residuals.size(); ++i)
    if (result.row_residuals[i] < -kVerifyTol) {
      result.status = SolveStatus::numerical_failure;
      break;
    }
  result.wall_time_ms = elapsed_ms(t0);
  return result;
}

}  // namespace possets
