#pragma once

#include <functional>
#include <string>
#include <vector>

#include "possets/types.hpp"

namespace possets {

enum class SolveStatus { optimal, infeasible, iteration_cap, numerical_failure };

std::string to_string(SolveStatus s);

/// Smooth convex piece of a program.  Returns the value at x; when grad /
/// hess are non-null the callee ADDS its gradient and Hessian into them
/// (callers pass zeroed scratch).  Returning +inf marks x outside the
/// domain, which the line search treats as an inadmissible step.
using SmoothFn = std::function<double(const Vec& x, Vec* grad, Mat* hess)>;

/// Dense small-scale convex program
///
///   min  objective(x)
///   s.t. inequalities[i](x) <= 0,   eq_A x = eq_b.
///
/// Intended for the desk-scale reformulations this library produces; the
/// Newton systems are dense.
struct ConvexProgram {
  int n = 0;
  SmoothFn objective;
  std::vector<SmoothFn> inequalities;
  Mat eq_A;  // 0 x n when absent
  Vec eq_b;
  Vec start;  // optional; must satisfy the equalities and domain if given
};

struct SolverOptions {
  double tol = 1e-9;
  double mu_init = 1.0;      // barrier parameter schedule: mu <- mu * mu_factor
  double mu_factor = 0.1;    // down to mu_min
  double mu_min = 1e-9;
  int max_newton_per_stage = 120;
  int max_total_newton = 4000;
  double feas_tol = 1e-9;    // phase-1 infeasibility threshold
  // Checked between barrier stages; returning true ends the solve early
  // (used by phase 1, which only needs strict feasibility, not optimality).
  std::function<bool(const Vec&)> stop_when;
};

struct SolveInfo {
  SolveStatus status = SolveStatus::numerical_failure;
  int newton_iters = 0;
  double final_mu = 0.0;
  double final_decrement = 0.0;
  Vec multipliers;  // barrier multiplier estimates, one per inequality
  std::string message;
};

/// Primal log-barrier method with damped Newton and backtracking line
/// search; phase 1 (when the provided or constructed start is not strictly
/// feasible) minimizes a single slack variable.  Deterministic for
/// identical inputs.
SolveInfo smooth_convex_solve(const ConvexProgram& p, Vec& x,
                              const SolverOptions& opts = SolverOptions{});

/// ln x for x >= eps_log, tangent extension below; C^1 at the knot.
double safeguarded_log(double x, double eps_log);
double safeguarded_log_d1(double x, double eps_log);
double safeguarded_log_d2(double x, double eps_log);

}  // namespace possets
