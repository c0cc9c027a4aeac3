#pragma once

#include "possets/convex_solver.hpp"
#include "possets/duality.hpp"
#include "possets/robust_problem.hpp"

namespace possets {

struct Cut {
  int row = 0;       // index into problem.rows
  Vec scenario;      // worst-case parameter the cut was generated at
};

struct SolveResult {
  SolveStatus status = SolveStatus::numerical_failure;
  Vec x;
  double objective = 0.0;
  std::vector<DualCertificate> certificates;  // dual method, one per uncertain row
  std::vector<Cut> cuts;                      // cutting-plane method
  Vec row_residuals;  // robust slack per row; >= -1e-6 everywhere when optimal
  int iterations = 0;
  double wall_time_ms = 0.0;
};

/// Worst-case value of a row's uncertain term at x: inf (sense ge) or sup
/// (sense le) over the attached set of a^T q(x).  Closed-form for the
/// ellipsoid, pessimization oracle for the positivity-preserving set.
/// Returns the extremal value and the attaining scenario.
std::pair<double, Vec> pessimize_row(const LinearRow& row, const Vec& x, double tol = 1e-9);

/// Robust slack of every row at x (worst-case slack on uncertain rows,
/// nominal slack on certain rows, -|violation| on equalities).
Vec robust_row_residuals(const RobustProblem& problem, const Vec& x, double tol = 1e-9);

/// Reformulates every uncertain row through its dual form (ellipsoid-free
/// sets only), introducing (s, r) blocks per row, with the safeguarded log
/// at eps_log = 1e-9, and solves the resulting smooth convex program.
/// Rows with tau = 0 degenerate to their nominal linear form.
SolveResult solve_dual_form(const RobustProblem& problem, double tol = 1e-8);

/// Pessimization-oracle decomposition: solve the LP relaxation under the
/// current cut set, add a cut at each row's worst-case scenario while any
/// robust violation exceeds tol, stop at max_cuts.  Cuts are never dropped.
SolveResult solve_cutting_plane(const RobustProblem& problem, double tol = 1e-8,
                                int max_cuts = 400);

}  // namespace possets
