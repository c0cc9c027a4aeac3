#pragma once

#include <vector>

#include "possets/convex_solver.hpp"
#include "possets/norms.hpp"

namespace possets {

// Epigraph formulation of ||s||_k <= r inside a ConvexProgram, used wherever
// a dual-norm term tau * ||s||_* enters an objective or constraint.
//
//   L2:   ||s||^2 / (2r) - r/2 <= 0 together with -r <= 0 (smooth, convex
//         on r > 0; equivalent to the cone for r >= 0).
//   LInf: +-s_j - r <= 0.
//   L1:   one auxiliary p_j per coordinate, +-s_j - p_j <= 0, sum p - r <= 0.
struct NormEpigraph {
  /// Auxiliary variables required (L1 needs one per coordinate of s).
  static int aux_count(NormKind kind, int m) { return kind == NormKind::L1 ? m : 0; }

  /// Appends the epigraph constraints.  `s_idx` are positions of s in the
  /// program's variable vector, `r_idx` the position of r, `aux_idx` the
  /// first position of the auxiliary block when one is needed.
  static void add(ConvexProgram& prog, NormKind kind, std::vector<int> s_idx,
                  int r_idx, int aux_idx = -1);

  /// Strictly feasible (r, aux) for given s values.
  static void feasible_point(NormKind kind, const Vec& s_vals, double& r, Vec& aux);
};

}  // namespace possets
