#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "possets/uncertainty_set.hpp"

namespace possets {

// Dual reformulation machinery: support functions of the three blocks that
// make up the lifted, shifted uncertainty set in variation space, their
// infimal combination, and evaluation of the resulting dual-form robust
// constraint.

/// Data of the shifted support-function problem.  The interior shift eps
/// must satisfy eps * ||A e|| < tau strictly; the shift terms cancel in the
/// final dual constraint, so any admissible value gives the same results.
struct ShiftedSupportProblem {
  Mat A;
  double tau = 0.0;
  std::optional<Mat> V;
  std::optional<double> delta;
  double eps = 0.0;
  NormKind norm = NormKind::L2;

  ShiftedSupportProblem(Mat A_, double tau_, double eps_, NormKind norm_ = NormKind::L2);
  ShiftedSupportProblem(Mat A_, double tau_, Mat V_, double delta_, double eps_,
                        NormKind norm_ = NormKind::L2);

  /// eps = min(1e-9, tau / (2 ||A e||)).
  static double default_eps(const Mat& A, double tau, NormKind norm = NormKind::L2);

  Eigen::Index dim() const { return A.rows(); }
};

/// Auxiliary vectors witnessing robust feasibility in dual form.
/// Invariants: u > 0, u - w > 0, A^T s1 = u and w + V^T s2 = diag(a0) v up
/// to linear-residual tolerance.
struct DualCertificate {
  Vec v;
  Vec u;
  Vec w;
  Vec s1;
  std::optional<Vec> s2;

  /// Largest violation of the two linear coupling equations.
  double linear_residual(const UncertaintySet& set) const;
};

/// Partial concave conjugate contract: (v, x) -> f_*(v, x), -inf allowed.
/// Implementations must be pure and re-entrant.
using ConjugateOracle = std::function<double(const Vec& v, const Vec& x)>;

/// f(a, x) = a^T x - b: conjugate is b when v = x (within tol), else -inf.
ConjugateOracle linear_constraint_conjugate(double b, double tol = 1e-9);

/// f0(a, x) = a^T x: conjugate is 0 when v = x (within tol), else -inf.
ConjugateOracle linear_objective_conjugate(double tol = 1e-9);

/// Support function of the variation-epigraph block at y = (y1; y2).
/// The equality structure pins u = -y1, w = y2; the value is
/// sum_k [eps u_k - u_k ln(1 - w_k/u_k) - w_k], +inf outside u > 0, u-w > 0.
double support_z1(const Vec& y, double eps);

/// Support function of the budget block: +inf unless y2 = 0, otherwise
/// tau ||s||_* - eps e^T y1 with s = A^{-T} y1.  Throws on singular A.
double support_z2(const Vec& y, const Mat& A, double tau, double eps, NormKind norm);

/// Support function of the ellipsoidal block: +inf unless y1 = 0, otherwise
/// delta ||s||_* with s = V^{-T} y2.  Throws on singular V.
double support_z3(const Vec& y, const Mat& V, double delta, NormKind norm);

/// Support function of the intersection: infimum over splits y1+y2+y3 = y of
/// the three block supports, computed by a small smooth convex program in
/// (s1, s2).  +inf when the equality system admits no domain point.
double support_z(const Vec& y, const ShiftedSupportProblem& prob);

/// Left-hand side of the dual-form robust constraint
///   (a0)^T v - sum_k { u_k ln(1 - w_k/u_k) + w_k }
///     + tau ||s1||_* + delta ||s2||_* - f_*(v, x)  <=  0.
/// A nonpositive value certifies robust feasibility of x.  Throws when the
/// certificate violates u > 0 or u - w > 0.
double dual_constraint_residual(const DualCertificate& cert, const Vec& x,
                                const UncertaintySet& set, const ConjugateOracle& conj);

/// Ellipsoid-free linear case (V = 0):
///   -sum_k u_k ln(1 - a0_k x_k / u_k) + tau ||s1||_* - b.
double linear_dual_constraint(const Vec& x, const Vec& u, const Vec& s1,
                              const UncertaintySet& set, double b);

/// Lower bound on min_{a in set} f0(a, x) produced by a certificate:
///   -(a0)^T v + sum_k { u_k ln(1 - w_k/u_k) + w_k }
///     - tau ||s1||_* - delta ||s2||_* - f0_*(-v, x).
double objective_dual_value(const Vec& x, const DualCertificate& cert,
                            const UncertaintySet& set, const ConjugateOracle& conj);

/// Minimal dual-constraint residual over certificates for the robust linear
/// constraint min_{a in set} a^T x >= b; equals b - min_a a^T x at the
/// optimum (the negated pessimization value).
std::pair<double, DualCertificate> min_linear_dual_residual(const Vec& x,
                                                            const UncertaintySet& set,
                                                            double b, double tol = 1e-9);

/// Largest certificate lower bound for the linear objective f0 = a^T x;
/// equals min_{a in set} a^T x.
std::pair<double, DualCertificate> max_linear_objective_bound(const Vec& x,
                                                              const UncertaintySet& set,
                                                              double tol = 1e-9);

}  // namespace possets
