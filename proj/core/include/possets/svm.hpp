#pragma once

#include "possets/robust_solve.hpp"

namespace possets {

// Binary classification with positive-valued features.  The robust variant
// drops the explicit regularization term and instead requires each margin
// to hold for every feature vector in a per-sample positivity-preserving
// set around the observed point.

struct SvmInstance {
  Mat X;  // N x n feature matrix, strictly positive entries
  Vec y;  // labels in {-1, +1}
  double C = 1.0;            // penalty weight of the nominal model
  double tau = 0.0;          // uncertainty level of the robust model
  double shape_scale = 1.0;  // per-sample shape matrix A^i = shape_scale * I
  NormKind norm = NormKind::L2;

  void validate() const;
};

struct SvmModel {
  Vec w;
  double b = 0.0;
  Vec slack;
  double objective = 0.0;  // the trained problem's objective value
  SolveStatus status = SolveStatus::numerical_failure;
};

/// Nominal C-SVM:  min 1/2 ||w||^2 + C sum zeta  s.t. margins.
SvmModel train_nominal_svm(const SvmInstance& inst, double tol = 1e-8);

/// Hinge-loss LP without regularization:  min sum zeta  s.t. margins.
/// The tau = 0 robust model reproduces this optimum.
SvmModel train_unregularized_svm(const SvmInstance& inst, double tol = 1e-8);

/// Robust model:  min sum zeta  s.t.
///   min_{x' in Omega_i(xbar_i, tau, A_i)} y_i (w^T x' + b) >= 1 - zeta_i,
/// solved through the dual form of each margin row.
SvmModel train_robust_svm(const SvmInstance& inst, double tol = 1e-8);

/// The robust counterpart behind train_robust_svm, exposed for inspection.
RobustProblem build_robust_svm_problem(const SvmInstance& inst);

/// sign(w^T x + b) per row, with sign(0) mapped to +1.
Vec svm_predict(const Vec& w, double b, const Mat& X);

/// Percent of matching labels.
double svm_accuracy(const Vec& predicted, const Vec& truth);

}  // namespace possets
