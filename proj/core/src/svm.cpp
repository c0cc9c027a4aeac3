#include "possets/svm.hpp"

#include <cmath>

namespace possets {

void SvmInstance::validate() const {
  require(X.rows() >= 2 && X.cols() >= 1, "SvmInstance: need at least two samples");
  require(y.size() == X.rows(), "SvmInstance: label count mismatch");
  require((X.array() > 0.0).all(), "SvmInstance: features must be strictly positive");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    require(y[i] == 1.0 || y[i] == -1.0, "SvmInstance: labels must be +-1");
  require(C > 0.0, "SvmInstance: C must be positive");
  require(tau >= 0.0, "SvmInstance: tau must be nonnegative");
  require(shape_scale > 0.0, "SvmInstance: shape scale must be positive");
}

namespace {

// Variable layout for the margin problems: w (n), b, zeta (N).
SvmModel extract_model(const SvmInstance& inst, const Vec& x, SolveStatus status) {
  const Eigen::Index n = inst.X.cols();
  const Eigen::Index N = inst.X.rows();
  SvmModel model;
  model.w = x.head(n);
  model.b = x[n];
  model.slack = x.segment(n + 1, N);
  model.status = status;
  return model;
}

}  // namespace

SvmModel train_nominal_svm(const SvmInstance& inst, double tol) {
  inst.validate();
  const Eigen::Index n = inst.X.cols();
  const Eigen::Index N = inst.X.rows();
  ConvexProgram prog;
  prog.n = static_cast<int>(n + 1 + N);
  const double C = inst.C;
  prog.objective = [n, N, C](const Vec& x, Vec* grad, Mat* hess) {
    double val = 0.5 * x.head(n).squaredNorm();
    for (Eigen::Index i = 0; i < N; ++i) val += C * x[n + 1 + i];
    if (grad) {
      grad->head(n) += x.head(n);
      for (Eigen::Index i = 0; i < N; ++i) (*grad)[n + 1 + i] += C;
    }
    if (hess)
      for (Eigen::Index j = 0; j < n; ++j) (*hess)(j, j) += 1.0;
    return val;
  };
  for (Eigen::Index i = 0; i < N; ++i) {
    const Vec xi = inst.X.row(i).transpose();
    const double yi = inst.y[i];
    prog.inequalities.push_back([xi, yi, n, i](const Vec& x, Vec* grad, Mat*) {
      // 1 - zeta_i - y_i (w^T x_i + b) <= 0
      if (grad) {
        grad->head(xi.size()) -= yi * xi;
        (*grad)[n] -= yi;
        (*grad)[n + 1 + i] -= 1.0;
      }
      return 1.0 - x[n + 1 + i] - yi * (xi.dot(Vec(x.head(xi.size()))) + x[n]);
    });
    prog.inequalities.push_back([n, i](const Vec& x, Vec* grad, Mat*) {
      if (grad) (*grad)[n + 1 + i] -= 1.0;
      return -x[n + 1 + i];
    });
  }
  SolverOptions opts;
  opts.tol = tol;
  Vec x;
  const SolveInfo info = smooth_convex_solve(prog, x, opts);
  SvmModel model = extract_model(inst, x, info.status);
  model.objective = 0.5 * model.w.squaredNorm() + C * model.slack.sum();
  return model;
}

RobustProblem build_robust_svm_problem(const SvmInstance& inst) {
  inst.validate();
  const Eigen::Index n = inst.X.cols();
  const Eigen::Index N = inst.X.rows();
  const Eigen::Index nv = n + 1 + N;

  RobustProblem p;
  p.sense = ObjSense::minimize;
  p.c = Vec::Zero(nv);
  for (Eigen::Index i = 0; i < N; ++i) p.c[n + 1 + i] = 1.0;
  p.lower = Vec::Constant(nv, -kInfBound);
  p.upper = Vec::Constant(nv, kInfBound);
  for (Eigen::Index i = 0; i < N; ++i) p.lower[n + 1 + i] = 0.0;

  const Mat A = inst.shape_scale * Mat::Identity(n, n);
  for (Eigen::Index i = 0; i < N; ++i) {
    LinearRow row;
    row.coeffs = Vec::Zero(nv);
    row.coeffs[n] = inst.y[i];       // y_i b
    row.coeffs[n + 1 + i] = 1.0;     // + zeta_i
    row.sense = RowSense::ge;
    row.rhs = 1.0;
    UncertainTerm term;
    term.omega = UncertaintySet(inst.X.row(i).transpose(), inst.tau, A, inst.norm);
    term.vars.resize(static_cast<size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) term.vars[static_cast<size_t>(k)] = static_cast<int>(k);
    term.scale = Vec::Constant(n, inst.y[i]);  // uncertain features multiply y_i w
    term.monotone = Monotone::unspecified;     // depends on the sign of w
    row.uncertainty = std::move(term);
    p.rows.push_back(std::move(row));
  }
  return p;
}

SvmModel train_unregularized_svm(const SvmInstance& inst, double tol) {
  SvmInstance nominal = inst;
  nominal.tau = 0.0;
  const RobustProblem p = build_robust_svm_problem(nominal);
  const SolveResult res = solve_dual_form(p, tol);
  SvmModel model = extract_model(inst, res.x, res.status);
  model.objective = model.slack.sum();
  return model;
}

SvmModel train_robust_svm(const SvmInstance& inst, double tol) {
  const RobustProblem p = build_robust_svm_problem(inst);
  const SolveResult res = solve_dual_form(p, tol);
  SvmModel model = extract_model(inst, res.x, res.status);
  model.objective = model.slack.sum();
  return model;
}

Vec svm_predict(const Vec& w, double b, const Mat& X) {
  Vec labels(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    labels[i] = X.row(i).dot(w) + b >= 0.0 ? 1.0 : -1.0;
  return labels;
}

double svm_accuracy(const Vec& predicted, const Vec& truth) {
  require(predicted.size() == truth.size(), "svm_accuracy: size mismatch");
  require(predicted.size() > 0, "svm_accuracy: empty label set");
  int correct = 0;
  for (Eigen::Index i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++correct;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(predicted.size());
}

}  // namespace possets
