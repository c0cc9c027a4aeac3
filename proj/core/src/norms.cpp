#include "possets/norms.hpp"

#include <cmath>

namespace possets {

NormKind dual_norm_kind(NormKind k) {
  switch (k) {
    case NormKind::L1: return NormKind::LInf;
    case NormKind::LInf: return NormKind::L1;
    default: return NormKind::L2;
  }
}

double vector_norm(const Vec& v, NormKind k) {
  switch (k) {
    case NormKind::L1: return v.lpNorm<1>();
    case NormKind::LInf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
    default: return v.norm();
  }
}

double dual_vector_norm(const Vec& v, NormKind k) {
  return vector_norm(v, dual_norm_kind(k));
}

double operator_norm(const Mat& M, NormKind k) {
  if (M.size() == 0) return 0.0;
  switch (k) {
    case NormKind::L1:
      return M.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::LInf:
      return M.cwiseAbs().rowwise().sum().maxCoeff();
    default: {
      // Power iteration on M^T M; the eigenvalue estimate converges even
      // when the top singular value is repeated.
      const Mat G = M.transpose() * M;
      Vec v = Vec::Ones(M.cols());
      // Deterministic mild asymmetry so v is not orthogonal to the top space.
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += 1e-3 * static_cast<double>(i);
      v.normalize();
      double lambda = 0.0;
      for (int it = 0; it < 10000; ++it) {
        Vec w = G * v;
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        w /= nw;
        const double next = w.dot(G * w);
        const bool done = std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next));
        lambda = next;
        v = w;
        if (done) break;
      }
      return std::sqrt(std::max(lambda, 0.0));
    }
  }
}

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::LInf: return "linf";
    default: return "l2";
  }
}

NormKind norm_kind_from_string(const std::string& s) {
  if (s == "l1" || s == "L1") return NormKind::L1;
  if (s == "l2" || s == "L2") return NormKind::L2;
  if (s == "linf" || s == "Linf" || s == "LInf" || s == "LINF") return NormKind::LInf;
  throw domain_error("unknown norm kind: " + s);
}

}  // namespace possets
