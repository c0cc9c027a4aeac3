#include "possets/norm_epigraph.hpp"

#include <cmath>
#include <limits>

namespace possets {

void NormEpigraph::add(ConvexProgram& prog, NormKind kind, std::vector<int> s_idx,
                       int r_idx, int aux_idx) {
  const int m = static_cast<int>(s_idx.size());
  switch (kind) {
    case NormKind::L2: {
      prog.inequalities.push_back([s_idx, r_idx](const Vec& x, Vec* grad, Mat* hess) {
        const double r = x[r_idx];
        if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
        double ss = 0.0;
        for (int j : s_idx) ss += x[j] * x[j];
        if (grad) {
          for (int j : s_idx) (*grad)[j] += x[j] / r;
          (*grad)[r_idx] += -ss / (2.0 * r * r) - 0.5;
        }
        if (hess) {
          for (int j : s_idx) {
            (*hess)(j, j) += 1.0 / r;
            (*hess)(j, r_idx) += -x[j] / (r * r);
            (*hess)(r_idx, j) += -x[j] / (r * r);
          }
          (*hess)(r_idx, r_idx) += ss / (r * r * r);
        }
        return ss / (2.0 * r) - 0.5 * r;
      });
      prog.inequalities.push_back([r_idx](const Vec& x, Vec* grad, Mat*) {
        if (grad) (*grad)[r_idx] -= 1.0;
        return -x[r_idx];
      });
      break;
    }
    case NormKind::LInf: {
      for (int j : s_idx) {
        prog.inequalities.push_back([j, r_idx](const Vec& x, Vec* grad, Mat*) {
          if (grad) {
            (*grad)[j] += 1.0;
            (*grad)[r_idx] -= 1.0;
          }
          return x[j] - x[r_idx];
        });
        prog.inequalities.push_back([j, r_idx](const Vec& x, Vec* grad, Mat*) {
          if (grad) {
            (*grad)[j] -= 1.0;
            (*grad)[r_idx] -= 1.0;
          }
          return -x[j] - x[r_idx];
        });
      }
      break;
    }
    case NormKind::L1: {
      require(aux_idx >= 0, "NormEpigraph: L1 epigraph needs auxiliary variables");
      for (int t = 0; t < m; ++t) {
        const int j = s_idx[t];
        const int pj = aux_idx + t;
        prog.inequalities.push_back([j, pj](const Vec& x, Vec* grad, Mat*) {
          if (grad) {
            (*grad)[j] += 1.0;
            (*grad)[pj] -= 1.0;
          }
          return x[j] - x[pj];
        });
        prog.inequalities.push_back([j, pj](const Vec& x, Vec* grad, Mat*) {
          if (grad) {
            (*grad)[j] -= 1.0;
            (*grad)[pj] -= 1.0;
          }
          return -x[j] - x[pj];
        });
      }
      prog.inequalities.push_back([aux_idx, m, r_idx](const Vec& x, Vec* grad, Mat*) {
        double sum = 0.0;
        for (int t = 0; t < m; ++t) sum += x[aux_idx + t];
        if (grad) {
          for (int t = 0; t < m; ++t) (*grad)[aux_idx + t] += 1.0;
          (*grad)[r_idx] -= 1.0;
        }
        return sum - x[r_idx];
      });
      break;
    }
  }
}

void NormEpigraph::feasible_point(NormKind kind, const Vec& s_vals, double& r, Vec& aux) {
  switch (kind) {
    case NormKind::L2:
      r = s_vals.norm() + 1.0;
      aux.resize(0);
      break;
    case NormKind::LInf:
      r = (s_vals.size() ? s_vals.cwiseAbs().maxCoeff() : 0.0) + 1.0;
      aux.resize(0);
      break;
    case NormKind::L1:
      aux = s_vals.cwiseAbs().array() + 1.0;
      r = aux.sum() + 1.0;
      break;
  }
}

}  // namespace possets
