#include "possets/synthetic.hpp"

#include <cmath>

namespace possets {

PvInstance synthetic_pv_instance(double tau, double sigma_ln) {
  require(tau >= 0.0, "synthetic_pv_instance: tau must be nonnegative");
  require(sigma_ln > 0.0, "synthetic_pv_instance: sigma_ln must be positive");
  const int T = 24;
  PvInstance inst;
  inst.horizon = T;
  inst.demand.resize(T);
  inst.irradiance.resize(T);
  inst.price.resize(T);
  for (int h = 0; h < T; ++h) {
    inst.price[h] = (h <= 7 || h == 23) ? 10.7 : 32.0;
    const double morning = 0.45 * std::exp(-0.125 * (h - 8.0) * (h - 8.0));
    const double evening = 0.85 * std::exp(-(h - 19.0) * (h - 19.0) / 6.0);
    inst.demand[h] = 0.35 + morning + evening;
    const double bell = 0.95 * std::exp(-(h - 12.5) * (h - 12.5) / 12.0);
    inst.irradiance[h] = std::max(0.004, bell);
  }
  inst.gamma = 0.8;
  inst.panel_area = 0.4;  // sized so the irradiance rows bind across the sweep
  inst.capacity = 1.2;
  inst.irradiance_set = UncertaintySet(
      inst.irradiance, tau, (1.0 / sigma_ln) * Mat::Identity(T, T), NormKind::L2);
  return inst;
}

Vec pv_realized_draw(const PvInstance& inst, Rng& rng) {
  const UncertaintySet& set = inst.irradiance_set;
  Vec e(set.dim());
  for (Eigen::Index t = 0; t < set.dim(); ++t) {
    const double sigma = 1.0 / set.A(t, t);
    e[t] = rng.lognormal(std::log(set.a0[t]), sigma);
  }
  return e;
}

SvmInstance synthetic_svm_instance(int per_class, int dim, double tau,
                                   double shape_scale, Rng& rng) {
  require(per_class >= 1 && dim >= 1, "synthetic_svm_instance: bad sizes");
  SvmInstance inst;
  inst.X.resize(2 * per_class, dim);
  inst.y.resize(2 * per_class);
  const double spread = 0.35;
  auto positive_normal = [&rng, spread](double mean) {
    double v;
    do { v = mean + spread * rng.normal(); } while (v <= 0.05);
    return v;
  };
  for (int i = 0; i < per_class; ++i) {
    for (int k = 0; k < dim; ++k)
      inst.X(i, k) = positive_normal(2.8 + 0.2 * k);
    inst.y[i] = 1.0;
  }
  for (int i = 0; i < per_class; ++i) {
    for (int k = 0; k < dim; ++k)
      inst.X(per_class + i, k) = positive_normal(1.3 + 0.1 * k);
    inst.y[per_class + i] = -1.0;
  }
  inst.tau = tau;
  inst.shape_scale = shape_scale;
  return inst;
}

}  // namespace possets
