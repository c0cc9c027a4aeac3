#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "possets/types.hpp"

namespace possets {

/// Deterministic random stream.  The normal transform is done in-house
/// (Box-Muller) so draws are reproducible across standard libraries; every
/// Monte-Carlo helper takes one of these explicitly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // in [0, 1)
    return std::generate_canonical<double, 53>(engine_);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds, via rejection-free scaling
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double lognormal(double mu_ln, double sigma_ln) {
    return std::exp(mu_ln + sigma_ln * normal());
  }

  Vec normal_vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace possets
