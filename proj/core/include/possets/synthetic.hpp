#pragma once

#include "possets/pv.hpp"
#include "possets/rng.hpp"
#include "possets/svm.hpp"

namespace possets {

// Seeded synthetic data standing in for the original (non-redistributable)
// demand, irradiance and classification datasets.

/// 24-hour household-style instance: step tariff (10.7 off-peak for hours
/// 0-7 and 23, 32.0 otherwise), morning/evening demand peaks, bell-shaped
/// irradiance with a small positive floor at night.  The irradiance set is
/// the lognormal construction (a0 = exp(mu_ln), A = diag(sigma_ln)^{-1},
/// L2 norm) at the given level; sigma_ln defaults to 0.3 per period.
PvInstance synthetic_pv_instance(double tau, double sigma_ln = 0.3);

/// One realized irradiance draw from the lognormal model the instance's set
/// was built from (mu_ln = ln a0, sigma_ln from the diagonal of A).
Vec pv_realized_draw(const PvInstance& inst, Rng& rng);

/// Two-Gaussian positive-feature classification sample: class +1 around
/// mu_plus, class -1 around mu_minus, coordinates resampled until positive.
SvmInstance synthetic_svm_instance(int per_class, int dim, double tau,
                                   double shape_scale, Rng& rng);

}  // namespace possets
