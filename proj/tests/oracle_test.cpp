#include "possets/oracle.hpp"

#include <cmath>

#include "doctest.h"
#include "possets/rng.hpp"
#include "possets/variation.hpp"
#include "test_oracles.hpp"

using namespace possets;

namespace {

UncertaintySet scalar_set(double a0, double tau, double A = 1.0) {
  return UncertaintySet(Vec::Constant(1, a0), tau, A * Mat::Identity(1, 1));
}

}  // namespace

TEST_CASE("tau = 0 returns the nominal point") {
  const UncertaintySet set = scalar_set(2.0, 0.0);
  const WorstCaseCertificate cert = worst_case(set, linear_objective(), Vec::Ones(1));
  CHECK(cert.converged);
  CHECK(cert.a_star[0] == doctest::Approx(2.0));
  CHECK(cert.value == doctest::Approx(2.0));
}

TEST_CASE("m = 1 closed form via the branch inverses") {
  const UncertaintySet set = scalar_set(2.0, 0.5);
  const WorstCaseCertificate cert = worst_case(set, linear_objective(), Vec::Ones(1));
  CHECK(cert.converged);
  CHECK(cert.a_star[0] == doctest::Approx(0.6034191254).epsilon(1e-8));
  CHECK(cert.value == doctest::Approx(0.6034191254).epsilon(1e-8));
  CHECK(std::abs(cert.budget_residual) < 1e-9);
  CHECK(verify_boundary(cert, set, cert.active, 1e-6));
  // decreasing direction: negative coefficient pushes the parameter up
  const WorstCaseCertificate up = worst_case(set, linear_objective(), -Vec::Ones(1));
  CHECK(up.a_star[0] == doctest::Approx(4.7153533479).epsilon(1e-8));
}

TEST_CASE("constant objective: empty active set, vacuous boundary") {
  const UncertaintySet set = scalar_set(2.0, 0.5);
  const WorstCaseCertificate cert = worst_case(set, linear_objective(), Vec::Zero(1));
  CHECK(cert.converged);
  CHECK(cert.active.empty());
  CHECK(cert.free_indices == std::vector<int>{0});
  CHECK(verify_boundary(cert, set, cert.active, 1e-6));
  CHECK(cert.a_star == set.a0);
}

TEST_CASE("diagonal fast path matches the grid oracle, m = 2") {
  Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    Vec a0(2), q(2);
    a0 << rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0);
    q << rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5);
    Mat A = Mat::Zero(2, 2);
    A(0, 0) = rng.uniform(0.7, 1.8);
    A(1, 1) = rng.uniform(0.7, 1.8);
    const double tau = rng.uniform(0.05, 0.4);
    const UncertaintySet set(a0, tau, A);
    const WorstCaseCertificate cert = worst_case(set, linear_objective(), q, 1e-10);
    const double grid = oracles::grid_worst_case(a0, A, tau, q, 0.25, 2.2, 1e-3);
    CHECK(cert.value <= grid + 1e-9);
    CHECK(cert.value == doctest::Approx(grid).epsilon(2e-3));
    CHECK(verify_boundary(cert, set, cert.active, 1e-6));
  }
}

TEST_CASE("general (non-diagonal) path matches the grid oracle, m = 2") {
  Rng rng(22);
  for (int trial = 0; trial < 8; ++trial) {
    Vec a0(2), q(2);
    a0 << rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0);
    q << rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5);
    Mat A(2, 2);
    A << 1.0 + rng.uniform(), 0.3 * rng.uniform(), 0.3 * rng.uniform(), 1.0 + rng.uniform();
    const double tau = rng.uniform(0.05, 0.4);
    const UncertaintySet set(a0, tau, A);
    const WorstCaseCertificate cert = worst_case(set, linear_objective(), q, 1e-10);
    const double grid = oracles::grid_worst_case(a0, A, tau, q, 0.25, 2.2, 1e-3);
    CHECK(cert.value == doctest::Approx(grid).epsilon(2e-3));
    CHECK(std::abs(cert.budget_residual) < 1e-5);
  }
}

TEST_CASE("mixed-sign coefficients split the branches") {
  Vec a0(2), q(2);
  a0 << 1.0, 1.0;
  q << 1.0, -1.0;
  const UncertaintySet set(a0, 0.3, Mat::Identity(2, 2));
  const WorstCaseCertificate cert = worst_case(set, linear_objective(), q, 1e-10);
  CHECK(cert.z_star[0] < 1.0);  // pushed down where the gradient is positive
  CHECK(cert.z_star[1] > 1.0);  // pushed up where it is negative
  CHECK(verify_boundary(cert, set, cert.active, 1e-6));
}

TEST_CASE("worst_case_bounds closed forms") {
  const UncertaintySet set = scalar_set(2.0, 0.5);
  const CoordinateBounds inc =
      worst_case_bounds(set, MonotoneObjective::Tag::increasing);
  CHECK(inc.lower[0] == doctest::Approx(0.6034191254).epsilon(1e-8));
  CHECK(inc.upper[0] == doctest::Approx(2.0));
  const CoordinateBounds dec =
      worst_case_bounds(set, MonotoneObjective::Tag::decreasing);
  CHECK(dec.lower[0] == doctest::Approx(2.0));
  CHECK(dec.upper[0] == doctest::Approx(4.7153533479).epsilon(1e-8));
  const UncertaintySet tight = scalar_set(2.0, 0.0);
  const CoordinateBounds none =
      worst_case_bounds(tight, MonotoneObjective::Tag::increasing);
  CHECK(none.lower[0] == doctest::Approx(2.0));
  CHECK(none.upper[0] == doctest::Approx(2.0));
}

TEST_CASE("bound containment on random increasing instances") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + rng.uniform_int(0, 2);
    Vec a0(m), q(m);
    Mat A = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      a0[i] = rng.uniform(0.5, 3.0);
      q[i] = rng.uniform(0.1, 2.0);
      A(i, i) = rng.uniform(0.6, 1.6);
    }
    const UncertaintySet set(a0, rng.uniform(0.05, 1.2), A);
    const WorstCaseCertificate cert = worst_case(set, linear_objective(), q, 1e-10);
    const CoordinateBounds b = worst_case_bounds(set, MonotoneObjective::Tag::increasing);
    for (int i : cert.active) {
      CHECK(cert.a_star[i] >= b.lower[i] - 1e-8);
      CHECK(cert.a_star[i] <= b.upper[i] + 1e-8);
    }
  }
}

TEST_CASE("decay envelope") {
  const Mat I1 = Mat::Identity(1, 1);
  // tau = 0: the envelope (2/e, 1) contains g_-^{-1}(0) = 1
  auto [lo0, hi0] = decay_envelope(0.0, I1, 0.5);
  CHECK(lo0 == doctest::Approx(2.0 / M_E).epsilon(1e-12));
  CHECK(hi0 == doctest::Approx(1.0));
  CHECK(lo0 <= 1.0);
  CHECK(1.0 <= hi0);
  // tau = 1: frozen oracle g_-^{-1}(1) = 0.1585943396
  auto [lo1, hi1] = decay_envelope(1.0, I1, 0.5);
  CHECK(lo1 == doctest::Approx((2.0 / M_E) * std::exp(-2.0)).epsilon(1e-12));
  CHECK(hi1 == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const double ginv1 = oracles::ginv_lower_ref(1.0);
  CHECK(ginv1 == doctest::Approx(0.1585943396).epsilon(1e-8));
  CHECK(lo1 <= ginv1);
  CHECK(ginv1 <= hi1);
  // sweep: the envelope always contains the true inverse
  for (double tau = 0.1; tau <= 10.0; tau += 0.35) {
    auto [lo, hi] = decay_envelope(tau, I1, 0.5);
    const double t = oracles::ginv_lower_ref(tau);
    CHECK(lo <= t);
    CHECK(t <= hi);
  }
  // other alpha values are valid envelopes too
  for (const double alpha : {0.2, 0.8}) {
    for (double tau = 0.2; tau <= 6.0; tau += 0.6) {
      auto [lo, hi] = decay_envelope(tau, I1, alpha);
      const double t = oracles::ginv_lower_ref(tau);
      CHECK(lo <= t + 1e-12);
      CHECK(t <= hi + 1e-12);
    }
  }
  CHECK_THROWS_AS(decay_envelope(1.0, I1, 1.5), domain_error);
}

TEST_CASE("asymptotics at tau = 1000") {
  // increasing: active coordinates collapse toward zero
  Vec a0(2);
  a0 << 1.0, 3.0;
  Mat A = Mat::Identity(2, 2);
  const UncertaintySet set(a0, 1000.0, A);
  Vec q(2);
  q << 1.0, 1.0;
  const WorstCaseCertificate down = worst_case(set, linear_objective(), q);
  for (int i : down.active) {
    CHECK(down.a_star[i] > 0.0);
    CHECK(down.a_star[i] <= 1e-6 * a0[i]);
  }
  // decreasing: blow-up is linear in the per-coordinate budget, so check a
  // full-budget instance (m = 1)
  const UncertaintySet scalar(Vec::Constant(1, 2.0), 1000.0, Mat::Identity(1, 1));
  const WorstCaseCertificate up = worst_case(scalar, linear_objective(), -Vec::Ones(1));
  CHECK(up.a_star[0] >= 1e3 * 2.0);
  // shared-budget coordinates still blow up, at rates set by the allocation
  const WorstCaseCertificate up2 = worst_case(set, linear_objective(), -q);
  for (int i : up2.active) CHECK(up2.a_star[i] >= 100.0 * a0[i]);
}

TEST_CASE("value is nonincreasing in tau") {
  Vec a0(2), q(2);
  a0 << 2.0, 1.0;
  q << 1.0, 0.5;
  Mat A = Mat::Identity(2, 2);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 20; ++k) {
    const UncertaintySet set(a0, 0.1 * k, A);
    const double v = worst_case(set, linear_objective(), q, 1e-10).value;
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
}

TEST_CASE("worst case with the ellipsoidal component") {
  // delta small enough that the ellipsoid binds before the variation budget
  Vec a0(1);
  a0 << 2.0;
  const UncertaintySet set(a0, 10.0, Mat::Identity(1, 1), Mat::Identity(1, 1), 0.25,
                           NormKind::L2);
  const WorstCaseCertificate cert = worst_case(set, linear_objective(), Vec::Ones(1), 1e-10);
  CHECK(cert.converged);
  // z >= 1 - delta = 0.75 by the ellipsoid; variation budget would allow less
  CHECK(cert.a_star[0] == doctest::Approx(2.0 * 0.75).epsilon(1e-4));
  // delta = 0 pins the set at the nominal point
  const UncertaintySet pin(a0, 10.0, Mat::Identity(1, 1), Mat::Identity(1, 1), 0.0,
                           NormKind::L2);
  CHECK(worst_case(pin, linear_objective(), Vec::Ones(1)).a_star[0] == doctest::Approx(2.0));
}

TEST_CASE("L1 and LInf budgets") {
  Vec a0(2);
  a0 << 1.0, 1.0;
  Vec q(2);
  q << 1.0, 1.0;
  // LInf: each coordinate gets the full budget tau
  const UncertaintySet set_inf(a0, 0.3, Mat::Identity(2, 2), NormKind::LInf);
  const WorstCaseCertificate ci = worst_case(set_inf, linear_objective(), q, 1e-10);
  const double expect_inf = 2.0 * oracles::ginv_lower_ref(0.3);
  CHECK(ci.value == doctest::Approx(expect_inf).epsilon(1e-4));
  // L1: the budget is shared; brute-force the optimal split
  const UncertaintySet set_1(a0, 0.3, Mat::Identity(2, 2), NormKind::L1);
  const WorstCaseCertificate c1 = worst_case(set_1, linear_objective(), q, 1e-10);
  double expect_1 = std::numeric_limits<double>::infinity();
  for (double y1 = 0.0; y1 <= 0.3 + 1e-12; y1 += 1e-4)
    expect_1 = std::min(expect_1, oracles::ginv_lower_ref(y1) +
                                      oracles::ginv_lower_ref(0.3 - y1));
  CHECK(c1.value == doctest::Approx(expect_1).epsilon(1e-4));
}
