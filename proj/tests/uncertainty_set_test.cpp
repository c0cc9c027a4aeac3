#include "possets/uncertainty_set.hpp"

#include <cmath>

#include "doctest.h"
#include "possets/rng.hpp"
#include "possets/variation.hpp"
#include "test_oracles.hpp"

using namespace possets;

namespace {

UncertaintySet two_dim_identity(double tau) {
  Vec a0(2);
  a0 << 1.0, 2.0;
  return UncertaintySet(a0, tau, Mat::Identity(2, 2), NormKind::L2);
}

Mat random_nonneg_shape(Rng& rng, int m) {
  // Diagonally dominant with nonnegative entries: the tight-y membership
  // test is exact for this family.
  Mat A = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = i == j ? 1.0 + rng.uniform() : 0.3 * rng.uniform();
  return A;
}

}  // namespace

TEST_CASE("construction guards") {
  Vec a0(2);
  a0 << 1.0, -2.0;
  CHECK_THROWS_AS(UncertaintySet(a0, 0.1, Mat::Identity(2, 2)), domain_error);
  a0 << 1.0, 0.0;
  CHECK_THROWS_AS(UncertaintySet(a0, 0.1, Mat::Identity(2, 2)), domain_error);
  a0 << 1.0, 2.0;
  CHECK_THROWS_AS(UncertaintySet(a0, -0.1, Mat::Identity(2, 2)), domain_error);
  CHECK_THROWS_AS(UncertaintySet(a0, 0.1, Mat::Identity(3, 3)), domain_error);
  CHECK_NOTHROW(UncertaintySet(a0, 0.0, Mat::Identity(2, 2)));
}

TEST_CASE("contains examples") {
  const UncertaintySet set = two_dim_identity(0.1);
  Vec a(2);
  a << 1.0, 2.0;
  PointDiagnostics d = contains(set, a);
  CHECK(d.inside);
  CHECK(d.budget == doctest::Approx(0.0));

  a << 1.05, 1.9;
  d = contains(set, a);
  CHECK(d.inside);
  CHECK(d.budget == doctest::Approx(0.0017709639).epsilon(1e-7));  // frozen oracle value

  a << -1.0, 2.0;
  d = contains(set, a);
  CHECK_FALSE(d.inside);
  CHECK(std::isinf(d.budget));

  Vec bad(3);
  bad.setOnes();
  CHECK_THROWS_AS(contains(set, bad), domain_error);
}

TEST_CASE("singleton at tau = 0") {
  const UncertaintySet set = two_dim_identity(0.0);
  Vec a = set.a0;
  CHECK(contains(set, a).inside);
  a[0] *= 1.0 + 1e-8;  // within numerical tolerance of the nominal
  CHECK(contains(set, a).inside);
  a[0] = set.a0[0] * 1.001;
  CHECK_FALSE(contains(set, a).inside);
}

TEST_CASE("nestedness in tau") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const double tau1 = rng.uniform(0.0, 2.0);
    const double tau2 = tau1 + rng.uniform(0.0, 2.0);
    const UncertaintySet s1 = two_dim_identity(tau1);
    const UncertaintySet s2 = two_dim_identity(tau2);
    Vec a(2);
    a << rng.uniform(0.01, 5.0), rng.uniform(0.01, 5.0);
    if (contains(s1, a).inside) CHECK(contains(s2, a).inside);
  }
}

TEST_CASE("convexity witness on random member pairs") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + rng.uniform_int(0, 2);
    Vec a0(m);
    for (int i = 0; i < m; ++i) a0[i] = rng.uniform(0.5, 3.0);
    const UncertaintySet set(a0, rng.uniform(0.1, 1.5), random_nonneg_shape(rng, m));
    // sample members via the boundary map scaled inward
    Vec dir(m);
    for (int i = 0; i < m; ++i) dir[i] = rng.uniform(0.1, 1.0);
    std::vector<bool> branch(m);
    for (int i = 0; i < m; ++i) branch[i] = rng.uniform() < 0.5;
    const Vec pa = boundary_sample(set, dir, branch);
    for (int i = 0; i < m; ++i) dir[i] = rng.uniform(0.1, 1.0);
    for (int i = 0; i < m; ++i) branch[i] = rng.uniform() < 0.5;
    const Vec pb = boundary_sample(set, dir, branch);
    REQUIRE(contains(set, pa, 1e-9).inside);
    REQUIRE(contains(set, pb, 1e-9).inside);
    const double theta = rng.uniform();
    const Vec mid = theta * pa + (1.0 - theta) * pb;
    CHECK(contains(set, mid, 1e-9).inside);
  }
}

TEST_CASE("boundary samples are positive and on the budget surface") {
  Rng rng(44);
  for (const double tau : {1e-3, 1.0, 10.0, 1000.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int m = trial % 2 == 0 ? 2 : 5;
      Vec a0(m);
      for (int i = 0; i < m; ++i) a0[i] = rng.uniform(0.2, 4.0);
      const UncertaintySet set(a0, tau, random_nonneg_shape(rng, m));
      Vec dir(m);
      for (int i = 0; i < m; ++i) dir[i] = rng.uniform(0.05, 1.0);
      std::vector<bool> branch(m);
      for (int i = 0; i < m; ++i) branch[i] = rng.uniform() < 0.5;
      const Vec a = boundary_sample(set, dir, branch);
      for (int i = 0; i < m; ++i) CHECK(a[i] > 0.0);
      if (tau <= 10.0) {
        // on the surface: the tight y reproduces the budget
        const PointDiagnostics d = contains(set, a, 1e-9);
        CHECK(d.budget == doctest::Approx(tau).epsilon(1e-6));
      }
    }
  }
  // tau = 0 degenerates to the nominal point
  const UncertaintySet set = two_dim_identity(0.0);
  Vec dir(2);
  dir.setOnes();
  CHECK(boundary_sample(set, dir, {false, true}) == set.a0);
}

TEST_CASE("m = 1 boundary closed forms") {
  Vec a0(1);
  a0 << 2.0;
  const UncertaintySet set(a0, 0.5, Mat::Identity(1, 1));
  Vec dir(1);
  dir.setOnes();
  CHECK(boundary_sample(set, dir, {false})[0] ==
        doctest::Approx(0.6034191254).epsilon(1e-6));  // 2 g_-^{-1}(1/2), frozen oracle
  CHECK(boundary_sample(set, dir, {true})[0] ==
        doctest::Approx(4.7153533479).epsilon(1e-6));  // 2 g_+^{-1}(1/2)
}

TEST_CASE("ellipsoidal component participates in membership") {
  Vec a0(2);
  a0 << 1.0, 1.0;
  const UncertaintySet set(a0, 5.0, Mat::Identity(2, 2), Mat::Identity(2, 2), 0.1,
                           NormKind::L2);
  Vec a(2);
  a << 1.05, 1.05;  // ||z - e|| = 0.0707 <= 0.1
  CHECK(contains(set, a).inside);
  a << 1.2, 1.2;  // variation budget fine at tau = 5, ellipsoid violated
  CHECK_FALSE(contains(set, a).inside);
}
