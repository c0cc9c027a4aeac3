#include "possets/robust_solve.hpp"

#include <cmath>

#include "doctest.h"
#include "possets/oracle.hpp"
#include "possets/rng.hpp"
#include "possets/variation.hpp"

using namespace possets;

namespace {

// min c^T x s.t. a^T x >= b (a uncertain, increasing), x in [0, ub].
RobustProblem scalar_knapsack(double a0, double tau, double A, double b, double ub) {
  RobustProblem p;
  p.sense = ObjSense::minimize;
  p.c = Vec::Ones(1);
  p.lower = Vec::Zero(1);
  p.upper = Vec::Constant(1, ub);
  LinearRow row;
  row.coeffs = Vec::Zero(1);
  row.sense = RowSense::ge;
  row.rhs = b;
  UncertainTerm term;
  term.omega = UncertaintySet(Vec::Constant(1, a0), tau, A * Mat::Identity(1, 1));
  term.vars = {0};
  term.scale = Vec::Ones(1);
  term.monotone = Monotone::increasing;
  row.uncertainty = std::move(term);
  p.rows.push_back(std::move(row));
  return p;
}

RobustProblem random_instance(Rng& rng, int n, int n_uncertain) {
  RobustProblem p;
  p.sense = ObjSense::minimize;
  p.c.resize(n);
  for (int j = 0; j < n; ++j) p.c[j] = rng.uniform(0.5, 2.0);
  p.lower = Vec::Zero(n);
  p.upper = Vec::Constant(n, 10.0);
  // a couple of certain <= rows keep things interesting
  for (int r = 0; r < 2; ++r) {
    LinearRow row;
    row.coeffs.resize(n);
    for (int j = 0; j < n; ++j) row.coeffs[j] = rng.uniform(0.0, 1.0);
    row.sense = RowSense::le;
    row.rhs = rng.uniform(5.0, 15.0);
    p.rows.push_back(std::move(row));
  }
  for (int r = 0; r < n_uncertain; ++r) {
    const int m = 1 + rng.uniform_int(0, 2);
    LinearRow row;
    row.coeffs = Vec::Zero(n);
    UncertainTerm term;
    Vec a0(m);
    Mat A = Mat::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      a0[k] = rng.uniform(0.5, 2.5);
      A(k, k) = rng.uniform(0.6, 1.5);
    }
    term.omega = UncertaintySet(a0, rng.uniform(0.01, 0.8), A);
    term.vars.resize(static_cast<size_t>(m));
    term.scale = Vec::Ones(m);
    for (int k = 0; k < m; ++k) term.vars[static_cast<size_t>(k)] = rng.uniform_int(0, n - 1);
    term.monotone = Monotone::increasing;
    row.uncertainty = std::move(term);
    row.sense = RowSense::ge;
    // feasible by construction: worst-case coefficients keep >= 30% of the
    // nominal mass, and x can go to 10.
    row.rhs = rng.uniform(0.5, 0.3 * a0.sum());
    p.rows.push_back(std::move(row));
  }
  return p;
}

}  // namespace

TEST_CASE("knapsack closed form, both methods") {
  for (const double tau : {0.0, 0.25, 0.5}) {
    const RobustProblem p = scalar_knapsack(2.0, tau, 1.0, 1.0, 10.0);
    const double worst_a = 2.0 * variation_inverse_lower(tau);
    const SolveResult dual = solve_dual_form(p, 1e-9);
    const SolveResult cuts = solve_cutting_plane(p, 1e-9);
    REQUIRE(dual.status == SolveStatus::optimal);
    REQUIRE(cuts.status == SolveStatus::optimal);
    CHECK(dual.objective == doctest::Approx(1.0 / worst_a).epsilon(1e-7));
    CHECK(cuts.objective == doctest::Approx(1.0 / worst_a).epsilon(1e-7));
    CHECK(std::abs(dual.objective - cuts.objective) < 1e-6);
    CHECK(dual.row_residuals.minCoeff() >= -1e-6);
    CHECK(cuts.row_residuals.minCoeff() >= -1e-6);
  }
}

TEST_CASE("dual certificates satisfy their linear invariants") {
  const RobustProblem p = scalar_knapsack(2.0, 0.4, 1.3, 1.0, 10.0);
  const SolveResult dual = solve_dual_form(p, 1e-9);
  REQUIRE(dual.status == SolveStatus::optimal);
  REQUIRE(dual.certificates.size() == 1);
  const DualCertificate& cert = dual.certificates[0];
  CHECK(cert.linear_residual(*p.rows[0].uncertainty->omega) < 1e-8);
  CHECK((cert.u.array() > 0.0).all());
  CHECK(((cert.u - cert.w).array() > 0.0).all());
}

TEST_CASE("problem with no uncertain rows is a single LP solve") {
  RobustProblem p;
  p.sense = ObjSense::minimize;
  p.c = Vec::Ones(2);
  p.lower = Vec::Zero(2);
  p.upper = Vec::Constant(2, kInfBound);
  LinearRow row;
  row.coeffs = Vec::Ones(2);
  row.sense = RowSense::ge;
  row.rhs = 3.0;
  p.rows.push_back(row);
  const SolveResult r = solve_cutting_plane(p, 1e-9);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(r.cuts.empty());
  const SolveResult rd = solve_dual_form(p, 1e-9);
  CHECK(rd.objective == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("maximization sense") {
  RobustProblem p;
  p.sense = ObjSense::maximize;
  p.c = Vec::Ones(1);
  p.lower = Vec::Zero(1);
  p.upper = Vec::Constant(1, 5.0);
  const SolveResult r = solve_dual_form(p, 1e-9);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.objective == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("equality rows flow through both methods") {
  // min x + y s.t. x - y = 1, x + y >= 2 robustly-certain, bounds [0, 10]
  RobustProblem p;
  p.sense = ObjSense::minimize;
  p.c = Vec::Ones(2);
  p.lower = Vec::Zero(2);
  p.upper = Vec::Constant(2, 10.0);
  LinearRow eq;
  eq.coeffs.resize(2);
  eq.coeffs << 1.0, -1.0;
  eq.sense = RowSense::eq;
  eq.rhs = 1.0;
  p.rows.push_back(eq);
  LinearRow ge;
  ge.coeffs = Vec::Ones(2);
  ge.sense = RowSense::ge;
  ge.rhs = 2.0;
  p.rows.push_back(ge);
  const SolveResult rC = solve_cutting_plane(p, 1e-9);
  const SolveResult rD = solve_dual_form(p, 1e-9);
  CHECK(rC.objective == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rD.objective == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rC.x[0] - rC.x[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cross-solver agreement on random feasible instances") {
  Rng rng(31);
  int solved = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const RobustProblem p = random_instance(rng, 2 + rng.uniform_int(0, 4), 1 + rng.uniform_int(0, 1));
    const SolveResult cuts = solve_cutting_plane(p, 1e-9);
    if (cuts.status != SolveStatus::optimal) continue;  // skip rare infeasible draws
    const SolveResult dual = solve_dual_form(p, 1e-9);
    REQUIRE(dual.status == SolveStatus::optimal);
    CHECK(std::abs(dual.objective - cuts.objective) <=
          1e-4 * std::max(1.0, std::abs(cuts.objective)));
    ++solved;
  }
  CHECK(solved >= 8);
}

TEST_CASE("objective is nondecreasing along a tau sweep") {
  double prev = -1.0;
  for (int k = 0; k < 20; ++k) {
    const double tau = 0.05 * k;
    const RobustProblem p = scalar_knapsack(2.0, tau, 1.0, 1.0, 1e6);
    const SolveResult r = solve_dual_form(p, 1e-10);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective >= prev - 1e-7);
    prev = r.objective;
  }
}

TEST_CASE("ellipsoidal rows: cuts only, dual rejects") {
  RobustProblem p;
  p.sense = ObjSense::minimize;
  p.c = Vec::Ones(2);
  p.lower = Vec::Zero(2);
  p.upper = Vec::Constant(2, 10.0);
  LinearRow row;
  row.coeffs = Vec::Zero(2);
  row.sense = RowSense::ge;
  row.rhs = 1.0;
  UncertainTerm term;
  EllipsoidSet ell;
  ell.a0 = Vec::Ones(2);
  ell.Sigma = Mat::Identity(2, 2);
  ell.delta = 0.5;  // below the positivity threshold: still feasible
  term.ellipsoid = ell;
  term.vars = {0, 1};
  term.scale = Vec::Ones(2);
  row.uncertainty = std::move(term);
  p.rows.push_back(std::move(row));

  const SolveResult r = solve_cutting_plane(p, 1e-9);
  CHECK(r.status == SolveStatus::optimal);
  // closed form: symmetric optimum x = t e with (a0^T - delta ||.||) t = 1
  const double t = 1.0 / (2.0 - 0.5 * std::sqrt(2.0));
  CHECK(r.objective == doctest::Approx(2.0 * t).epsilon(1e-6));
  CHECK_THROWS_AS(solve_dual_form(p, 1e-9), domain_error);

  // past the threshold the robust counterpart is infeasible
  p.rows[0].uncertainty->ellipsoid->delta = 1.5 * std::sqrt(2.0);
  CHECK(solve_cutting_plane(p, 1e-9).status == SolveStatus::infeasible);
}

TEST_CASE("pessimize_row on a mapped constant term") {
  // row: x <= E * z with E uncertain (PV pattern): base x, uncertain -z E
  LinearRow row;
  row.coeffs = Vec::Ones(1);
  row.sense = RowSense::le;
  row.rhs = 0.0;
  UncertainTerm term;
  term.omega = UncertaintySet(Vec::Constant(1, 2.0), 0.5, Mat::Identity(1, 1));
  term.vars = {-1};
  term.scale = Vec::Constant(1, -3.0);
  row.uncertainty = std::move(term);
  const auto [worst, scenario] = pessimize_row(row, Vec::Ones(1), 1e-10);
  // sup of -3 E = -3 min E = -3 a0 g_-^{-1}(0.5)
  CHECK(worst == doctest::Approx(-3.0 * 2.0 * variation_inverse_lower(0.5)).epsilon(1e-8));
  CHECK(scenario[0] == doctest::Approx(2.0 * variation_inverse_lower(0.5)).epsilon(1e-8));
}

TEST_CASE("determinism of repeated solves") {
  const RobustProblem p = scalar_knapsack(2.0, 0.3, 1.0, 1.0, 10.0);
  const SolveResult a = solve_dual_form(p, 1e-9);
  const SolveResult b = solve_dual_form(p, 1e-9);
  CHECK(a.iterations == b.iterations);
  CHECK(a.objective == b.objective);  // bit identical
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
}
