#include <sstream>

#include "doctest.h"
#include "possets/csv.hpp"
#include "possets/json_io.hpp"
#include "possets/rng.hpp"

using namespace possets;

TEST_CASE("uncertainty set JSON round trip") {
  Vec a0(2);
  a0 << 1.5, 2.5;
  Mat A(2, 2);
  A << 1.0, 0.2, 0.0, 0.9;
  const UncertaintySet set(a0, 0.4, A, NormKind::LInf);
  const json j = set;
  CHECK(j.at("norm") == "linf");
  const UncertaintySet back = j.get<UncertaintySet>();
  CHECK((back.a0 - set.a0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.A - set.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.tau == set.tau);
  CHECK_FALSE(back.V.has_value());

  const UncertaintySet ell(a0, 0.4, A, Mat::Identity(2, 2), 0.3, NormKind::L2);
  const UncertaintySet ell_back = json(ell).get<UncertaintySet>();
  CHECK(ell_back.V.has_value());
  CHECK(*ell_back.delta == 0.3);
}

TEST_CASE("robust problem JSON round trip with umap and ellipsoid") {
  Rng rng(71);
  RobustProblem p;
  p.sense = ObjSense::maximize;
  p.c.resize(3);
  p.c << 1.0, -2.0, 0.5;
  p.lower = Vec::Constant(3, -kInfBound);
  p.upper = Vec::Constant(3, kInfBound);
  p.lower[1] = 0.0;

  LinearRow certain;
  certain.coeffs = Vec::Ones(3);
  certain.sense = RowSense::eq;
  certain.rhs = 2.0;
  p.rows.push_back(certain);

  LinearRow mapped;
  mapped.coeffs = Vec::Zero(3);
  mapped.coeffs[2] = 1.0;
  mapped.sense = RowSense::le;
  mapped.rhs = 1.0;
  UncertainTerm term;
  term.omega = UncertaintySet(Vec::Constant(2, 1.0), 0.2, Mat::Identity(2, 2));
  term.vars = {0, -1};
  term.scale.resize(2);
  term.scale << 2.0, -1.0;
  term.monotone = Monotone::increasing;
  mapped.uncertainty = std::move(term);
  p.rows.push_back(mapped);

  LinearRow ellrow;
  ellrow.coeffs = Vec::Zero(3);
  ellrow.sense = RowSense::ge;
  ellrow.rhs = 0.5;
  UncertainTerm eterm;
  EllipsoidSet ell;
  ell.a0 = Vec::Ones(3);
  ell.Sigma = Mat::Identity(3, 3);
  ell.delta = 0.1;
  eterm.ellipsoid = ell;
  eterm.vars = {0, 1, 2};
  eterm.scale = Vec::Ones(3);
  ellrow.uncertainty = std::move(eterm);
  p.rows.push_back(ellrow);

  const json j = p;
  const RobustProblem back = j.get<RobustProblem>();
  CHECK(back.sense == ObjSense::maximize);
  CHECK((back.c - p.c).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[0].sense == RowSense::eq);
  REQUIRE(back.rows[1].uncertainty.has_value());
  CHECK(back.rows[1].uncertainty->vars == std::vector<int>{0, -1});
  CHECK(back.rows[1].uncertainty->monotone == Monotone::increasing);
  REQUIRE(back.rows[2].uncertainty->ellipsoid.has_value());
  CHECK(back.rows[2].uncertainty->ellipsoid->delta == 0.1);

  // whole-row uncertainty without umap: coeffs restate the nominal
  json plain = {
      {"sense", "min"},
      {"c", {1.0}},
      {"bounds", {{0.0, 10.0}}},
      {"rows",
       {{{"coeffs", {2.0}},
         {"sense", ">="},
         {"rhs", 1.0},
         {"uncertainty",
          {{"a0", {2.0}}, {"tau", 0.25}, {"A", {{1.0}}}, {"norm", "l2"}}}}}}};
  const RobustProblem kp = plain.get<RobustProblem>();
  REQUIRE(kp.rows.size() == 1);
  CHECK(kp.rows[0].coeffs[0] == 0.0);  // moved into the uncertain term
  CHECK(kp.rows[0].uncertainty->nominal()[0] == 2.0);

  plain["rows"][0]["coeffs"][0] = 3.0;  // mismatch with a0 must be rejected
  CHECK_THROWS_AS(plain.get<RobustProblem>(), domain_error);
}

TEST_CASE("solve result JSON carries the documented keys") {
  SolveResult r;
  r.status = SolveStatus::optimal;
  r.x = Vec::Ones(2);
  r.objective = 3.5;
  r.row_residuals = Vec::Zero(1);
  r.iterations = 7;
  const json j = r;
  CHECK(j.at("status") == "optimal");
  CHECK(j.at("objective") == 3.5);
  CHECK(j.at("x").size() == 2);
  CHECK(j.contains("residuals"));
  CHECK(j.contains("iterations"));
  CHECK(j.contains("wall_time_ms"));
}

TEST_CASE("calibration report JSON round trip") {
  CalibrationReport rep;
  rep.a0 = Vec::Ones(2);
  rep.A = Mat::Identity(2, 2);
  rep.tau_full = 0.7;
  rep.tau_bound = 0.2;
  GuaranteeParams g;
  g.epsilon = 0.05;
  g.lambda = 0.01;
  g.delta_eps = 2.44;
  g.tau = 0.68;
  rep.guarantee = g;
  const CalibrationReport back = json(rep).get<CalibrationReport>();
  CHECK(back.tau_full == 0.7);
  CHECK(back.tau_bound.has_value());
  CHECK_FALSE(back.tau_value.has_value());
  REQUIRE(back.guarantee.has_value());
  CHECK(back.guarantee->epsilon == 0.05);
}

TEST_CASE("csv parsing with and without header") {
  std::istringstream with_header("a,b\n1.5,2\n3,4.25\n");
  const CsvTable t1 = read_csv(with_header);
  CHECK(t1.header == std::vector<std::string>{"a", "b"});
  CHECK(t1.column("b") == 1);
  CHECK(t1.column("missing") == -1);
  CHECK(t1.values(1, 1) == 4.25);

  std::istringstream plain("1,2\n3,4\n");
  const CsvTable t2 = read_csv(plain);
  CHECK(t2.header.empty());
  CHECK(t2.values.rows() == 2);

  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), domain_error);
  std::istringstream junk("a,b\n1,x\n");
  CHECK_THROWS_AS(read_csv(junk), domain_error);
}

TEST_CASE("csv write/read round trip") {
  Mat M(2, 3);
  M << 1.0, 2.5, -3.0, 4.0, 0.125, 6.0;
  std::ostringstream out;
  write_csv(out, {"x", "y", "z"}, M);
  std::istringstream in(out.str());
  const CsvTable t = read_csv(in);
  CHECK(t.header.size() == 3);
  CHECK((t.values - M).cwiseAbs().maxCoeff() < 1e-9);
}
