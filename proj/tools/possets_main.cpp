// possets: robust optimization with positivity-preserving uncertainty sets.
//
// Subcommands: calibrate, solve, pessimize, guarantee, pv-plan, svm,
// demo-infeasible.  All inputs/outputs are CSV or JSON; every flag can also
// be set through the environment with the POSSETS_ prefix.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "possets/calibration.hpp"
#include "possets/csv.hpp"
#include "possets/json_io.hpp"
#include "possets/oracle.hpp"
#include "possets/special.hpp"
#include "possets/synthetic.hpp"

namespace {

using namespace possets;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

std::string env_name(const std::string& flag) {
  std::string name = "POSSETS_";
  for (char c : flag)
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

void emit_error(const std::string& type, const std::string& message) {
  json j{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
}

Vec parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    vals.push_back(std::stod(tok));
  }
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_output(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw domain_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

void write_sweep_csv(const std::string& path,
                     const std::vector<std::tuple<double, std::string, double>>& rows) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw domain_error("cannot open " + path + " for writing");
    out = &file;
  }
  (*out) << "tau,metric,value\n";
  out->precision(12);
  for (const auto& [tau, metric, value] : rows)
    (*out) << tau << "," << metric << "," << value << "\n";
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string samples_path;
  std::string norm = "l2";
  std::string beta;
  double gamma = 0.0;
  double t = 1.0;
  std::string x0;
  double eps = 0.0;
  std::string output;
};

int run_calibrate(const CalibrateArgs& args) {
  const CsvTable table = read_csv_file(args.samples_path);
  SampleMatrix samples{table.values};
  samples.validate();
  const NormKind norm = norm_kind_from_string(args.norm);

  CalibrationReport report;
  report.norm = norm;
  report.a0 = fit_nominal(samples);
  report.A = fit_shape_matrix(samples, report.a0);
  report.tau_full = tau_full(samples, report.a0, report.A, norm);

  if (!args.beta.empty()) {
    Vec beta = parse_vector(args.beta);
    if (beta.size() == 1) beta = Vec::Constant(samples.dim(), beta[0]);
    report.tau_bound = tau_from_bound(beta, report.A, norm);
  }
  if (!args.x0.empty()) {
    const Vec x0 = parse_vector(args.x0);
    report.tau_value =
        tau_from_value_bound(args.gamma, args.t, x0, report.a0, report.A, norm);
  }
  if (args.eps > 0.0) {
    const LognormalSpec spec = lognormal_fit(samples);
    GuaranteeParams g;
    g.epsilon = args.eps;
    g.lambda = spec.lambda;
    g.delta_eps = std::sqrt(chi2_inv(static_cast<int>(samples.dim()), 1.0 - args.eps));
    g.tau = tau_guarantee(args.eps, static_cast<int>(samples.dim()), spec.lambda);
    report.guarantee = g;
  }
  write_output(json(report), args.output);
  return kExitOk;
}

// -------------------------------------------------------------------- solve

struct SolveArgs {
  std::string problem_path;
  std::string method = "dual";
  double tol = 1e-8;
  double tau_override = -1.0;
  int max_cuts = 400;
  std::string output;
};

int run_solve(const SolveArgs& args) {
  RobustProblem problem = read_json_file(args.problem_path).get<RobustProblem>();
  if (args.tau_override >= 0.0)
    for (auto& row : problem.rows)
      if (row.uncertainty && row.uncertainty->omega)
        row.uncertainty->omega->tau = args.tau_override;

  SolveResult result;
  if (args.method == "dual")
    result = solve_dual_form(problem, args.tol);
  else if (args.method == "cuts")
    result = solve_cutting_plane(problem, args.tol, args.max_cuts);
  else
    throw domain_error("solve: method must be dual or cuts");

  write_output(json(result), args.output);
  return result.status == SolveStatus::optimal ? kExitOk : kExitSolver;
}

// ---------------------------------------------------------------- pessimize

struct PessimizeArgs {
  std::string set_path;
  std::string coeffs;
  double tol = 1e-9;
  std::string output;
};

int run_pessimize(const PessimizeArgs& args) {
  const UncertaintySet set = read_json_file(args.set_path).get<UncertaintySet>();
  const Vec coeffs = parse_vector(args.coeffs);
  const WorstCaseCertificate cert = worst_case(set, linear_objective(), coeffs, args.tol);
  write_output(json(cert), args.output);
  return cert.converged ? kExitOk : kExitSolver;
}

// ---------------------------------------------------------------- guarantee

struct GuaranteeArgs {
  double eps = 0.05;
  int m = 0;
  double lambda = -1.0;
  std::string mu;
  std::string sigma2;
  std::string output;
};

int run_guarantee(const GuaranteeArgs& args) {
  int m = args.m;
  double lambda = args.lambda;
  json extra;
  if (!args.mu.empty()) {
    const Vec mu = parse_vector(args.mu);
    const Vec sigma2 = parse_vector(args.sigma2);
    const LognormalSpec spec = lognormal_params(mu, sigma2);
    m = static_cast<int>(mu.size());
    lambda = spec.lambda;
    extra["mu_ln"] = vec_to_json(spec.mu_ln);
    extra["sigma2_ln"] = vec_to_json(spec.sigma2_ln);
  }
  if (m <= 0 || lambda < 0.0)
    throw domain_error("guarantee: provide --m and --lambda, or --mu and --sigma2");
  const double delta_eps = std::sqrt(chi2_inv(m, 1.0 - args.eps));
  const double tau = tau_guarantee(args.eps, m, lambda);
  json out{{"epsilon", args.eps},
           {"m", m},
           {"lambda", lambda},
           {"delta_eps", delta_eps},
           {"tau", tau}};
  for (auto& [key, value] : extra.items()) out[key] = value;
  write_output(out, args.output);
  return kExitOk;
}

// ------------------------------------------------------------------ pv-plan

struct PvArgs {
  std::string instance_path;
  std::string csv_path;
  bool synthetic = false;
  double tau = 0.0;
  double sigma_ln = 0.3;
  double gamma = 0.8;
  double area = 0.4;
  double capacity = 1.2;
  std::string method = "cuts";
  double tol = 1e-8;
  int sweep = 0;
  double tau_max = 0.5;
  int draws = 100;
  unsigned long long seed = 20240301ULL;
  std::string realized_path;
  std::string out_plan;
  std::string out_table;
};

PvInstance load_pv_instance(const PvArgs& args) {
  if (args.synthetic) return synthetic_pv_instance(args.tau, args.sigma_ln);
  if (!args.instance_path.empty()) {
    PvInstance inst = read_json_file(args.instance_path).get<PvInstance>();
    inst.irradiance_set.tau = args.tau;
    return inst;
  }
  if (!args.csv_path.empty()) {
    const CsvTable table = read_csv_file(args.csv_path);
    const int cd = table.column("demand");
    const int ci = table.column("irradiance");
    const int cp = table.column("price");
    require(cd >= 0 && ci >= 0 && cp >= 0,
            "pv-plan CSV needs demand, irradiance and price columns");
    PvInstance inst;
    inst.horizon = static_cast<int>(table.values.rows());
    inst.demand = table.values.col(cd);
    inst.irradiance = table.values.col(ci);
    inst.price = table.values.col(cp);
    inst.gamma = args.gamma;
    inst.panel_area = args.area;
    inst.capacity = args.capacity;
    inst.irradiance_set = UncertaintySet(
        inst.irradiance, args.tau,
        (1.0 / args.sigma_ln) * Mat::Identity(inst.horizon, inst.horizon), NormKind::L2);
    return inst;
  }
  throw domain_error("pv-plan: provide --instance, --csv or --synthetic");
}

SolveResult solve_pv(const PvInstance& inst, const std::string& method, double tol) {
  const RobustProblem problem = build_pv_problem(inst);
  return method == "dual" ? solve_dual_form(problem, tol)
                          : solve_cutting_plane(problem, tol);
}

int run_pv(const PvArgs& args) {
  PvInstance inst = load_pv_instance(args);
  const SolveResult result = solve_pv(inst, args.method, args.tol);
  if (result.status != SolveStatus::optimal) {
    emit_error("solver", "pv-plan solve ended with status " + to_string(result.status));
    return kExitSolver;
  }
  const PvPlan plan = PvPlan::from_solution(inst, result.x);

  json out{{"status", to_string(result.status)},
           {"tau", inst.irradiance_set.tau},
           {"objective", result.objective},
           {"plan", plan}};
  if (!args.realized_path.empty()) {
    const CsvTable table = read_csv_file(args.realized_path);
    const int c = table.column("irradiance");
    const Vec realized = c >= 0 ? table.values.col(c) : table.values.col(0);
    out["evaluation"] = json{{"max_violation_rate",
                              evaluate_violation_rate(plan, realized, inst.irradiance,
                                                      inst.panel_area)},
                             {"actual_cost",
                              evaluate_actual_cost(plan, realized, inst).actual_cost}};
  }
  write_output(out, args.out_plan);

  if (args.sweep > 0) {
    // Held-out draws are fixed once so every tau faces the same scenarios.
    Rng rng(args.seed);
    std::vector<Vec> draws;
    for (int d = 0; d < args.draws; ++d) draws.push_back(pv_realized_draw(inst, rng));

    std::vector<std::tuple<double, std::string, double>> rows;
    for (int k = 0; k < args.sweep; ++k) {
      const double tau =
          args.sweep == 1 ? args.tau : args.tau_max * static_cast<double>(k) /
                                           static_cast<double>(args.sweep - 1);
      PvInstance sweep_inst = inst;
      sweep_inst.irradiance_set.tau = tau;
      const SolveResult r = solve_pv(sweep_inst, args.method, args.tol);
      if (r.status != SolveStatus::optimal) {
        emit_error("solver", "pv-plan sweep solve failed at tau " + std::to_string(tau));
        return kExitSolver;
      }
      const PvPlan p = PvPlan::from_solution(sweep_inst, r.x);
      double viol = 0.0, cost = 0.0;
      for (const Vec& e : draws) {
        const EvaluationReport rep = evaluate_actual_cost(p, e, sweep_inst);
        viol += rep.max_violation_rate;
        cost += rep.actual_cost;
      }
      viol /= static_cast<double>(draws.size());
      cost /= static_cast<double>(draws.size());
      rows.emplace_back(tau, "mean_max_violation_pct", viol);
      rows.emplace_back(tau, "mean_actual_cost", cost);
      rows.emplace_back(tau, "planned_cost", r.objective);
    }
    write_sweep_csv(args.out_table, rows);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------- svm

struct SvmArgs {
  std::string data_path;
  bool synthetic = false;
  int per_class = 30;
  int dim = 2;
  double tau = 0.1;
  double c = 1.0;
  double shape = 1.0;
  double tol = 1e-8;
  int sweep = 0;
  double tau_max = 1.0;
  double c_min = 0.01;
  double c_max = 100.0;
  unsigned long long seed = 7151ULL;
  std::string out_table;
  std::string output;
};

int run_svm(const SvmArgs& args) {
  SvmInstance all;
  Rng rng(args.seed);
  if (args.synthetic) {
    all = synthetic_svm_instance(args.per_class, args.dim, args.tau, args.shape, rng);
  } else if (!args.data_path.empty()) {
    const CsvTable table = read_csv_file(args.data_path);  // label-first rows
    require(table.values.cols() >= 2, "svm: need a label column plus features");
    all.X = table.values.rightCols(table.values.cols() - 1);
    all.y = table.values.col(0);
    all.tau = args.tau;
    all.shape_scale = args.shape;
  } else {
    throw domain_error("svm: provide --data or --synthetic");
  }
  all.C = args.c;
  all.validate();

  // Deterministic stratified split: shuffle within each class, then take the
  // first half of each for training so both sides stay balanced.
  const Eigen::Index N = all.X.rows();
  std::vector<Eigen::Index> train_idx, test_idx;
  for (const double label : {1.0, -1.0}) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < N; ++i)
      if (all.y[i] == label) members.push_back(i);
    for (size_t i = members.size(); i > 1; --i)
      std::swap(members[i - 1],
                members[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    const size_t half = members.size() / 2;
    for (size_t i = 0; i < members.size(); ++i)
      (i < half ? train_idx : test_idx).push_back(members[i]);
  }
  require(!train_idx.empty() && !test_idx.empty(), "svm: not enough data to split");
  SvmInstance train = all, test = all;
  train.X.resize(static_cast<Eigen::Index>(train_idx.size()), all.X.cols());
  train.y.resize(static_cast<Eigen::Index>(train_idx.size()));
  test.X.resize(static_cast<Eigen::Index>(test_idx.size()), all.X.cols());
  test.y.resize(static_cast<Eigen::Index>(test_idx.size()));
  for (size_t i = 0; i < train_idx.size(); ++i) {
    train.X.row(static_cast<Eigen::Index>(i)) = all.X.row(train_idx[i]);
    train.y[static_cast<Eigen::Index>(i)] = all.y[train_idx[i]];
  }
  for (size_t i = 0; i < test_idx.size(); ++i) {
    test.X.row(static_cast<Eigen::Index>(i)) = all.X.row(test_idx[i]);
    test.y[static_cast<Eigen::Index>(i)] = all.y[test_idx[i]];
  }

  const SvmModel robust = train_robust_svm(train, args.tol);
  const SvmModel nominal = train_nominal_svm(train, args.tol);
  if (robust.status != SolveStatus::optimal) {
    emit_error("solver", "robust svm training failed");
    return kExitSolver;
  }
  json out{{"robust",
            {{"tau", train.tau},
             {"objective", robust.objective},
             {"train_accuracy", svm_accuracy(svm_predict(robust.w, robust.b, train.X), train.y)},
             {"test_accuracy", svm_accuracy(svm_predict(robust.w, robust.b, test.X), test.y)}}},
           {"nominal",
            {{"C", train.C},
             {"objective", nominal.objective},
             {"train_accuracy",
              svm_accuracy(svm_predict(nominal.w, nominal.b, train.X), train.y)},
             {"test_accuracy", svm_accuracy(svm_predict(nominal.w, nominal.b, test.X), test.y)}}}};
  write_output(out, args.output);

  if (args.sweep > 0) {
    std::vector<std::tuple<double, std::string, double>> rows;
    for (int k = 0; k < args.sweep; ++k) {
      const double tau = args.tau_max * static_cast<double>(k) /
                         static_cast<double>(std::max(1, args.sweep - 1));
      SvmInstance ti = train;
      ti.tau = tau;
      const SvmModel model = train_robust_svm(ti, args.tol);
      rows.emplace_back(tau, "robust_objective", model.objective);
      rows.emplace_back(tau, "robust_test_accuracy",
                        svm_accuracy(svm_predict(model.w, model.b, test.X), test.y));
    }
    for (int k = 0; k < args.sweep; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(std::max(1, args.sweep - 1));
      const double c = args.c_min * std::pow(args.c_max / args.c_min, f);
      SvmInstance ti = train;
      ti.C = c;
      const SvmModel model = train_nominal_svm(ti, args.tol);
      rows.emplace_back(c, "nominal_objective", model.objective);
      rows.emplace_back(c, "nominal_test_accuracy",
                        svm_accuracy(svm_predict(model.w, model.b, test.X), test.y));
    }
    write_sweep_csv(args.out_table, rows);
  }
  return kExitOk;
}

// ----------------------------------------------------------- demo-infeasible

struct DemoArgs {
  double delta_factor = 1.5;  // times ||Sigma^{-1/2} a0||_2
  std::string output;
};

int run_demo(const DemoArgs& args) {
  // min x1 + x2  s.t.  a^T x >= 1, x >= 0, a uncertain around (1,1).
  // The ellipsoid past the positivity threshold admits nonpositive
  // scenarios, so no x works; the positivity-preserving set keeps the
  // robust counterpart feasible at every level.
  const Eigen::Index n = 2;
  RobustProblem base;
  base.sense = ObjSense::minimize;
  base.c = Vec::Ones(n);
  base.lower = Vec::Zero(n);
  base.upper = Vec::Constant(n, kInfBound);
  LinearRow row;
  row.coeffs = Vec::Zero(n);
  row.sense = RowSense::ge;
  row.rhs = 1.0;
  const Vec a0 = Vec::Ones(n);
  const Mat shape = 2.0 * Mat::Identity(n, n);

  json out;
  // Ellipsoidal model sized past the positivity threshold.
  {
    EllipsoidSet ell;
    ell.a0 = a0;
    ell.Sigma = Mat::Identity(n, n);
    ell.delta = args.delta_factor * a0.norm();  // > ||Sigma^{-1/2} a0||_2
    RobustProblem p = base;
    LinearRow r = row;
    UncertainTerm term;
    term.ellipsoid = ell;
    term.vars = {0, 1};
    term.scale = Vec::Ones(n);
    r.uncertainty = std::move(term);
    p.rows.push_back(std::move(r));
    const SolveResult res = solve_cutting_plane(p, 1e-8);
    out["ellipsoid"] = json{{"delta", ell.delta}, {"status", to_string(res.status)}};
  }

  // Positivity-preserving set: solve outright while the optimizer fits the
  // bound sentinels; past that the optimal scale grows like exp(tau), so
  // feasibility is shown by an explicit robust-feasible witness instead.
  out["omega"] = json::array();
  bool all_feasible = true;
  for (const double tau : {1e-3, 1.0, 10.0, 100.0, 1000.0}) {
    const UncertaintySet set(a0, tau, shape, NormKind::L2);
    const double min_sum = worst_case(set, linear_objective(), Vec::Ones(n)).value;
    json entry{{"tau", tau}};
    if (tau <= 10.0) {
      RobustProblem p = base;
      LinearRow r = row;
      UncertainTerm term;
      term.omega = set;
      term.vars = {0, 1};
      term.scale = Vec::Ones(n);
      term.monotone = Monotone::increasing;
      r.uncertainty = std::move(term);
      p.rows.push_back(std::move(r));
      const SolveResult res = solve_cutting_plane(p, 1e-8);
      all_feasible = all_feasible && res.status == SolveStatus::optimal;
      entry["mode"] = "solve";
      entry["status"] = to_string(res.status);
      entry["objective"] = res.objective;
    } else {
      const double scale = (row.rhs / min_sum) * (1.0 + 1e-9);
      const Vec witness = scale * Vec::Ones(n);
      const double worst = worst_case(set, linear_objective(), witness).value;
      const bool feasible = worst >= row.rhs * (1.0 - 1e-9);
      all_feasible = all_feasible && feasible;
      entry["mode"] = "witness";
      entry["witness_scale"] = scale;
      entry["worst_value"] = worst;
      entry["feasible"] = feasible;
    }
    out["omega"].push_back(std::move(entry));
  }
  const bool contrast = out["ellipsoid"]["status"] == "infeasible" && all_feasible;
  out["contrast_reproduced"] = contrast;
  write_output(out, args.output);
  return contrast ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust optimization with positivity-preserving uncertainty sets"};
  app.require_subcommand(1);

  auto opt = [](CLI::Option* o, const std::string& flag) {
    o->envname(env_name(flag));
    return o;
  };

  CalibrateArgs cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit set parameters from sample CSV");
  opt(cal_cmd->add_option("--samples", cal.samples_path, "CSV of observations, one row each")
          ->required(), "samples");
  opt(cal_cmd->add_option("--norm", cal.norm, "l1 | l2 | linf"), "norm");
  opt(cal_cmd->add_option("--beta", cal.beta, "worst-case floor ratios in (0,1)"), "beta");
  opt(cal_cmd->add_option("--gamma", cal.gamma, "objective value target"), "gamma");
  opt(cal_cmd->add_option("--t", cal.t, "certificate scale for the value bound"), "t");
  opt(cal_cmd->add_option("--x0", cal.x0, "reference decision for the value bound"), "x0");
  opt(cal_cmd->add_option("--eps", cal.eps, "guarantee violation probability"), "eps");
  opt(cal_cmd->add_option("--output", cal.output, "report JSON path (default stdout)"),
      "output");

  SolveArgs sol;
  auto* sol_cmd = app.add_subcommand("solve", "Solve a robust problem JSON");
  opt(sol_cmd->add_option("--problem", sol.problem_path, "RobustProblem JSON")->required(),
      "problem");
  opt(sol_cmd->add_option("--method", sol.method, "dual | cuts"), "method");
  opt(sol_cmd->add_option("--tol", sol.tol, "solver tolerance"), "tol");
  opt(sol_cmd->add_option("--tau-override", sol.tau_override, "override every row tau"),
      "tau-override");
  opt(sol_cmd->add_option("--max-cuts", sol.max_cuts, "cutting-plane budget"), "max-cuts");
  opt(sol_cmd->add_option("--output", sol.output, "result JSON path"), "output");

  PessimizeArgs pes;
  auto* pes_cmd = app.add_subcommand("pessimize", "Worst-case scenario of a linear function");
  opt(pes_cmd->add_option("--set", pes.set_path, "UncertaintySet JSON")->required(), "set");
  opt(pes_cmd->add_option("--coeffs", pes.coeffs, "linear coefficients, comma separated")
          ->required(), "coeffs");
  opt(pes_cmd->add_option("--tol", pes.tol, "oracle tolerance"), "tol");
  opt(pes_cmd->add_option("--output", pes.output, "certificate JSON path"), "output");

  GuaranteeArgs gua;
  auto* gua_cmd = app.add_subcommand("guarantee", "Certified tau for a lognormal model");
  opt(gua_cmd->add_option("--eps", gua.eps, "violation probability in (0,1)"), "eps");
  opt(gua_cmd->add_option("--m", gua.m, "dimension"), "m");
  opt(gua_cmd->add_option("--lambda", gua.lambda, "max log-space variance"), "lambda");
  opt(gua_cmd->add_option("--mu", gua.mu, "arithmetic means (alternative input)"), "mu");
  opt(gua_cmd->add_option("--sigma2", gua.sigma2, "arithmetic variances"), "sigma2");
  opt(gua_cmd->add_option("--output", gua.output, "report JSON path"), "output");

  PvArgs pv;
  auto* pv_cmd = app.add_subcommand("pv-plan", "Photovoltaic-battery operation planning");
  opt(pv_cmd->add_option("--instance", pv.instance_path, "PvInstance JSON"), "instance");
  opt(pv_cmd->add_option("--csv", pv.csv_path, "hour,demand,irradiance,price CSV"), "csv");
  opt(pv_cmd->add_flag("--synthetic", pv.synthetic, "use the bundled synthetic instance"),
      "synthetic");
  opt(pv_cmd->add_option("--tau", pv.tau, "uncertainty level"), "tau");
  opt(pv_cmd->add_option("--sigma-ln", pv.sigma_ln, "log-space std of the irradiance model"),
      "sigma-ln");
  opt(pv_cmd->add_option("--gamma", pv.gamma, "discharge efficiency (CSV input)"), "gamma");
  opt(pv_cmd->add_option("--area", pv.area, "panel area m^2 (CSV input)"), "area");
  opt(pv_cmd->add_option("--cap", pv.capacity, "battery capacity kWh (CSV input)"), "cap");
  opt(pv_cmd->add_option("--method", pv.method, "dual | cuts"), "method");
  opt(pv_cmd->add_option("--tol", pv.tol, "solver tolerance"), "tol");
  opt(pv_cmd->add_option("--sweep", pv.sweep, "tau sweep point count"), "sweep");
  opt(pv_cmd->add_option("--tau-max", pv.tau_max, "sweep upper end"), "tau-max");
  opt(pv_cmd->add_option("--draws", pv.draws, "held-out draws per sweep point"), "draws");
  opt(pv_cmd->add_option("--seed", pv.seed, "random seed"), "seed");
  opt(pv_cmd->add_option("--realized", pv.realized_path, "realized irradiance CSV"),
      "realized");
  opt(pv_cmd->add_option("--out-plan", pv.out_plan, "plan JSON path"), "out-plan");
  opt(pv_cmd->add_option("--out-table", pv.out_table, "sweep CSV path"), "out-table");

  SvmArgs svm;
  auto* svm_cmd = app.add_subcommand("svm", "Robust support vector machine");
  opt(svm_cmd->add_option("--data", svm.data_path, "label-first CSV"), "data");
  opt(svm_cmd->add_flag("--synthetic", svm.synthetic, "generate synthetic data"), "synthetic");
  opt(svm_cmd->add_option("--per-class", svm.per_class, "synthetic samples per class"),
      "per-class");
  opt(svm_cmd->add_option("--dim", svm.dim, "synthetic feature count"), "dim");
  opt(svm_cmd->add_option("--tau", svm.tau, "uncertainty level"), "tau");
  opt(svm_cmd->add_option("--c", svm.c, "nominal model penalty"), "c");
  opt(svm_cmd->add_option("--shape", svm.shape, "per-sample shape scale"), "shape");
  opt(svm_cmd->add_option("--tol", svm.tol, "solver tolerance"), "tol");
  opt(svm_cmd->add_option("--sweep", svm.sweep, "sweep point count"), "sweep");
  opt(svm_cmd->add_option("--tau-max", svm.tau_max, "tau sweep upper end"), "tau-max");
  opt(svm_cmd->add_option("--c-min", svm.c_min, "C sweep lower end"), "c-min");
  opt(svm_cmd->add_option("--c-max", svm.c_max, "C sweep upper end"), "c-max");
  opt(svm_cmd->add_option("--seed", svm.seed, "random seed"), "seed");
  opt(svm_cmd->add_option("--out-table", svm.out_table, "sweep CSV path"), "out-table");
  opt(svm_cmd->add_option("--output", svm.output, "summary JSON path"), "output");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand(
      "demo-infeasible", "Ellipsoidal infeasibility vs positivity-preserving feasibility");
  opt(demo_cmd->add_option("--delta-factor", demo.delta_factor,
                           "ellipsoid radius as a multiple of ||a0||"), "delta-factor");
  opt(demo_cmd->add_option("--output", demo.output, "contrast JSON path"), "output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cal_cmd) return run_calibrate(cal);
    if (*sol_cmd) return run_solve(sol);
    if (*pes_cmd) return run_pessimize(pes);
    if (*gua_cmd) return run_guarantee(gua);
    if (*pv_cmd) return run_pv(pv);
    if (*svm_cmd) return run_svm(svm);
    if (*demo_cmd) return run_demo(demo);
  } catch (const domain_error& e) {
    emit_error("input", e.what());
    return kExitInput;
  } catch (const json::exception& e) {
    emit_error("input", e.what());
    return kExitInput;
  } catch (const numerical_error& e) {
    emit_error("solver", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    emit_error("input", e.what());
    return kExitInput;
  }
  return kExitUsage;
}
