#include "possets/json_io.hpp"

namespace possets {

json mat_to_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  require(j.is_array(), "json matrix: expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Mat(0, 0);
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Mat M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    require(static_cast<Eigen::Index>(j.at(i).size()) == cols,
            "json matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = j.at(i).at(c).get<double>();
  }
  return M;
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& j) {
  require(j.is_array(), "json vector: expected an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

void to_json(json& j, const UncertaintySet& set) {
  j = json{{"a0", vec_to_json(set.a0)},
           {"tau", set.tau},
           {"A", mat_to_json(set.A)},
           {"norm", to_string(set.norm)}};
  if (set.V) {
    j["V"] = mat_to_json(*set.V);
    j["delta"] = *set.delta;
  }
}

void from_json(const json& j, UncertaintySet& set) {
  const Vec a0 = vec_from_json(j.at("a0"));
  const double tau = j.at("tau").get<double>();
  const Mat A = mat_from_json(j.at("A"));
  const NormKind norm =
      j.contains("norm") ? norm_kind_from_string(j.at("norm").get<std::string>())
                         : NormKind::L2;
  if (j.contains("V")) {
    set = UncertaintySet(a0, tau, A, mat_from_json(j.at("V")), j.at("delta").get<double>(),
                         norm);
  } else {
    set = UncertaintySet(a0, tau, A, norm);
  }
}

void to_json(json& j, const EllipsoidSet& set) {
  j = json{{"kind", "ellipsoid"},
           {"a0", vec_to_json(set.a0)},
           {"Sigma", mat_to_json(set.Sigma)},
           {"delta", set.delta}};
}

void from_json(const json& j, EllipsoidSet& set) {
  set.a0 = vec_from_json(j.at("a0"));
  set.Sigma = mat_from_json(j.at("Sigma"));
  set.delta = j.at("delta").get<double>();
}

namespace {

std::string row_sense_to_string(RowSense s) {
  switch (s) {
    case RowSense::le: return "<=";
    case RowSense::ge: return ">=";
    default: return "=";
  }
}

RowSense row_sense_from_string(const std::string& s) {
  if (s == "<=" || s == "le") return RowSense::le;
  if (s == ">=" || s == "ge") return RowSense::ge;
  if (s == "=" || s == "==" || s == "eq") return RowSense::eq;
  throw domain_error("unknown row sense: " + s);
}

std::string monotone_to_string(Monotone m) {
  switch (m) {
    case Monotone::increasing: return "increasing";
    case Monotone::decreasing: return "decreasing";
    default: return "unspecified";
  }
}

Monotone monotone_from_string(const std::string& s) {
  if (s == "increasing") return Monotone::increasing;
  if (s == "decreasing") return Monotone::decreasing;
  if (s == "unspecified") return Monotone::unspecified;
  throw domain_error("unknown monotonicity tag: " + s);
}

}  // namespace

void to_json(json& j, const RobustProblem& p) {
  j = json{{"sense", p.sense == ObjSense::minimize ? "min" : "max"},
           {"c", vec_to_json(p.c)},
           {"bounds", json::array()},
           {"rows", json::array()}};
  for (Eigen::Index i = 0; i < p.num_vars(); ++i)
    j["bounds"].push_back(json::array({p.lower[i], p.upper[i]}));
  for (const auto& row : p.rows) {
    json rj{{"coeffs", vec_to_json(row.coeffs)},
            {"sense", row_sense_to_string(row.sense)},
            {"rhs", row.rhs}};
    if (row.uncertainty) {
      const UncertainTerm& term = *row.uncertainty;
      if (term.omega)
        rj["uncertainty"] = *term.omega;
      else
        rj["uncertainty"] = *term.ellipsoid;
      if (term.monotone != Monotone::unspecified)
        rj["monotone"] = monotone_to_string(term.monotone);
      // The identity mapping with no certain part is the schema default: the
      // row's coeffs then restate the nominal value.  Everything else gets
      // an explicit umap.
      bool identity = term.dim() == p.num_vars() &&
                      row.coeffs.cwiseAbs().maxCoeff() == 0.0;
      for (Eigen::Index k = 0; identity && k < term.dim(); ++k)
        identity = term.vars[static_cast<size_t>(k)] == static_cast<int>(k) &&
                   term.scale[k] == 1.0;
      if (identity) {
        rj["coeffs"] = vec_to_json(term.nominal());
      } else {
        json umap{{"vars", term.vars}, {"scale", vec_to_json(term.scale)}};
        rj["umap"] = std::move(umap);
      }
    }
    j["rows"].push_back(std::move(rj));
  }
}

void from_json(const json& j, RobustProblem& p) {
  p = RobustProblem{};
  const std::string sense = j.at("sense").get<std::string>();
  require(sense == "min" || sense == "max", "RobustProblem: sense must be min or max");
  p.sense = sense == "min" ? ObjSense::minimize : ObjSense::maximize;
  p.c = vec_from_json(j.at("c"));
  const Eigen::Index n = p.c.size();
  p.lower.resize(n);
  p.upper.resize(n);
  const json& bounds = j.at("bounds");
  require(static_cast<Eigen::Index>(bounds.size()) == n,
          "RobustProblem: bounds length must match c");
  for (Eigen::Index i = 0; i < n; ++i) {
    p.lower[i] = bounds.at(i).at(0).get<double>();
    p.upper[i] = bounds.at(i).at(1).get<double>();
  }
  for (const auto& rj : j.at("rows")) {
    LinearRow row;
    row.coeffs = vec_from_json(rj.at("coeffs"));
    row.sense = row_sense_from_string(rj.at("sense").get<std::string>());
    row.rhs = rj.at("rhs").get<double>();
    if (rj.contains("uncertainty")) {
      UncertainTerm term;
      const json& uj = rj.at("uncertainty");
      if (uj.contains("kind") && uj.at("kind") == "ellipsoid") {
        term.ellipsoid = uj.get<EllipsoidSet>();
      } else {
        term.omega = uj.get<UncertaintySet>();
      }
      const Eigen::Index m = term.dim();
      if (rj.contains("umap")) {
        term.vars = rj.at("umap").at("vars").get<std::vector<int>>();
        term.scale = vec_from_json(rj.at("umap").at("scale"));
      } else {
        // Whole-coefficient-row uncertainty: coeffs must restate the nominal.
        require(m == n, "RobustProblem: set dimension must match the row without umap");
        require((row.coeffs - term.nominal()).cwiseAbs().maxCoeff() <= 1e-9,
                "RobustProblem: row coeffs must equal the nominal value of its set");
        term.vars.resize(static_cast<size_t>(m));
        for (Eigen::Index k = 0; k < m; ++k) term.vars[static_cast<size_t>(k)] = static_cast<int>(k);
        term.scale = Vec::Ones(m);
        row.coeffs.setZero();  // the uncertain term carries the whole row
      }
      if (rj.contains("monotone"))
        term.monotone = monotone_from_string(rj.at("monotone").get<std::string>());
      row.uncertainty = std::move(term);
    }
    p.rows.push_back(std::move(row));
  }
  p.validate();
}

void to_json(json& j, const SolveResult& r) {
  j = json{{"status", to_string(r.status)},
           {"x", vec_to_json(r.x)},
           {"objective", r.objective},
           {"residuals", vec_to_json(r.row_residuals)},
           {"iterations", r.iterations},
           {"wall_time_ms", r.wall_time_ms}};
  if (!r.cuts.empty()) {
    j["cuts"] = json::array();
    for (const auto& cut : r.cuts)
      j["cuts"].push_back(json{{"row", cut.row}, {"scenario", vec_to_json(cut.scenario)}});
  }
  if (!r.certificates.empty()) {
    j["certificates"] = json::array();
    for (const auto& cert : r.certificates) j["certificates"].push_back(cert);
  }
}

void to_json(json& j, const CalibrationReport& r) {
  j = json{{"a0", vec_to_json(r.a0)},
           {"A", mat_to_json(r.A)},
           {"tau_full", r.tau_full},
           {"norm", to_string(r.norm)}};
  if (r.tau_bound) j["tau_bound"] = *r.tau_bound;
  if (r.tau_value) j["tau_value"] = *r.tau_value;
  if (r.guarantee)
    j["guarantee"] = json{{"epsilon", r.guarantee->epsilon},
                          {"lambda", r.guarantee->lambda},
                          {"delta_eps", r.guarantee->delta_eps},
                          {"tau_guarantee", r.guarantee->tau}};
}

void from_json(const json& j, CalibrationReport& r) {
  r = CalibrationReport{};
  r.a0 = vec_from_json(j.at("a0"));
  r.A = mat_from_json(j.at("A"));
  r.tau_full = j.at("tau_full").get<double>();
  if (j.contains("norm")) r.norm = norm_kind_from_string(j.at("norm").get<std::string>());
  if (j.contains("tau_bound")) r.tau_bound = j.at("tau_bound").get<double>();
  if (j.contains("tau_value")) r.tau_value = j.at("tau_value").get<double>();
  if (j.contains("guarantee")) {
    GuaranteeParams g;
    g.epsilon = j.at("guarantee").at("epsilon").get<double>();
    g.lambda = j.at("guarantee").at("lambda").get<double>();
    g.delta_eps = j.at("guarantee").at("delta_eps").get<double>();
    g.tau = j.at("guarantee").at("tau_guarantee").get<double>();
    r.guarantee = g;
  }
}

void to_json(json& j, const WorstCaseCertificate& c) {
  j = json{{"a_star", vec_to_json(c.a_star)},
           {"z_star", vec_to_json(c.z_star)},
           {"y_star", vec_to_json(c.y_star)},
           {"value", c.value},
           {"budget_residual", c.budget_residual},
           {"theta", vec_to_json(c.theta)},
           {"lambda", vec_to_json(c.lambda)},
           {"active", c.active},
           {"free", c.free_indices},
           {"converged", c.converged}};
}

void to_json(json& j, const DualCertificate& c) {
  j = json{{"v", vec_to_json(c.v)},
           {"u", vec_to_json(c.u)},
           {"w", vec_to_json(c.w)},
           {"s1", vec_to_json(c.s1)}};
  if (c.s2) j["s2"] = vec_to_json(*c.s2);
}

void to_json(json& j, const PvInstance& inst) {
  j = json{{"horizon", inst.horizon},
           {"demand", vec_to_json(inst.demand)},
           {"irradiance", vec_to_json(inst.irradiance)},
           {"price", vec_to_json(inst.price)},
           {"gamma", inst.gamma},
           {"panel_area", inst.panel_area},
           {"capacity", inst.capacity},
           {"irradiance_set", inst.irradiance_set}};
}

void from_json(const json& j, PvInstance& inst) {
  inst.horizon = j.at("horizon").get<int>();
  inst.demand = vec_from_json(j.at("demand"));
  inst.irradiance = vec_from_json(j.at("irradiance"));
  inst.price = vec_from_json(j.at("price"));
  inst.gamma = j.at("gamma").get<double>();
  inst.panel_area = j.at("panel_area").get<double>();
  inst.capacity = j.at("capacity").get<double>();
  inst.irradiance_set = j.at("irradiance_set").get<UncertaintySet>();
  inst.validate();
}

void to_json(json& j, const PvPlan& plan) {
  j = json{{"charge", vec_to_json(plan.charge)},
           {"purchase", vec_to_json(plan.purchase)},
           {"pv_supply", vec_to_json(plan.pv_supply)},
           {"discharge", vec_to_json(plan.discharge)},
           {"soc", vec_to_json(plan.soc)},
           {"planned_cost", plan.planned_cost}};
}

}  // namespace possets
