#include "possets/pv.hpp"

#include <cmath>

namespace possets {

namespace {

// Variable layout helpers.
inline int idx_charge(int T, int t) { (void)T; return t; }
inline int idx_purchase(int T, int t) { return T + t; }
inline int idx_pv(int T, int t) { return 2 * T + t; }
inline int idx_discharge(int T, int t) { return 3 * T + t; }
inline int idx_soc(int T, int t) { return 4 * T + t; }

}  // namespace

void PvInstance::validate() const {
  require(horizon > 0, "PvInstance: empty horizon");
  require(demand.size() == horizon && irradiance.size() == horizon && price.size() == horizon,
          "PvInstance: series length mismatch");
  require((demand.array() >= 0.0).all(), "PvInstance: demand must be nonnegative");
  require((irradiance.array() > 0.0).all(),
          "PvInstance: nominal irradiance must be strictly positive");
  require((price.array() >= 0.0).all(), "PvInstance: prices must be nonnegative");
  require(gamma > 0.0 && gamma <= 1.0, "PvInstance: gamma must lie in (0,1]");
  require(panel_area > 0.0 && capacity > 0.0, "PvInstance: panel area and capacity > 0");
  require(irradiance_set.dim() == horizon, "PvInstance: set dimension must equal horizon");
}

PvPlan PvPlan::from_solution(const PvInstance& inst, const Vec& x) {
  const int T = inst.horizon;
  PvPlan plan;
  plan.charge = x.segment(idx_charge(T, 0), T);
  plan.purchase = x.segment(idx_purchase(T, 0), T);
  plan.pv_supply = x.segment(idx_pv(T, 0), T);
  plan.discharge = x.segment(idx_discharge(T, 0), T);
  plan.soc = x.segment(idx_soc(T, 0), T);
  plan.planned_cost = inst.price.dot(plan.purchase);
  return plan;
}

RobustProblem build_pv_problem(const PvInstance& inst) {
  inst.validate();
  const int T = inst.horizon;
  const Eigen::Index n = 5 * static_cast<Eigen::Index>(T);

  RobustProblem p;
  p.sense = ObjSense::minimize;
  p.c = Vec::Zero(n);
  for (int t = 0; t < T; ++t) p.c[idx_purchase(T, t)] = inst.price[t];
  p.lower = Vec::Zero(n);
  p.upper = Vec::Constant(n, kInfBound);
  for (int t = 0; t < T; ++t) p.upper[idx_soc(T, t)] = inst.capacity;

  // Demand rows: pv_supply + gamma discharge + purchase >= demand.
  for (int t = 0; t < T; ++t) {
    LinearRow row;
    row.coeffs = Vec::Zero(n);
    row.coeffs[idx_pv(T, t)] = 1.0;
    row.coeffs[idx_discharge(T, t)] = inst.gamma;
    row.coeffs[idx_purchase(T, t)] = 1.0;
    row.sense = RowSense::ge;
    row.rhs = inst.demand[t];
    p.rows.push_back(std::move(row));
  }

  // Battery recursion soc_t = soc_{t-1} + charge_t - discharge_t, soc_0 = 0.
  for (int t = 0; t < T; ++t) {
    LinearRow row;
    row.coeffs = Vec::Zero(n);
    row.coeffs[idx_soc(T, t)] = 1.0;
    if (t > 0) row.coeffs[idx_soc(T, t - 1)] = -1.0;
    row.coeffs[idx_charge(T, t)] = -1.0;
    row.coeffs[idx_discharge(T, t)] = 1.0;
    row.sense = RowSense::eq;
    row.rhs = 0.0;
    p.rows.push_back(std::move(row));
  }

  // Irradiance rows: charge_t + pv_supply_t - panel_area * E_t <= 0 for all
  // E in the set; increasing in the uncertain parameter.
  for (int t = 0; t < T; ++t) {
    LinearRow row;
    row.coeffs = Vec::Zero(n);
    row.coeffs[idx_charge(T, t)] = 1.0;
    row.coeffs[idx_pv(T, t)] = 1.0;
    row.sense = RowSense::le;
    row.rhs = 0.0;
    UncertainTerm term;
    term.omega = inst.irradiance_set;
    term.vars.assign(static_cast<size_t>(T), -1);
    term.scale = Vec::Zero(T);
    term.scale[t] = -inst.panel_area;
    term.monotone = Monotone::increasing;
    row.uncertainty = std::move(term);
    p.rows.push_back(std::move(row));
  }
  return p;
}

double evaluate_violation_rate(const PvPlan& plan, const Vec& e_realized,
                               const Vec& e_nominal, double panel_area) {
  require(e_realized.size() == e_nominal.size() && e_realized.size() == plan.charge.size(),
          "evaluate_violation_rate: horizon mismatch");
  require((e_nominal.array() > 0.0).all(),
          "evaluate_violation_rate: zero nominal irradiance");
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < e_nominal.size(); ++t) {
    const double used = plan.charge[t] + plan.pv_supply[t];
    worst = std::max(worst,
                     (used - e_realized[t] * panel_area) / (e_nominal[t] * panel_area) * 100.0);
  }
  return worst;
}

EvaluationReport evaluate_actual_cost(const PvPlan& plan, const Vec& e_realized,
                                      const PvInstance& inst) {
  const int T = inst.horizon;
  require(e_realized.size() == T, "evaluate_actual_cost: horizon mismatch");

  EvaluationReport rep;
  rep.max_violation_rate =
      evaluate_violation_rate(plan, e_realized, inst.irradiance, inst.panel_area);
  rep.nominal_cost = plan.planned_cost;

  // Step 1: per-period proportional rescale of (charge, pv_supply) onto the
  // realized cap, with equality where the cap was violated.
  Vec charge = plan.charge;
  Vec pv = plan.pv_supply;
  for (int t = 0; t < T; ++t) {
    const double cap = std::max(0.0, e_realized[t] * inst.panel_area);
    const double tot = charge[t] + pv[t];
    if (tot > cap) {
      const double s = tot > 0.0 ? cap / tot : 0.0;
      charge[t] *= s;
      pv[t] *= s;
    }
  }

  // Step 2: uniform discharge rescale so total discharge equals total
  // adjusted charge; then re-clip the state of charge into [0, capacity]
  // (the rescale alone can overdraw or overfill mid-horizon).
  Vec discharge = plan.discharge;
  const double total_dis = discharge.sum();
  if (total_dis > 0.0)
    discharge *= charge.sum() / total_dis;
  else
    discharge.setZero();
  double soc = 0.0;
  for (int t = 0; t < T; ++t) {
    soc += charge[t] - discharge[t];
    if (soc > inst.capacity) {
      charge[t] -= soc - inst.capacity;
      soc = inst.capacity;
    }
    if (soc < 0.0) {
      discharge[t] += soc;  // cannot discharge what is not stored
      soc = 0.0;
    }
  }

  // Step 3: purchase whatever demand is left uncovered.
  Vec purchase(T);
  for (int t = 0; t < T; ++t)
    purchase[t] = std::max(0.0, inst.demand[t] - pv[t] - inst.gamma * discharge[t]);
  rep.actual_cost = inst.price.dot(purchase);
  rep.relative_cost_diff = rep.nominal_cost != 0.0
                               ? (rep.actual_cost - rep.nominal_cost) / rep.nominal_cost * 100.0
                               : 0.0;

  rep.per_period.resize(T, 3);
  for (int t = 0; t < T; ++t) {
    rep.per_period(t, 0) = plan.charge[t] + plan.pv_supply[t];
    rep.per_period(t, 1) = e_realized[t] * inst.panel_area;
    rep.per_period(t, 2) = purchase[t];
  }
  return rep;
}

}  // namespace possets
