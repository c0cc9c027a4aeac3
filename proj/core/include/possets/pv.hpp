#pragma once

#include "possets/robust_solve.hpp"

namespace possets {

// Photovoltaic-battery operation planning: minimize the purchase cost of a
// fixed panel/battery configuration over an hourly horizon, with the solar
// irradiance treated as an uncertain positive parameter.

struct PvInstance {
  int horizon = 24;
  Vec demand;       // kWh per period
  Vec irradiance;   // nominal irradiance kWh/m^2, strictly positive
  Vec price;        // yen/kWh
  double gamma = 0.8;       // battery discharge efficiency
  double panel_area = 1.0;  // m^2
  double capacity = 1.0;    // battery capacity kWh
  UncertaintySet irradiance_set;  // over the full irradiance vector

  void validate() const;
};

// Decision blocks of the emitted LP, in variable order:
// charge, purchase, pv_supply, discharge, soc (each of size horizon).
struct PvPlan {
  Vec charge;     // power charged to the battery
  Vec purchase;   // power bought from the grid
  Vec pv_supply;  // PV power routed directly to demand
  Vec discharge;  // power supplied from the battery
  Vec soc;        // battery state of charge
  double planned_cost = 0.0;

  static PvPlan from_solution(const PvInstance& inst, const Vec& x);
};

/// LP with the demand rows, the battery recursion (soc_t = soc_{t-1} +
/// charge_t - discharge_t, soc_0 = 0, soc_t <= capacity), nonnegativity,
/// and one uncertain-increasing irradiance row per period:
/// charge_t + pv_supply_t <= E_t * panel_area for all E in the set.
RobustProblem build_pv_problem(const PvInstance& inst);

/// max_t (charge_t + pv_supply_t - E^realized_t z) / (E^nominal_t z) * 100.
/// Negative means the realized irradiance constraint held everywhere.
double evaluate_violation_rate(const PvPlan& plan, const Vec& e_realized,
                               const Vec& e_nominal, double panel_area);

struct EvaluationReport {
  double max_violation_rate = 0.0;  // percent
  double actual_cost = 0.0;         // yen, after the adjustment steps
  double nominal_cost = 0.0;        // the plan's own planned purchase cost
  double relative_cost_diff = 0.0;  // percent, actual vs planned
  Mat per_period;  // columns: planned PV use, realized cap, adjusted purchase
};

/// Adjusts the plan to a realized irradiance in three steps: scale
/// (charge, pv_supply) proportionally per period to meet the realized cap,
/// rescale discharge so its total matches the adjusted total charge (re-
/// clipping the state of charge into [0, capacity]), then re-buy whatever
/// demand is left uncovered.  Always feasible.
EvaluationReport evaluate_actual_cost(const PvPlan& plan, const Vec& e_realized,
                                      const PvInstance& inst);

}  // namespace possets
