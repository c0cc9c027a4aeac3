#pragma once

#include <nlohmann/json.hpp>

#include "possets/calibration.hpp"
#include "possets/oracle.hpp"
#include "possets/pv.hpp"
#include "possets/robust_solve.hpp"

namespace possets {

using json = nlohmann::json;

// Matrices serialize row-major as arrays of row arrays.
json mat_to_json(const Mat& M);
Mat mat_from_json(const json& j);
json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

/// {a0: [..], tau: x, A: [[..]], norm: "l2", V?: [[..]], delta?: x}
void to_json(json& j, const UncertaintySet& set);
void from_json(const json& j, UncertaintySet& set);

/// {kind: "ellipsoid", a0: [..], Sigma: [[..]], delta: x}
void to_json(json& j, const EllipsoidSet& set);
void from_json(const json& j, EllipsoidSet& set);

/// {sense, c, bounds: [[lo,hi],..], rows: [{coeffs, sense, rhs,
///  uncertainty?, monotone?, umap?: {vars, scale}}]}
void to_json(json& j, const RobustProblem& p);
void from_json(const json& j, RobustProblem& p);

/// {status, x, objective, residuals, iterations, wall_time_ms, ...}
void to_json(json& j, const SolveResult& r);

void to_json(json& j, const CalibrationReport& r);
void from_json(const json& j, CalibrationReport& r);

void to_json(json& j, const WorstCaseCertificate& c);

void to_json(json& j, const DualCertificate& c);

void to_json(json& j, const PvInstance& inst);
void from_json(const json& j, PvInstance& inst);

void to_json(json& j, const PvPlan& plan);

}  // namespace possets
