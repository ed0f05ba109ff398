#pragma once

#include <string>

#include <json.hpp>

#include "tailrent/baselines.hpp"
#include "tailrent/core.hpp"
#include "tailrent/oracle.hpp"
#include "tailrent/solver.hpp"
#include "tailrent/structure.hpp"

namespace tailrent {

/// Shortest-round-trip JSON via nlohmann defaults; CSV cells at 17 significant
/// digits so both encodings carry identical values.
std::string format_g17(double v);

nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& j);

nlohmann::json distribution_to_json(const PurchaseDistribution& f);
PurchaseDistribution distribution_from_json(const nlohmann::json& j);
std::string distribution_to_csv(const PurchaseDistribution& f);  // header "t,f"

nlohmann::json solve_report_to_json(const SolveReport& report);
SolveReport solve_report_from_json(const nlohmann::json& j);
std::string solve_report_to_csv(const SolveReport& report);  // header "t,f,alpha"

nlohmann::json structure_report_to_json(const StructureReport& report);
// header "j,l_j,r_j,mass,fitted_base,expected_base,zero_start,zero_end"
std::string structure_report_to_csv(const StructureReport& report);

nlohmann::json simulation_to_json(const SimulationResult& result);
// header "x,mean_cr,se_mean" plus ",exceed_g{gamma},se_exceed" per threshold
std::string simulation_to_csv(const SimulationResult& result);

/// Oracle fixtures share the SolveReport schema plus a "method" tag.
nlohmann::json brute_force_to_json(const BruteForceResult& result, double grid_step);
nlohmann::json lp_fixture_to_json(const LpInstance& lp, const LpSolution& sol);

}  // namespace tailrent
