#pragma once

#include <string>

#include "certeq/distributions.hpp"
#include "certeq/rmoce.hpp"
#include "certeq/statrobust.hpp"
#include "certeq/utility.hpp"

namespace certeq {

/// JSON forms:
///   distribution: {"kind":"pareto","scale":1.0,"shape":1.5}
///                 {"kind":"uniform","lo":-1,"hi":1} ...
///   utility:      {"breakpoints":[...],"values":[...],"lipschitz":L}
///                 {"name":"exponential","alpha":a,"scale":s,"shift":c}
///                 {"name":"two_piece_linear","gamma1":g1,"gamma2":g2}
/// Explicit distributions are also accepted as CSV, one "atom,prob" line
/// per row.

DistributionSpec distribution_from_json(const std::string& text);
std::string distribution_to_json(const DistributionSpec& spec);
DistributionSpec distribution_from_csv(const std::string& text);

PiecewiseLinearUtility plu_from_json(const std::string& text);
std::string plu_to_json(const PiecewiseLinearUtility& u);

ParametricUtility parametric_from_json(const std::string& text);
std::string parametric_to_json(const ParametricUtility& u);

RmoceConfig rmoce_config_from_json(const std::string& text);
std::string rmoce_config_to_json(const RmoceConfig& config);

/// Solution document: value, allocation, worst-case utility, iteration
/// count/status plus the derived domain metadata and the reported
/// approximation bound.
std::string rmoce_solution_to_json(const RmoceSolution& sol,
                                   const BuiltProblem& built,
                                   double error_bound_value,
                                   double runtime_seconds);

/// Plot-ready curve: header "t,u" then one breakpoint per line.
std::string plu_to_csv(const PiecewiseLinearUtility& u);

std::string robustness_report_to_json(const RobustnessReport& rep,
                                      std::uint64_t seed,
                                      double runtime_seconds);

/// Raw replication values: header "replication,clean,contaminated".
std::string robustness_values_to_csv(const RobustnessReport& rep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace certeq
