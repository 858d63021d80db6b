#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "certeq/certainty.hpp"
#include "certeq/distributions.hpp"
#include "certeq/rmoce.hpp"

namespace certeq {

/// Command-line front end. Subcommands: moce, oce, cvar, kdist, rmoce,
/// sweep, robustness, reproduce-table1. Exit codes: 0 ok, 1 config
/// error, 2 solver failure.
int run_cli(const std::vector<std::string>& args);

/// "kind:params" shorthand ("uniform:-1:1", "dirac:2", ...), a .json
/// file, or "csv:path" for explicit atom,prob rows.
DistributionSpec parse_dist_arg(const std::string& arg);

/// "1..10" integer range, "a,b,c" list (equal weights), or "csv:path".
DiscreteDistribution parse_atoms_arg(const std::string& arg);

/// "exp:alpha[:scale[:shift]]" or "twopiece:g1:g2".
ParametricUtility parse_utility_arg(const std::string& arg);

/// One row of the certainty-equivalent comparison table.
struct Table1Row {
    std::string label;
    std::size_t k = 0;
    double moce_value = 0.0;
    double oce_value = 0.0;
    double x_star = 0.0;   // modified-objective maximizer
    double eta_star = 0.0; // plain-objective maximizer
    double cpu_seconds = 0.0;
    double xi_min = 0.0;
    double xi_max = 0.0;
};

/// Four distributions x K in {10, 100, 1000} under the nominal utility
/// (1 - exp(-2t))/2; deterministic in the seed.
std::vector<Table1Row> table1_rows(std::uint64_t seed);

/// CSV with the table columns plus the closed-form consistency columns
/// M_check = 1 - exp(-2 x*) and S_check = 2 x*.
std::string table1_csv(const std::vector<Table1Row>& rows);

} // namespace certeq
