#pragma once

#include <memory>
#include <string>
#include <vector>

#include "certeq/common.hpp"

namespace certeq {

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/// Dense linear program
///   min/max  c'x
///   s.t.     A_eq x  = b_eq
///            A_le x <= b_le
///            lower <= x <= upper   (entries may be +-inf)
struct LinearProgram {
    LpSense sense = LpSense::Minimize;
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> le_rows;
    std::vector<double> le_rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    LinearProgram() = default;
    explicit LinearProgram(std::size_t num_vars)
        : objective(num_vars, 0.0), lower(num_vars, -kInf),
          upper(num_vars, kInf) {}

    std::size_t num_vars() const { return objective.size(); }
    void add_eq(std::vector<double> row, double rhs);
    void add_le(std::vector<double> row, double rhs);
    void set_bounds(std::size_t j, double lo, double hi);

    /// Throws unless dimensions are consistent and coefficients finite.
    void check() const;
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    std::vector<double> x;
    double objective = 0.0;
    double max_residual = 0.0; // scaled primal feasibility residual
    int iterations = 0;

    bool optimal() const { return status == LpStatus::Optimal; }
};

/// Bounded-variable primal simplex (dense, two-phase, deterministic).
///
/// Dantzig pricing with a Bland's-rule fallback under degeneracy; ties
/// resolved by lowest index, so identical programs give identical
/// solutions. The solver object keeps its basis between calls: resolve()
/// reoptimizes after an objective change without a fresh phase 1, which
/// is the common case when one feasible region is probed under many
/// objectives.
class SimplexSolver {
  public:
    explicit SimplexSolver(LinearProgram lp);
    ~SimplexSolver();
    SimplexSolver(SimplexSolver&&) noexcept;
    SimplexSolver& operator=(SimplexSolver&&) noexcept;

    /// Cold solve (phase 1 + phase 2).
    LpSolution solve();

    /// Warm solve with a new objective over the unchanged constraints.
    /// Falls back to a cold solve if no usable basis is available.
    LpSolution resolve(const std::vector<double>& new_objective);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
LpSolution solve(const LinearProgram& lp);

/// Fixed-format textual dump (objective row, then constraint rows) for
/// debugging.
std::string dump(const LinearProgram& lp);

} // namespace certeq
