#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "certeq/certainty.hpp"
#include "certeq/distributions.hpp"
#include "certeq/lp.hpp"
#include "certeq/utility.hpp"

namespace certeq {

/// Ambiguity set: all admissible piecewise linear utilities within
/// Kantorovich distance `radius` of the center.
struct KantorovichBall {
    PiecewiseLinearUtility center;
    double radius = 0.0;

    KantorovichBall(PiecewiseLinearUtility c, double r);
};

/// Worst-case certainty-equivalent problem over a Kantorovich ball.
/// The decision domain and every shifted atom must stay inside the
/// utility grid's span.
struct RmoceProblem {
    DiscreteDistribution dist;
    KantorovichBall ball;
    Interval x_domain;

    RmoceProblem(DiscreteDistribution d, KantorovichBall b, Interval x);
};

enum class RmoceStatus { Converged, MaxIter };

struct IterationRecord {
    double x = 0.0;
    double inner_value = 0.0;
};

struct RmoceSolution {
    double value = 0.0;
    double x_star = 0.0;
    PiecewiseLinearUtility worst_utility;
    int iterations = 0;
    std::vector<IterationRecord> trace;
    RmoceStatus status = RmoceStatus::Converged;
};

struct InnerResult {
    PiecewiseLinearUtility worst;
    double value = 0.0;
};

/// Inner minimization over the ball at a fixed allocation x, posed as a
/// single linear program over segment slopes/intercepts and the ball's
/// dual multipliers. The constraints do not depend on x, so one solver
/// instance re-optimizes cheaply as x moves.
class InnerLpSolver {
  public:
    /// `include_ball` = false drops the ball budget row, leaving the
    /// minimization over the whole admissible class (test oracle).
    explicit InnerLpSolver(const RmoceProblem& problem, bool include_ball = true);
    ~InnerLpSolver();
    InnerLpSolver(InnerLpSolver&&) noexcept;

    InnerResult value_at(double x);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot inner minimization (worst utility and value at x).
InnerResult inner_min_lp(double x, const RmoceProblem& problem);

/// Alternating solver: minimize over the ball at the current x, then
/// maximize the fixed worst utility's objective over the domain, until
/// neither step moves. Each iteration certifies an optimality gap
/// (outer value minus inner value); convergence is declared when it
/// falls below tol. Reports MaxIter with the best certified iterate
/// otherwise.
RmoceSolution solve_alternating(const RmoceProblem& problem, double x0,
                                double tol = 1e-7, int max_iter = 100);
RmoceSolution solve_alternating(const RmoceProblem& problem);

/// Direct solver: golden-section maximization of the concave map
/// x -> inner minimum, safeguarded by a 64-point scan of the domain.
RmoceSolution solve_direct(const RmoceProblem& problem, double tol = 1e-7);

/// Reported bound on the optimal-value error of the piecewise linear
/// approximation: 10 max{2, L} times the mesh size.
double error_bound(double lipschitz, const Grid& grid);

/// Utility-domain interval covering the decision domain and every
/// shifted outcome; with eps > 0 the sample range is first extended to
/// cover all but eps of the distribution's mass (empirical CDF on a
/// large reference sample).
Interval truncate_domain(const DistributionSpec& spec,
                         const std::vector<double>& samples, double eps,
                         const Interval& x_domain,
                         std::uint64_t ref_seed = 0x5eedULL);

struct RadiusPoint {
    double radius = 0.0;
    double value = 0.0;
    double x_star = 0.0;
    PiecewiseLinearUtility worst;
};

/// One solve per radius over a shared center/domain/distribution.
std::vector<RadiusPoint> radius_sweep(const DiscreteDistribution& dist,
                                      const PiecewiseLinearUtility& center,
                                      const Interval& x_domain,
                                      const std::vector<double>& radii);

enum class XPolicy { Prop32, Half, Explicit };

/// Experiment-style problem description: sampled scenario distribution,
/// exponential nominal utility (1 - exp(-alpha t))/2 projected onto a
/// uniform grid spanning the induced domain.
struct RmoceConfig {
    DistributionSpec spec = DistributionSpec::uniform(-1.0, 1.0);
    std::size_t sample_count = 100;
    std::uint64_t seed = 42;
    double alpha = 2.0;
    std::size_t breakpoints = 10;
    double lipschitz = 30.0;
    double radius = 0.05;
    XPolicy x_policy = XPolicy::Prop32;
    Interval x_explicit;
    double truncate_eps = 0.0;
};

struct BuiltProblem {
    RmoceProblem problem;
    Grid grid;
    Interval domain;
};

BuiltProblem build_problem(const RmoceConfig& config);

} // namespace certeq
