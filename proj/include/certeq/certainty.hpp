#pragma once

#include <optional>
#include <vector>

#include "certeq/distributions.hpp"
#include "certeq/utility.hpp"

namespace certeq {

enum class CeStatus { Ok, FlatOptimum, NoInteriorOptimum };

/// Result of a certainty-equivalent maximization.
struct CeResult {
    double value = 0.0;
    double x_star = 0.0;
    Interval bracket;
    int evaluations = 0;
    CeStatus status = CeStatus::Ok;
};

/// Search interval known to contain the maximizer:
/// [xi_min/2, xi_max/2] for a strictly concave utility; for piecewise
/// linear utilities the interval depends on the sign of the support
/// ([xi_min, xi_max] when it straddles zero, [0, xi_max] when
/// nonnegative, [xi_min, 0] when nonpositive).
Interval moce_bracket(const DiscreteDistribution& d, const ParametricUtility& u);
Interval moce_bracket(const DiscreteDistribution& d,
                      const PiecewiseLinearUtility& u);

/// Modified certainty equivalent: sup_x u(x) + E[u(xi - x)].
///
/// The objective is concave; golden-section search with a kink polish for
/// piecewise linear utilities resolves the maximizer to 1e-9.
CeResult moce(const DiscreteDistribution& d, const ParametricUtility& u,
              std::optional<Interval> bracket = std::nullopt);
CeResult moce(const DiscreteDistribution& d, const PiecewiseLinearUtility& u,
              std::optional<Interval> bracket = std::nullopt);

/// Plain certainty equivalent: sup_x x + E[u(xi - x)]. Reports
/// NoInteriorOptimum when the maximum keeps growing toward the search
/// boundary (slopes never cross one).
CeResult oce(const DiscreteDistribution& d, const ParametricUtility& u,
             std::optional<Interval> bracket = std::nullopt);
CeResult oce(const DiscreteDistribution& d, const PiecewiseLinearUtility& u,
             std::optional<Interval> bracket = std::nullopt);

/// Closed form for u(t) = scale * (1 - exp(-alpha t)):
///   x* = -ln(E[exp(-alpha xi)]) / (2 alpha),
///   value = 2 scale (1 - sqrt(E[exp(-alpha xi)])).
CeResult moce_exponential_closed_form(const DiscreteDistribution& d,
                                      double alpha, double scale);

/// CVaR of the loss -xi at level alpha via the sort-based minimization
/// over atom candidates.
double cvar(const DiscreteDistribution& d, double alpha);

/// The same value obtained through the certainty-equivalent bridge with
/// u(t) = -(1/alpha) max(-t, 0); equals cvar() up to solver tolerance.
double cvar_via_oce(const DiscreteDistribution& d, double alpha);

/// Utility recovery from the certainty equivalent of the lottery paying
/// z with probability p: the ratio M[z,p]/p converges to u(z) as p
/// shrinks. Returns the trace over the given levels, most coarse first.
struct RecoveryTrace {
    std::vector<std::pair<double, double>> levels; // (p, M[z,p]/p)
    double recovered = 0.0;                        // ratio at the smallest p
};
RecoveryTrace recover_utility(const ParametricUtility& u, double z,
                              const std::vector<double>& p_levels);

} // namespace certeq
