#pragma once

#include "certeq/lp.hpp"
#include "certeq/utility.hpp"

namespace certeq {

/// Kantorovich distance between two normalized piecewise linear utilities
/// on the same grid, computed three independent ways. The distance is the
/// supremum of |integral of g d(u - v)| over 1-Lipschitz test functions.

/// Primal linear program over the segment integrals y_j and node values
/// z_j of the test function.
double distance_primal_lp(const PiecewiseLinearUtility& u,
                          const PiecewiseLinearUtility& v);

/// Lagrange dual over nonpositive multipliers, one group of four per
/// segment. Strong duality makes it equal to the primal value.
double distance_dual_lp(const PiecewiseLinearUtility& u,
                        const PiecewiseLinearUtility& v);

/// Closed form: both utilities are nondecreasing with matching endpoint
/// values, so the signed measure d(u - v) has zero mass and the distance
/// reduces to the exact integral of |u - v| over the span.
double distance_closed_form(const PiecewiseLinearUtility& u,
                            const PiecewiseLinearUtility& v);

} // namespace certeq
