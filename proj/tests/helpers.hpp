#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "certeq/distributions.hpp"
#include "certeq/utility.hpp"

namespace certeq::testing {

/// Random member of the normalized nondecreasing concave Lipschitz class
/// on the given grid; the modulus is the (tightest) first slope.
inline PiecewiseLinearUtility random_plu(const Grid& grid, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    const std::size_t segs = grid.num_segments();
    std::vector<double> slopes(segs);
    for (auto& s : slopes) s = unif(gen);
    std::sort(slopes.begin(), slopes.end(), std::greater<double>());

    const auto& t = grid.breakpoints();
    std::vector<double> values(grid.size());
    values[0] = 0.0;
    for (std::size_t j = 0; j < segs; ++j)
        values[j + 1] = values[j] + slopes[j] * (t[j + 1] - t[j]);
    const double total = values.back();
    for (auto& v : values) v /= total;
    values.back() = 1.0;
    const double lip = (values[1] - values[0]) / (t[1] - t[0]);
    return PiecewiseLinearUtility(grid, std::move(values), lip * (1.0 + 1e-12));
}

/// Random discrete distribution with moderate support.
inline DiscreteDistribution random_distribution(std::mt19937_64& gen,
                                                std::size_t max_atoms = 20,
                                                double lo = -2.0, double hi = 4.0) {
    std::uniform_int_distribution<std::size_t> nk(2, max_atoms);
    std::uniform_real_distribution<double> at(lo, hi);
    std::uniform_real_distribution<double> pr(0.1, 1.0);
    const std::size_t k = nk(gen);
    std::vector<double> atoms(k), probs(k);
    for (auto& a : atoms) a = at(gen);
    double total = 0.0;
    for (auto& p : probs) total += (p = pr(gen));
    for (auto& p : probs) p /= total;
    return DiscreteDistribution(std::move(atoms), std::move(probs));
}

/// Convex mixture of two utilities on a shared grid.
inline PiecewiseLinearUtility mix_plu(const PiecewiseLinearUtility& u,
                                      const PiecewiseLinearUtility& v,
                                      double lambda) {
    std::vector<double> values(u.values().size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = lambda * u.values()[i] + (1.0 - lambda) * v.values()[i];
    values.front() = 0.0;
    values.back() = 1.0;
    return PiecewiseLinearUtility(u.grid(), std::move(values),
                                  std::max(u.lipschitz(), v.lipschitz()));
}

} // namespace certeq::testing
