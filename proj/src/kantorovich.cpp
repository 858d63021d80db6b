#include "certeq/kantorovich.hpp"

#include <cmath>

namespace certeq {

namespace {

void require_shared_grid(const PiecewiseLinearUtility& u,
                         const PiecewiseLinearUtility& v) {
    require(u.grid() == v.grid(), "kantorovich: utilities must share a grid");
}

struct NodeCurves {
    std::vector<double> t;  // node locations
    std::vector<double> fu; // u values at the nodes
    std::vector<double> fv; // v values at the nodes
};

// Nodes of the shared grid plus the interior zero crossings of u - v.
// The segment constraints of the distance program are exact only when
// the optimal test function changes slope at segment boundaries, and it
// kinks exactly where u - v changes sign.
NodeCurves refined_nodes(const PiecewiseLinearUtility& u,
                         const PiecewiseLinearUtility& v) {
    const auto& t = u.grid().breakpoints();
    NodeCurves out;
    out.t.reserve(2 * t.size());
    out.fu.reserve(2 * t.size());
    out.fv.reserve(2 * t.size());
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        out.t.push_back(t[j]);
        out.fu.push_back(u.values()[j]);
        out.fv.push_back(v.values()[j]);
        const double d0 = u.values()[j] - v.values()[j];
        const double d1 = u.values()[j + 1] - v.values()[j + 1];
        if (d0 * d1 < 0.0) {
            const double dt = t[j + 1] - t[j];
            const double tau = t[j] + dt * d0 / (d0 - d1);
            if (tau > t[j] + 1e-13 * dt && tau < t[j + 1] - 1e-13 * dt) {
                const double w = (tau - t[j]) / dt;
                out.t.push_back(tau);
                out.fu.push_back(u.values()[j] + w * (u.values()[j + 1] - u.values()[j]));
                out.fv.push_back(v.values()[j] + w * (v.values()[j + 1] - v.values()[j]));
            }
        }
    }
    out.t.push_back(t.back());
    out.fu.push_back(u.values().back());
    out.fv.push_back(v.values().back());
    return out;
}

double slope_diff(const NodeCurves& nc, std::size_t j) {
    const double dt = nc.t[j + 1] - nc.t[j];
    return ((nc.fu[j + 1] - nc.fu[j]) - (nc.fv[j + 1] - nc.fv[j])) / dt;
}

} // namespace

double distance_primal_lp(const PiecewiseLinearUtility& u,
                          const PiecewiseLinearUtility& v) {
    require_shared_grid(u, v);
    const NodeCurves nc = refined_nodes(u, v);
    const std::size_t n = nc.t.size();
    const std::size_t segs = n - 1;

    // variables: y_1..y_{segs} then z_1..z_n, all free
    LinearProgram lp(segs + n);
    lp.sense = LpSense::Maximize;
    for (std::size_t j = 0; j < segs; ++j) lp.objective[j] = slope_diff(nc, j);

    for (std::size_t j = 0; j < segs; ++j) {
        const double dt = nc.t[j + 1] - nc.t[j];
        const double half = 0.5 * dt * dt;
        const std::size_t zl = segs + j;     // z at the left node
        const std::size_t zr = segs + j + 1; // z at the right node
        std::vector<double> row(lp.num_vars(), 0.0);

        row[j] = 1.0;
        row[zl] = -dt;
        lp.add_le(row, half); //  y - z_l dt <= dt^2/2

        row[j] = -1.0;
        row[zl] = dt;
        lp.add_le(row, half); // -y + z_l dt <= dt^2/2

        row[zl] = 0.0;
        row[j] = 1.0;
        row[zr] = -dt;
        lp.add_le(row, half); //  y - z_r dt <= dt^2/2

        row[j] = -1.0;
        row[zr] = dt;
        lp.add_le(row, half); // -y + z_r dt <= dt^2/2
    }

    auto sol = solve(lp);
    if (!sol.optimal())
        throw std::runtime_error("distance_primal_lp: solver failed");
    return sol.objective;
}

double distance_dual_lp(const PiecewiseLinearUtility& u,
                        const PiecewiseLinearUtility& v) {
    require_shared_grid(u, v);
    const NodeCurves nc = refined_nodes(u, v);
    const std::size_t segs = nc.t.size() - 1;

    // variables: lambda^i_j for i = 1..4 per segment, all <= 0
    auto idx = [&](std::size_t j, int i) { return 4 * j + std::size_t(i - 1); };
    LinearProgram lp(4 * segs);
    for (std::size_t k = 0; k < lp.num_vars(); ++k) lp.set_bounds(k, -kInf, 0.0);

    std::vector<double> dt(segs);
    for (std::size_t j = 0; j < segs; ++j) dt[j] = nc.t[j + 1] - nc.t[j];

    for (std::size_t j = 0; j < segs; ++j) {
        const double half = 0.5 * dt[j] * dt[j];
        for (int i = 1; i <= 4; ++i) lp.objective[idx(j, i)] = -half;
    }

    // slope matching: lambda^1 - lambda^2 + lambda^3 - lambda^4 offsets
    // the slope difference on each segment
    for (std::size_t j = 0; j < segs; ++j) {
        std::vector<double> row(lp.num_vars(), 0.0);
        row[idx(j, 1)] = 1.0;
        row[idx(j, 2)] = -1.0;
        row[idx(j, 3)] = 1.0;
        row[idx(j, 4)] = -1.0;
        lp.add_eq(row, -slope_diff(nc, j));
    }
    // interior node balance between adjacent segments
    for (std::size_t j = 0; j + 1 < segs; ++j) {
        std::vector<double> row(lp.num_vars(), 0.0);
        row[idx(j + 1, 2)] = dt[j + 1];
        row[idx(j + 1, 1)] = -dt[j + 1];
        row[idx(j, 4)] = dt[j];
        row[idx(j, 3)] = -dt[j];
        lp.add_eq(row, 0.0);
    }
    // endpoint conditions
    {
        std::vector<double> row(lp.num_vars(), 0.0);
        row[idx(0, 2)] = dt[0];
        row[idx(0, 1)] = -dt[0];
        lp.add_eq(row, 0.0);
    }
    {
        std::vector<double> row(lp.num_vars(), 0.0);
        row[idx(segs - 1, 4)] = dt[segs - 1];
        row[idx(segs - 1, 3)] = -dt[segs - 1];
        lp.add_eq(row, 0.0);
    }

    auto sol = solve(lp);
    if (!sol.optimal())
        throw std::runtime_error("distance_dual_lp: solver failed");
    return sol.objective;
}

double distance_closed_form(const PiecewiseLinearUtility& u,
                            const PiecewiseLinearUtility& v) {
    require_shared_grid(u, v);
    const auto& t = u.grid().breakpoints();
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        const double d0 = u.values()[j] - v.values()[j];
        const double d1 = u.values()[j + 1] - v.values()[j + 1];
        const double dt = t[j + 1] - t[j];
        if (d0 * d1 >= 0.0) {
            total += 0.5 * std::abs(d0 + d1) * dt;
        } else {
            // the difference crosses zero inside the segment
            const double tau = dt * d0 / (d0 - d1);
            total += 0.5 * (std::abs(d0) * tau + std::abs(d1) * (dt - tau));
        }
    }
    return total;
}

} // namespace certeq
