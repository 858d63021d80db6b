#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "certeq/common.hpp"

namespace certeq {

struct ScalarMaxResult {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
    bool flat = false; // a flat optimal region was detected among candidates
};

/// Maximizes a concave function on [lo, hi] by golden-section search to
/// an interval width of xtol, then polishes with the supplied candidate
/// points (typically the kinks of a piecewise linear objective, where the
/// true maximizer must sit). When several candidates tie at the top and
/// the midpoint of their span ties as well, the midpoint of the flat
/// region is reported.
inline ScalarMaxResult maximize_concave(const std::function<double(double)>& f,
                                        double lo, double hi, double xtol,
                                        const std::vector<double>& candidates = {}) {
    require(lo <= hi, "maximize_concave: empty interval");
    ScalarMaxResult res;
    int evals = 0;
    auto eval = [&](double x) {
        ++evals;
        return f(x);
    };

    double a = lo, b = hi;
    double best_x = 0.5 * (lo + hi);
    double best_v = -kInf;
    if (b - a > xtol) {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = eval(c), fd = eval(d);
        for (int it = 0; it < 400 && b - a > xtol; ++it) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval(d);
            }
        }
    }
    best_x = 0.5 * (a + b);
    best_v = eval(best_x);

    // candidate polish: endpoints plus caller-supplied kink locations
    std::vector<std::pair<double, double>> probes;
    probes.reserve(candidates.size() + 3);
    auto probe = [&](double x) {
        if (x < lo || x > hi) return;
        probes.emplace_back(x, eval(x));
    };
    probe(lo);
    probe(hi);
    for (double x : candidates) probe(x);
    probes.emplace_back(best_x, best_v);

    for (const auto& [x, v] : probes) {
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }

    // flat-region detection over the probed points
    const double flat_tol = 1e-11 * std::max(1.0, std::abs(best_v));
    double span_lo = best_x, span_hi = best_x;
    for (const auto& [x, v] : probes) {
        if (v >= best_v - flat_tol) {
            span_lo = std::min(span_lo, x);
            span_hi = std::max(span_hi, x);
        }
    }
    if (span_hi - span_lo > std::max(xtol, 1e-12) * 16.0) {
        const double mid = 0.5 * (span_lo + span_hi);
        const double vm = eval(mid);
        if (vm >= best_v - flat_tol) {
            res.flat = true;
            best_x = mid;
            best_v = std::max(best_v, vm);
        }
    }

    res.x = best_x;
    res.value = best_v;
    res.evaluations = evals;
    return res;
}

} // namespace certeq
