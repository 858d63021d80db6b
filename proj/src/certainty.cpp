#include "certeq/certainty.hpp"

#include <algorithm>
#include <cmath>

#include "certeq/scalar_opt.hpp"

namespace certeq {

namespace {

Interval prop_plu_bracket(const DiscreteDistribution& d) {
    const double lo = d.min(), hi = d.max();
    if (lo >= 0.0) return {0.0, hi};
    if (hi <= 0.0) return {lo, 0.0};
    return {lo, hi};
}

/// x values for which both u(x) and every u(xi_k - x) stay inside the
/// utility's span.
Interval plu_feasible_x(const DiscreteDistribution& d,
                        const PiecewiseLinearUtility& u) {
    const double a = u.grid().a(), b = u.grid().b();
    const double lo = std::max(a, d.max() - b);
    const double hi = std::min(b, d.min() - a);
    require(lo <= hi + 1e-12,
            "certainty: utility domain does not cover the required arguments");
    return {std::min(lo, hi), hi};
}

Interval clip(const Interval& x, const Interval& into) {
    const double lo = std::clamp(x.lo, into.lo, into.hi);
    const double hi = std::clamp(x.hi, into.lo, into.hi);
    require(lo <= hi, "certainty: empty bracket after domain clipping");
    return {lo, hi};
}

std::vector<double> moce_kinks(const DiscreteDistribution& d,
                               const PiecewiseLinearUtility& u) {
    std::vector<double> c;
    c.reserve(u.grid().size() * (d.size() + 1));
    for (double t : u.grid().breakpoints()) {
        c.push_back(t);
        for (double xi : d.atoms()) c.push_back(xi - t);
    }
    return c;
}

std::vector<double> oce_kinks(const DiscreteDistribution& d,
                              const PiecewiseLinearUtility& u) {
    std::vector<double> c;
    c.reserve(u.grid().size() * d.size());
    for (double t : u.grid().breakpoints())
        for (double xi : d.atoms()) c.push_back(xi - t);
    return c;
}

constexpr double kXtol = 1e-9;

CeResult run_max(const std::function<double(double)>& f, Interval bracket,
                 const std::vector<double>& kinks) {
    auto opt = maximize_concave(f, bracket.lo, bracket.hi, kXtol, kinks);
    CeResult res;
    res.value = opt.value;
    res.x_star = opt.x;
    res.bracket = bracket;
    res.evaluations = opt.evaluations;
    res.status = opt.flat ? CeStatus::FlatOptimum : CeStatus::Ok;
    return res;
}

/// Flags a maximum pinned to the bracket edge with the objective still
/// rising toward it.
void flag_boundary(CeResult& res, const std::function<double(double)>& f) {
    const Interval& br = res.bracket;
    const double w = std::max(br.width(), 1.0);
    const double h = 1e-7 * w;
    if (br.width() <= 0.0) return;
    if (res.x_star <= br.lo + 16.0 * kXtol) {
        if (f(br.lo) > f(std::min(br.lo + h, br.hi)) + 1e-14)
            res.status = CeStatus::NoInteriorOptimum;
    } else if (res.x_star >= br.hi - 16.0 * kXtol) {
        if (f(br.hi) > f(std::max(br.hi - h, br.lo)) + 1e-14)
            res.status = CeStatus::NoInteriorOptimum;
    }
}

} // namespace

Interval moce_bracket(const DiscreteDistribution& d, const ParametricUtility& u) {
    if (u.strictly_concave()) return {d.min() / 2.0, d.max() / 2.0};
    return prop_plu_bracket(d);
}

Interval moce_bracket(const DiscreteDistribution& d,
                      const PiecewiseLinearUtility& u) {
    return clip(prop_plu_bracket(d), plu_feasible_x(d, u));
}

CeResult moce(const DiscreteDistribution& d, const ParametricUtility& u,
              std::optional<Interval> bracket) {
    const Interval br = bracket ? *bracket : moce_bracket(d, u);
    auto f = [&](double x) {
        return u.evaluate(x) + d.expect([&](double xi) { return u.evaluate(xi - x); });
    };
    std::vector<double> kinks;
    if (u.kind == UtilityKind::TwoPieceLinear) {
        kinks.push_back(0.0);
        for (double xi : d.atoms()) kinks.push_back(xi);
    }
    return run_max(f, br, kinks);
}

CeResult moce(const DiscreteDistribution& d, const PiecewiseLinearUtility& u,
              std::optional<Interval> bracket) {
    const Interval br = bracket ? clip(*bracket, plu_feasible_x(d, u))
                                : moce_bracket(d, u);
    auto f = [&](double x) {
        return u.evaluate(x) + d.expect([&](double xi) { return u.evaluate(xi - x); });
    };
    return run_max(f, br, moce_kinks(d, u));
}

CeResult oce(const DiscreteDistribution& d, const ParametricUtility& u,
             std::optional<Interval> bracket) {
    auto f = [&](double x) {
        return x + d.expect([&](double xi) { return u.evaluate(xi - x); });
    };
    Interval br;
    bool runaway = false;
    if (bracket) {
        br = *bracket;
    } else {
        br = {d.min(), d.max()};
        if (br.width() <= 0.0) br = {d.min() - 1.0, d.max() + 1.0};
        // widen until the maximum is interior or hopelessly far out
        const double cap = 1e6 * std::max(br.width(), 1.0);
        double w = std::max(br.width(), 1.0);
        while (f(br.lo) >= f(br.lo + 1e-6 * w)) {
            if (br.lo < -cap) {
                runaway = true;
                break;
            }
            br.lo -= w;
            w *= 2.0;
        }
        w = std::max(br.width(), 1.0);
        while (f(br.hi) >= f(br.hi - 1e-6 * w)) {
            if (br.hi > cap) {
                runaway = true;
                break;
            }
            br.hi += w;
            w *= 2.0;
        }
    }
    std::vector<double> kinks;
    if (u.kind == UtilityKind::TwoPieceLinear)
        for (double xi : d.atoms()) kinks.push_back(xi);
    auto res = run_max(f, br, kinks);
    if (runaway)
        res.status = CeStatus::NoInteriorOptimum;
    else
        flag_boundary(res, f);
    return res;
}

CeResult oce(const DiscreteDistribution& d, const PiecewiseLinearUtility& u,
             std::optional<Interval> bracket) {
    const Interval feas = plu_feasible_x(d, u);
    const Interval br = bracket ? clip(*bracket, feas) : feas;
    auto f = [&](double x) {
        return x + d.expect([&](double xi) { return u.evaluate(xi - x); });
    };
    auto res = run_max(f, br, oce_kinks(d, u));
    flag_boundary(res, f);
    return res;
}

CeResult moce_exponential_closed_form(const DiscreteDistribution& d,
                                      double alpha, double scale) {
    require(alpha > 0.0, "closed form: alpha must be positive");
    require(scale > 0.0, "closed form: scale must be positive");
    const double m = d.expect([&](double xi) { return std::exp(-alpha * xi); });
    CeResult res;
    res.x_star = -std::log(m) / (2.0 * alpha);
    res.value = 2.0 * scale * (1.0 - std::sqrt(m));
    res.bracket = {d.min() / 2.0, d.max() / 2.0};
    return res;
}

double cvar(const DiscreteDistribution& d, double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "cvar: alpha must be in (0,1)");
    // losses eta = -xi; the minimizer of x + E[(eta - x)_+]/alpha is
    // attained at an atom of eta
    std::vector<double> eta(d.atoms().size());
    for (std::size_t i = 0; i < eta.size(); ++i)
        eta[i] = -d.atoms()[d.atoms().size() - 1 - i];
    std::vector<double> prob(eta.size());
    for (std::size_t i = 0; i < prob.size(); ++i)
        prob[i] = d.probs()[d.probs().size() - 1 - i];

    double best = kInf;
    for (double x : eta) {
        double tail = 0.0;
        for (std::size_t i = 0; i < eta.size(); ++i)
            tail += prob[i] * std::max(eta[i] - x, 0.0);
        best = std::min(best, x + tail / alpha);
    }
    return best;
}

double cvar_via_oce(const DiscreteDistribution& d, double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "cvar_via_oce: alpha must be in (0,1)");
    auto u = ParametricUtility::two_piece_linear(0.0, 1.0 / alpha);
    return -oce(d, u).value;
}

RecoveryTrace recover_utility(const ParametricUtility& u, double z,
                              const std::vector<double>& p_levels) {
    require(z > 0.0, "recover_utility: z must be positive");
    require(!p_levels.empty(), "recover_utility: no levels");
    RecoveryTrace trace;
    for (double p : p_levels) {
        require(p > 0.0 && p < 1.0, "recover_utility: p outside (0,1)");
        DiscreteDistribution lottery({0.0, z}, {1.0 - p, p});
        auto res = moce(lottery, u, Interval{0.0, z / 2.0});
        trace.levels.emplace_back(p, res.value / p);
    }
    trace.recovered = trace.levels.back().second;
    return trace;
}

} // namespace certeq
