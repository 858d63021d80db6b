#include "certeq/rmoce.hpp"

#include <algorithm>
#include <cmath>

#include "certeq/kantorovich.hpp"
#include "certeq/scalar_opt.hpp"

namespace certeq {

KantorovichBall::KantorovichBall(PiecewiseLinearUtility c, double r)
    : center(std::move(c)), radius(r) {
    require(radius >= 0.0, "KantorovichBall: radius must be nonnegative");
    require(center.validate().ok(), "KantorovichBall: center is not admissible");
}

RmoceProblem::RmoceProblem(DiscreteDistribution d, KantorovichBall b, Interval x)
    : dist(std::move(d)), ball(std::move(b)), x_domain(x) {
    const Grid& grid = ball.center.grid();
    const double tol = 1e-9 * std::max(1.0, grid.b() - grid.a());
    require(x_domain.lo >= grid.a() - tol && x_domain.hi <= grid.b() + tol,
            "RmoceProblem: decision domain outside the utility span");
    const double lo = dist.min() - x_domain.hi;
    const double hi = dist.max() - x_domain.lo;
    require(lo >= grid.a() - tol && hi <= grid.b() + tol,
            "RmoceProblem: shifted outcomes leave the utility span");
}

// ---------------------------------------------------------------------------
// inner minimization LP
//
// Variables per segment s = 0..S-1: slope a_s in [0, L], intercept b_s
// free, and four nonpositive multipliers lam_s^i certifying the ball
// budget. Constraints: continuity at interior breakpoints, endpoint
// normalization, nonincreasing slopes, the budget row, slope matching
// against the center, and the multiplier balance/boundary rows.

struct InnerLpSolver::Impl {
    const RmoceProblem* problem;
    std::size_t segs;
    std::vector<double> t;  // breakpoints
    std::unique_ptr<SimplexSolver> solver;
    std::size_t num_vars = 0;

    std::size_t a_idx(std::size_t s) const { return s; }
    std::size_t b_idx(std::size_t s) const { return segs + s; }
    std::size_t l_idx(std::size_t s, int i) const {
        return 2 * segs + 4 * s + std::size_t(i - 1);
    }

    void build(bool include_ball) {
        const Grid& grid = problem->ball.center.grid();
        t = grid.breakpoints();
        segs = grid.num_segments();
        num_vars = 6 * segs;
        LinearProgram lp(num_vars);

        const double lipschitz = problem->ball.center.lipschitz();
        for (std::size_t s = 0; s < segs; ++s) {
            lp.set_bounds(a_idx(s), 0.0, lipschitz);
            lp.set_bounds(b_idx(s), -kInf, kInf);
            for (int i = 1; i <= 4; ++i) lp.set_bounds(l_idx(s, i), -kInf, 0.0);
        }

        auto row = [&]() { return std::vector<double>(num_vars, 0.0); };

        // continuity at interior breakpoints
        for (std::size_t s = 0; s + 1 < segs; ++s) {
            auto r = row();
            r[a_idx(s)] = t[s + 1];
            r[b_idx(s)] = 1.0;
            r[a_idx(s + 1)] = -t[s + 1];
            r[b_idx(s + 1)] = -1.0;
            lp.add_eq(std::move(r), 0.0);
        }
        // normalization at both ends
        {
            auto r = row();
            r[a_idx(0)] = t.front();
            r[b_idx(0)] = 1.0;
            lp.add_eq(std::move(r), 0.0);
        }
        {
            auto r = row();
            r[a_idx(segs - 1)] = t.back();
            r[b_idx(segs - 1)] = 1.0;
            lp.add_eq(std::move(r), 1.0);
        }
        // concavity
        for (std::size_t s = 0; s + 1 < segs; ++s) {
            auto r = row();
            r[a_idx(s + 1)] = 1.0;
            r[a_idx(s)] = -1.0;
            lp.add_le(std::move(r), 0.0);
        }
        if (include_ball) {
            // ball budget over the multipliers
            auto r = row();
            for (std::size_t s = 0; s < segs; ++s) {
                const double dt = t[s + 1] - t[s];
                for (int i = 1; i <= 4; ++i) r[l_idx(s, i)] = -0.5 * dt * dt;
            }
            lp.add_le(std::move(r), problem->ball.radius);
        }
        // slope matching against the center
        for (std::size_t s = 0; s < segs; ++s) {
            auto r = row();
            r[a_idx(s)] = 1.0;
            r[l_idx(s, 1)] = 1.0;
            r[l_idx(s, 2)] = -1.0;
            r[l_idx(s, 3)] = 1.0;
            r[l_idx(s, 4)] = -1.0;
            lp.add_eq(std::move(r), problem->ball.center.slopes()[s]);
        }
        // multiplier balance at interior nodes
        for (std::size_t s = 0; s + 1 < segs; ++s) {
            const double dt_l = t[s + 1] - t[s];
            const double dt_r = t[s + 2] - t[s + 1];
            auto r = row();
            r[l_idx(s + 1, 2)] = dt_r;
            r[l_idx(s + 1, 1)] = -dt_r;
            r[l_idx(s, 4)] = dt_l;
            r[l_idx(s, 3)] = -dt_l;
            lp.add_eq(std::move(r), 0.0);
        }
        // multiplier boundary conditions
        {
            const double dt0 = t[1] - t[0];
            auto r = row();
            r[l_idx(0, 2)] = dt0;
            r[l_idx(0, 1)] = -dt0;
            lp.add_eq(std::move(r), 0.0);
        }
        {
            const double dtn = t[segs] - t[segs - 1];
            auto r = row();
            r[l_idx(segs - 1, 4)] = dtn;
            r[l_idx(segs - 1, 3)] = -dtn;
            lp.add_eq(std::move(r), 0.0);
        }

        solver = std::make_unique<SimplexSolver>(std::move(lp));
    }

    std::vector<double> objective_at(double x) const {
        const Grid& grid = problem->ball.center.grid();
        std::vector<double> obj(num_vars, 0.0);
        auto add_term = [&](double point, double weight) {
            const std::size_t s = grid.segment_of(point);
            obj[a_idx(s)] += weight * point;
            obj[b_idx(s)] += weight;
        };
        add_term(x, 1.0);
        const auto& atoms = problem->dist.atoms();
        const auto& probs = problem->dist.probs();
        for (std::size_t k = 0; k < atoms.size(); ++k)
            add_term(atoms[k] - x, probs[k]);
        return obj;
    }

    InnerResult solve_at(double x) {
        const auto obj = objective_at(x);
        LpSolution sol = solver->resolve(obj); // cold on first use, warm after
        if (!sol.optimal())
            throw std::runtime_error("inner_min_lp: LP solve failed");

        std::vector<double> slopes(segs);
        for (std::size_t s = 0; s < segs; ++s) slopes[s] = sol.x[a_idx(s)];
        auto worst = PiecewiseLinearUtility::from_slopes(
            problem->ball.center.grid(), slopes,
            problem->ball.center.lipschitz(), 1e-5);

        // the rebuilt utility must reproduce the LP objective
        double check = worst.evaluate(x);
        const auto& atoms = problem->dist.atoms();
        const auto& probs = problem->dist.probs();
        for (std::size_t k = 0; k < atoms.size(); ++k)
            check += probs[k] * worst.evaluate(atoms[k] - x);
        if (std::abs(check - sol.objective) > 1e-6 * std::max(1.0, std::abs(check)))
            throw std::runtime_error("inner_min_lp: objective mismatch after rebuild");

        return {std::move(worst), sol.objective};
    }
};

InnerLpSolver::InnerLpSolver(const RmoceProblem& problem, bool include_ball)
    : impl_(new Impl) {
    impl_->problem = &problem;
    impl_->build(include_ball);
}

InnerLpSolver::~InnerLpSolver() = default;
InnerLpSolver::InnerLpSolver(InnerLpSolver&&) noexcept = default;

InnerResult InnerLpSolver::value_at(double x) { return impl_->solve_at(x); }

InnerResult inner_min_lp(double x, const RmoceProblem& problem) {
    InnerLpSolver solver(problem);
    return solver.value_at(x);
}

// ---------------------------------------------------------------------------
// outer solvers

namespace {

/// Maximizes the fixed utility's objective over the decision domain.
CeResult outer_max(const RmoceProblem& problem, const PiecewiseLinearUtility& u) {
    return moce(problem.dist, u, problem.x_domain);
}

double fixed_objective(const RmoceProblem& problem,
                       const PiecewiseLinearUtility& u, double x) {
    return u.evaluate(x) + problem.dist.expect([&](double xi) {
               return u.evaluate(xi - x);
           });
}

/// Superlevel interval {x in [lo, hi] : J(x) >= level} of the concave
/// envelope J(x) = u(x) + E[u(xi - x)]. The maximizer of the robust value
/// function always lies inside it when `level` is a certified value.
Interval level_interval(const RmoceProblem& problem,
                        const PiecewiseLinearUtility& u, double level,
                        const Interval& within, double peak_x) {
    auto g = [&](double x) { return fixed_objective(problem, u, x); };
    const double slack = 1e-12 * std::max(1.0, std::abs(level));
    if (g(peak_x) < level - slack) return within; // keep everything (noise)

    double lo = within.lo;
    if (g(lo) < level - slack) {
        double a = lo, b = peak_x;
        for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, std::abs(b));
             ++it) {
            const double m = 0.5 * (a + b);
            (g(m) >= level - slack ? b : a) = m;
        }
        lo = b;
    }
    double hi = within.hi;
    if (g(hi) < level - slack) {
        double a = peak_x, b = hi;
        for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, std::abs(b));
             ++it) {
            const double m = 0.5 * (a + b);
            (g(m) >= level - slack ? a : b) = m;
        }
        hi = a;
    }
    return {std::min(lo, hi), std::max(lo, hi)};
}

RmoceSolution finish(const RmoceProblem& problem, double x, InnerResult inner,
                     std::vector<IterationRecord> trace, int iterations,
                     RmoceStatus status) {
    // feasibility of the reported worst case
    const double dist = distance_closed_form(inner.worst, problem.ball.center);
    if (dist > problem.ball.radius + 1e-6)
        throw std::runtime_error("rmoce: worst utility left the ball");
    RmoceSolution sol{inner.value, x, std::move(inner.worst), iterations,
                      std::move(trace), status};
    return sol;
}

} // namespace

RmoceSolution solve_alternating(const RmoceProblem& problem, double x0,
                                double tol, int max_iter) {
    require(problem.x_domain.contains(x0, 1e-12), "solve_alternating: x0 outside domain");
    InnerLpSolver inner(problem);

    std::vector<IterationRecord> trace;
    std::vector<double> visited;
    Interval local = problem.x_domain; // always contains a maximizer
    double x_prev = x0;
    double best_value = -kInf;
    double best_x = x0;
    double last_inner = kInf;
    RmoceStatus status = RmoceStatus::MaxIter;
    int s = 0;

    for (; s < max_iter; ++s) {
        InnerResult res = inner.value_at(x_prev);
        trace.push_back({x_prev, res.value});
        visited.push_back(x_prev);
        if (res.value > best_value) {
            best_value = res.value;
            best_x = x_prev;
        }

        CeResult up = outer_max(problem, res.worst);
        // the outer value over-approximates the maximin optimum, the
        // inner value under-approximates it: their gap certifies x_prev
        const double gap = up.value - res.value;
        if (gap <= tol) {
            best_value = res.value;
            best_x = x_prev;
            status = RmoceStatus::Converged;
            ++s;
            break;
        }
        // The paper's stop rule (nothing moved) without a gap
        // certificate: the value is converged but the returned vertex
        // minimizer need not be an exact saddle partner, so the run is
        // reported as uncertified.
        if (std::abs(up.x_star - x_prev) <= tol &&
            std::abs(res.value - last_inner) <= tol) {
            ++s;
            break;
        }

        // The maximizer sits in the superlevel set of this envelope at
        // the best certified value; intersecting it every iteration
        // localizes x* and breaks the cycling the raw recursion allows.
        local = level_interval(problem, res.worst, best_value, local, up.x_star);
        if (local.width() <= tol) {
            ++s;
            const double mid = local.midpoint();
            InnerResult at_mid = inner.value_at(mid);
            trace.push_back({mid, at_mid.value});
            if (at_mid.value > best_value) {
                best_value = at_mid.value;
                best_x = mid;
            }
            break;
        }

        double x_next = std::clamp(up.x_star, local.lo, local.hi);
        auto seen = [&](double x) {
            for (double v : visited)
                if (std::abs(v - x) <= tol) return true;
            return false;
        };
        if (seen(x_next)) x_next = local.midpoint();
        if (seen(x_next))
            x_next = local.lo + 0.381966 * local.width(); // deterministic probe

        last_inner = res.value;
        x_prev = x_next;
    }

    InnerResult final_inner = inner.value_at(best_x);
    return finish(problem, best_x, std::move(final_inner), std::move(trace), s,
                  status);
}

RmoceSolution solve_alternating(const RmoceProblem& problem) {
    return solve_alternating(problem, problem.x_domain.midpoint());
}

RmoceSolution solve_direct(const RmoceProblem& problem, double tol) {
    InnerLpSolver inner(problem);
    std::vector<IterationRecord> trace;
    int evals = 0;
    auto phi = [&](double x) {
        ++evals;
        const double v = inner.value_at(x).value;
        trace.push_back({x, v});
        return v;
    };

    // coarse scan guards the golden-section bracket
    const int scan_points = 64;
    const Interval& dom = problem.x_domain;
    double best_x = dom.midpoint();
    double best_v = -kInf;
    int best_i = 0;
    if (dom.width() > 0.0) {
        for (int i = 0; i < scan_points; ++i) {
            const double x =
                dom.lo + dom.width() * double(i) / double(scan_points - 1);
            const double v = phi(x);
            if (v > best_v) {
                best_v = v;
                best_x = x;
                best_i = i;
            }
        }
    } else {
        best_v = phi(dom.lo);
        best_x = dom.lo;
    }
    const double step = dom.width() / double(scan_points - 1);
    const double lo = std::max(dom.lo, best_x - (best_i > 0 ? step : 0.0));
    const double hi = std::min(dom.hi, best_x + (best_i + 1 < scan_points ? step : 0.0));

    auto opt = maximize_concave(phi, lo, hi, tol);
    const double x_star = opt.value >= best_v ? opt.x : best_x;
    InnerResult final_inner = inner.value_at(x_star);
    trace.push_back({x_star, final_inner.value});
    return finish(problem, x_star, std::move(final_inner), std::move(trace),
                  evals + 1, RmoceStatus::Converged);
}

double error_bound(double lipschitz, const Grid& grid) {
    return 10.0 * std::max(2.0, lipschitz) * grid.mesh();
}

Interval truncate_domain(const DistributionSpec& spec,
                         const std::vector<double>& samples, double eps,
                         const Interval& x_domain, std::uint64_t ref_seed) {
    require(!samples.empty(), "truncate_domain: empty sample");
    double xi_lo = samples[0], xi_hi = samples[0];
    for (double s : samples) {
        xi_lo = std::min(xi_lo, s);
        xi_hi = std::max(xi_hi, s);
    }
    if (eps > 0.0) {
        auto ref = sample_vector(spec, 100000, ref_seed);
        std::sort(ref.begin(), ref.end());
        const auto quantile = [&](double q) {
            const std::size_t i = std::min(
                ref.size() - 1, std::size_t(q * double(ref.size())));
            return ref[i];
        };
        xi_lo = std::min(xi_lo, quantile(eps / 2.0));
        xi_hi = std::max(xi_hi, quantile(1.0 - eps / 2.0));
    }
    const double a = std::min(x_domain.lo, xi_lo - x_domain.hi);
    const double b = std::max(x_domain.hi, xi_hi - x_domain.lo);
    return {a, b};
}

std::vector<RadiusPoint> radius_sweep(const DiscreteDistribution& dist,
                                      const PiecewiseLinearUtility& center,
                                      const Interval& x_domain,
                                      const std::vector<double>& radii) {
    std::vector<RadiusPoint> out;
    out.reserve(radii.size());
    for (double r : radii) {
        RmoceProblem problem(dist, KantorovichBall(center, r), x_domain);
        auto sol = solve_direct(problem);
        out.push_back({r, sol.value, sol.x_star, std::move(sol.worst_utility)});
    }
    return out;
}

BuiltProblem build_problem(const RmoceConfig& config) {
    auto samples = sample_vector(config.spec, config.sample_count, config.seed);
    auto dist = DiscreteDistribution::from_samples(samples);

    Interval x;
    switch (config.x_policy) {
    case XPolicy::Half:
        x = {dist.min() / 2.0, dist.max() / 2.0};
        break;
    case XPolicy::Explicit:
        x = config.x_explicit;
        break;
    case XPolicy::Prop32:
    default:
        if (dist.min() >= 0.0)
            x = {0.0, dist.max()};
        else if (dist.max() <= 0.0)
            x = {dist.min(), 0.0};
        else
            x = {dist.min(), dist.max()};
        break;
    }

    Interval domain = truncate_domain(config.spec, samples, config.truncate_eps, x);
    Grid grid = uniform_grid(domain.lo, domain.hi, config.breakpoints);
    auto nominal = ParametricUtility::exponential(config.alpha, 0.5, 0.0);
    auto center = project_to_grid(nominal, grid, config.lipschitz);
    RmoceProblem problem(std::move(dist), KantorovichBall(std::move(center),
                                                          config.radius), x);
    return {std::move(problem), std::move(grid), domain};
}

} // namespace certeq
