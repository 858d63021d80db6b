#include "certeq/statrobust.hpp"

#include <algorithm>
#include <cmath>

namespace certeq {

namespace {

/// Exact maximizer of the clamped objective over the domain: the map is
/// piecewise linear in x with kinks where x or a shifted atom crosses a
/// breakpoint, so scanning the kinks and the endpoints suffices (this
/// stays valid even though the flat continuation breaks concavity).
double clamped_ce(const DiscreteDistribution& d,
                  const PiecewiseLinearUtility& u, const Interval& x_domain) {
    auto g = [&](double x) {
        double acc = u.evaluate_clamped(x);
        for (std::size_t k = 0; k < d.size(); ++k)
            acc += d.probs()[k] * u.evaluate_clamped(d.atoms()[k] - x);
        return acc;
    };
    double best = g(x_domain.lo);
    best = std::max(best, g(x_domain.hi));
    for (double t : u.grid().breakpoints()) {
        if (x_domain.contains(t)) best = std::max(best, g(t));
        for (double xi : d.atoms()) {
            const double x = xi - t;
            if (x_domain.contains(x)) best = std::max(best, g(x));
        }
    }
    return best;
}

double rmoce_estimate(const std::vector<double>& samples,
                      const EstimatorSpec& est) {
    // winsorize into the range every shift of which stays on the grid
    const double lo = est.center.grid().a() + est.x_domain.hi;
    const double hi = est.center.grid().b() + est.x_domain.lo;
    std::vector<double> clipped(samples);
    for (double& s : clipped) s = std::clamp(s, lo, hi);
    RmoceProblem problem(DiscreteDistribution::from_samples(clipped),
                         KantorovichBall(est.center, est.radius), est.x_domain);
    return solve_direct(problem).value;
}

} // namespace

double plug_in_estimate(const std::vector<double>& samples,
                        const EstimatorSpec& estimator) {
    require(!samples.empty(), "plug_in_estimate: empty sample");
    if (estimator.use_rmoce) return rmoce_estimate(samples, estimator);
    return clamped_ce(DiscreteDistribution::from_samples(samples),
                      estimator.center, estimator.x_domain);
}

std::vector<double>
estimator_law(const DistributionSpec& spec,
              const std::optional<ContaminationModel>& contamination,
              std::size_t sample_size, std::size_t replications,
              const EstimatorSpec& estimator, std::uint64_t master_seed) {
    require(sample_size >= 2, "estimator_law: sample size must be >= 2");
    require(replications >= 1, "estimator_law: need at least one replication");
    std::vector<double> values(replications);
    for (std::size_t m = 0; m < replications; ++m) {
        auto samples =
            sample_vector(spec, sample_size, derive_seed(master_seed, 2 * m));
        if (contamination)
            samples = contaminate(samples, *contamination,
                                  derive_seed(master_seed, 2 * m + 1));
        values[m] = plug_in_estimate(samples, estimator);
    }
    return values;
}

RobustnessReport robustness_check(const RobustnessConfig& config) {
    require(config.replications >= 30, "robustness_check: need M >= 30");
    config.base.check();
    config.contamination.check();

    // reference sample fixes the estimator's grid, domain and the
    // channel-distance estimate
    const std::size_t ref_size = 100000;
    auto ref = sample_vector(config.base, ref_size,
                             derive_seed(config.seed, 1u << 20));
    auto sorted = ref;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        return sorted[std::min(sorted.size() - 1,
                               std::size_t(q * double(sorted.size())))];
    };
    const double eps = std::max(config.truncate_eps, 1e-6);
    const double xi_lo = quantile(eps / 2.0);
    const double xi_hi = quantile(1.0 - eps / 2.0);
    const Interval x_domain{xi_lo / 2.0, xi_hi / 2.0};
    const double a = std::min(x_domain.lo, xi_lo - x_domain.hi);
    const double b = std::max(x_domain.hi, xi_hi - x_domain.lo);
    Grid grid = uniform_grid(a, b, config.breakpoints);
    auto nominal = ParametricUtility::exponential(config.alpha, 0.5, 0.0);
    auto center = config.lipschitz > 0.0
                      ? project_to_grid(nominal, grid, config.lipschitz)
                      : project_to_grid(nominal, grid);

    EstimatorSpec est{center, x_domain, config.radius, config.use_rmoce};
    const double lipschitz =
        config.lipschitz > 0.0 ? config.lipschitz : center.slopes().front();

    RobustnessReport rep;
    rep.sample_size = config.sample_size;
    rep.replications = config.replications;
    rep.lipschitz = lipschitz;

    rep.clean_values = estimator_law(config.base, std::nullopt,
                                     config.sample_size, config.replications,
                                     est, config.seed);
    rep.contaminated_values = estimator_law(config.base, config.contamination,
                                            config.sample_size,
                                            config.replications, est,
                                            config.seed);

    auto law_p = DiscreteDistribution::from_samples(rep.clean_values);
    auto law_q = DiscreteDistribution::from_samples(rep.contaminated_values);
    rep.lhs = kantorovich_distance_dist(law_p, law_q);

    auto ref_noisy = contaminate(ref, config.contamination,
                                 derive_seed(config.seed, (1u << 20) + 1));
    rep.channel_distance =
        kantorovich_distance_dist(DiscreteDistribution::from_samples(ref),
                                  DiscreteDistribution::from_samples(ref_noisy));
    rep.rhs = lipschitz * rep.channel_distance;

    // Monte-Carlo scale of lhs under exchangeability: root mean square of
    // the distance across seeded permutation splits of the pooled values
    const int splits = 200;
    std::vector<double> pool(rep.clean_values);
    pool.insert(pool.end(), rep.contaminated_values.begin(),
                rep.contaminated_values.end());
    double acc = 0.0;
    for (int bidx = 0; bidx < splits; ++bidx) {
        Rng rng(derive_seed(config.seed, 4096 + std::uint64_t(bidx)));
        auto shuffled = pool;
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            const std::size_t j =
                std::size_t(rng.uniform01() * double(i)) % i;
            std::swap(shuffled[i - 1], shuffled[j]);
        }
        std::vector<double> half_a(shuffled.begin(),
                                   shuffled.begin() + config.replications);
        std::vector<double> half_b(shuffled.begin() + config.replications,
                                   shuffled.end());
        const double w = kantorovich_distance_dist(
            DiscreteDistribution::from_samples(half_a),
            DiscreteDistribution::from_samples(half_b));
        acc += w * w;
    }
    rep.stderr_ = std::sqrt(acc / double(splits));

    rep.pass = rep.lhs <= rep.rhs + 2.0 * rep.stderr_;
    return rep;
}

} // namespace certeq
