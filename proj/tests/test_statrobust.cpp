#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "certeq/statrobust.hpp"

using namespace certeq;

namespace {

EstimatorSpec make_estimator(double lo = -2.0, double hi = 2.0) {
    auto grid = uniform_grid(lo, hi, 9);
    auto center = project_to_grid(ParametricUtility::exponential(2.0, 0.5, 0.0),
                                  grid);
    return EstimatorSpec{center, Interval{lo / 4.0, hi / 4.0}, 0.0, false};
}

} // namespace

TEST_CASE("estimate is invariant under sample permutation") {
    auto est = make_estimator();
    std::vector<double> samples = {0.3, -0.7, 1.1, 0.05, -0.2, 0.9};
    const double base = plug_in_estimate(samples, est);
    std::mt19937_64 gen(3);
    for (int rep = 0; rep < 10; ++rep) {
        auto shuffled = samples;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        CHECK(plug_in_estimate(shuffled, est) == base); // bit identical
    }
}

TEST_CASE("sure outcomes concentrate the estimator") {
    auto est = make_estimator();
    auto vals = estimator_law(DistributionSpec::dirac(0.8), std::nullopt, 5, 20,
                              est, 7);
    const double expected =
        moce(sample(DistributionSpec::dirac(0.8), 5, 0), est.center,
             est.x_domain)
            .value;
    for (double v : vals) CHECK(v == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("estimator spread shrinks with the sample size") {
    auto est = make_estimator();
    auto spec = DistributionSpec::uniform(-1.0, 1.0);
    auto variance = [&](std::size_t n) {
        auto vals = estimator_law(spec, std::nullopt, n, 60, est, 11);
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= double(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        return var / double(vals.size());
    };
    const double v10 = variance(10);
    const double v50 = variance(50);
    const double v200 = variance(200);
    CHECK(v50 < v10);
    CHECK(v200 < v50);
}

TEST_CASE("single replication matches the one-shot estimate") {
    auto est = make_estimator();
    est.use_rmoce = true;
    est.radius = 0.02;
    auto spec = DistributionSpec::uniform(-1.0, 1.0);
    auto vals = estimator_law(spec, std::nullopt, 12, 1, est, 99);
    auto samples = sample_vector(spec, 12, derive_seed(99, 0));
    CHECK(vals[0] == doctest::Approx(plug_in_estimate(samples, est)).epsilon(1e-12));
}

TEST_CASE("zero contamination couples the channels exactly") {
    RobustnessConfig cfg;
    cfg.base = DistributionSpec::uniform(-1.0, 1.0);
    cfg.contamination = ContaminationModel{0.0, DistributionSpec::dirac(0.5)};
    cfg.sample_size = 30;
    cfg.replications = 40;
    cfg.seed = 5;
    auto rep = robustness_check(cfg);
    CHECK(rep.lhs == doctest::Approx(0.0));
    CHECK(rep.rhs == doctest::Approx(0.0));
    CHECK(rep.pass);
    CHECK(rep.lhs <= 2.0 * rep.stderr_);
}

TEST_CASE("shift contamination stays within the stability budget") {
    RobustnessConfig cfg;
    cfg.base = DistributionSpec::uniform(-1.0, 1.0);
    cfg.contamination = ContaminationModel{0.1, DistributionSpec::dirac(0.5)};
    cfg.sample_size = 30;
    cfg.replications = 60; // desk-size smoke; the acceptance suite runs 200
    cfg.seed = 5;
    auto rep = robustness_check(cfg);
    CHECK(rep.pass);
    CHECK(rep.lhs <= rep.rhs + 2.0 * rep.stderr_);
    CHECK(rep.channel_distance == doctest::Approx(0.05).epsilon(0.1));
    CHECK(rep.clean_values.size() == 60);
    CHECK(rep.contaminated_values.size() == 60);
}

TEST_CASE("doubling the shift widens the channel and not less the law gap") {
    RobustnessConfig small;
    small.base = DistributionSpec::uniform(-1.0, 1.0);
    small.contamination = ContaminationModel{0.1, DistributionSpec::dirac(0.25)};
    small.sample_size = 25;
    small.replications = 40;
    small.seed = 21;
    auto a = robustness_check(small);

    auto big = small;
    big.contamination.noise = DistributionSpec::dirac(0.5);
    auto b = robustness_check(big);

    CHECK(b.rhs >= a.rhs - 1e-12);
    CHECK(b.lhs >= a.lhs - 1e-12);
}

TEST_CASE("estimator law is deterministic in the master seed") {
    auto est = make_estimator();
    auto spec = DistributionSpec::lognormal(0.0, 0.5);
    ContaminationModel model{0.2, DistributionSpec::uniform(-0.1, 0.1)};
    auto v1 = estimator_law(spec, model, 20, 15, est, 31);
    auto v2 = estimator_law(spec, model, 20, 15, est, 31);
    CHECK(v1 == v2);
}
