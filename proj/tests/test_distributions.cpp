#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "certeq/distributions.hpp"

using namespace certeq;

TEST_CASE("dirac sampling collapses to a single atom") {
    auto d = sample(DistributionSpec::dirac(2.0), 5, 123);
    REQUIRE(d.size() == 1);
    CHECK(d.atoms()[0] == doctest::Approx(2.0));
    CHECK(d.probs()[0] == doctest::Approx(1.0));
}

TEST_CASE("uniform sample stays in range with equal weights") {
    auto d = sample(DistributionSpec::uniform(-1.0, 1.0), 100, 7);
    REQUIRE(d.size() == 100);
    for (double a : d.atoms()) {
        CHECK(a > -1.0);
        CHECK(a < 1.0);
    }
    for (double p : d.probs()) CHECK(p == doctest::Approx(0.01));
}

TEST_CASE("pareto sampler matches the analytic CDF") {
    const double scale = 1.0, shape = 1.5;
    auto d = sample(DistributionSpec::pareto(scale, shape), 10, 1);
    for (double a : d.atoms()) CHECK(a >= scale);
    CHECK(std::isfinite(d.mean()));

    // Kolmogorov-Smirnov statistic against F(x) = 1 - (scale/x)^shape.
    auto atoms = d.atoms();
    double ks = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double f = 1.0 - std::pow(scale / atoms[i], shape);
        ks = std::max(ks, std::abs(acc - f));
        acc += d.probs()[i];
        ks = std::max(ks, std::abs(acc - f));
    }
    CHECK(ks < 0.5);
}

TEST_CASE("normal quantile inverts the normal CDF") {
    auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    for (double p = 0.0005; p < 1.0; p += 0.0007) {
        const double x = normal_quantile(p);
        CHECK(std::abs(phi(x) - p) <= 1e-13);
    }
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
    CHECK_THROWS(normal_quantile(0.0));
    CHECK_THROWS(normal_quantile(1.0));
}

TEST_CASE("lognormal sampler tracks its analytic CDF") {
    const double mu = 0.3, sigma = 0.8;
    auto d = sample(DistributionSpec::lognormal(mu, sigma), 4000, 17);
    auto cdf = [&](double x) {
        return 0.5 * std::erfc(-(std::log(x) - mu) / (sigma * std::sqrt(2.0)));
    };
    double ks = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double f = cdf(d.atoms()[i]);
        ks = std::max(ks, std::abs(acc - f));
        acc += d.probs()[i];
        ks = std::max(ks, std::abs(acc - f));
    }
    CHECK(ks < 0.03); // ~1.6/sqrt(4000) is the 1% KS band
}

TEST_CASE("sampling is deterministic in the seed") {
    auto spec = DistributionSpec::lognormal(0.0, 1.0);
    auto d1 = sample(spec, 50, 99);
    auto d2 = sample(spec, 50, 99);
    CHECK(d1.atoms() == d2.atoms());
    CHECK(d1.probs() == d2.probs());
    auto d3 = sample(spec, 50, 100);
    CHECK(d1.atoms() != d3.atoms());
}

TEST_CASE("gamma sampler has roughly the right mean") {
    const double shape = 0.53, scale = 3.0;
    auto d = sample(DistributionSpec::gamma(shape, scale), 20000, 11);
    for (double a : d.atoms()) CHECK(a > 0.0);
    CHECK(d.mean() == doctest::Approx(shape * scale).epsilon(0.05));
}

TEST_CASE("expect evaluates weighted sums") {
    auto d = sample(DistributionSpec::dirac(3.5), 3, 0);
    CHECK(d.expect([](double t) { return t; }) == doctest::Approx(3.5));

    DiscreteDistribution sym({-1.0, 1.0}, {0.5, 0.5});
    CHECK(sym.expect([](double t) { return t * t; }) == doctest::Approx(1.0));

    std::vector<double> atoms(10), probs(10, 0.1);
    for (int k = 0; k < 10; ++k) atoms[k] = k + 1.0;
    DiscreteDistribution ten(atoms, probs);
    double oracle = 0.0; // direct summation
    for (int k = 1; k <= 10; ++k) oracle += std::exp(-double(k)) / 10.0;
    double got = ten.expect([](double t) { return std::exp(-t); });
    CHECK(got == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(got == doctest::Approx(0.05819561).epsilon(1e-6));
}

TEST_CASE("expect rejects non-finite integrand values") {
    DiscreteDistribution d({0.0, 1.0}, {0.5, 0.5});
    CHECK_THROWS(d.expect([](double t) { return 1.0 / t; }));
}

TEST_CASE("expect is linear") {
    std::mt19937_64 gen(5);
    auto d = testing::random_distribution(gen);
    auto f = [](double t) { return std::sin(t); };
    auto g = [](double t) { return t * t; };
    const double a = 2.5, b = -1.25;
    double lhs = d.expect([&](double t) { return a * f(t) + b * g(t); });
    double rhs = a * d.expect(f) + b * d.expect(g);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("kantorovich distance between distributions") {
    auto p = sample(DistributionSpec::uniform(0.0, 1.0), 30, 3);
    CHECK(kantorovich_distance_dist(p, p) == doctest::Approx(0.0));

    auto d0 = sample(DistributionSpec::dirac(0.0), 1, 0);
    auto d1 = sample(DistributionSpec::dirac(1.0), 1, 0);
    CHECK(kantorovich_distance_dist(d0, d1) == doctest::Approx(1.0));

    DiscreteDistribution two({0.0, 1.0}, {0.5, 0.5});
    auto half = sample(DistributionSpec::dirac(0.5), 1, 0);
    CHECK(kantorovich_distance_dist(two, half) == doctest::Approx(0.5));
}

TEST_CASE("kantorovich distance is a metric on random pairs") {
    std::mt19937_64 gen(17);
    for (int rep = 0; rep < 25; ++rep) {
        auto p = testing::random_distribution(gen);
        auto q = testing::random_distribution(gen);
        auto r = testing::random_distribution(gen);
        double pq = kantorovich_distance_dist(p, q);
        double qp = kantorovich_distance_dist(q, p);
        CHECK(pq == qp); // the sweep is symmetric in its arguments
        double pr = kantorovich_distance_dist(p, r);
        double qr = kantorovich_distance_dist(q, r);
        CHECK(pq <= pr + qr + 1e-12);
        CHECK(pq >= 0.0);
    }
    auto p = testing::random_distribution(gen);
    CHECK(kantorovich_distance_dist(p, p) == 0.0);

    // distinct distributions sit at positive distance
    DiscreteDistribution a({0.0, 1.0}, {0.5, 0.5});
    DiscreteDistribution b({0.0, 1.0}, {0.25, 0.75});
    CHECK(kantorovich_distance_dist(a, b) > 0.0);
}

TEST_CASE("contamination channel") {
    std::vector<double> samples(1000);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (auto& s : samples) s = unif(gen);

    SUBCASE("zero weight is the identity") {
        ContaminationModel none{0.0, DistributionSpec::uniform(-0.05, 0.05)};
        CHECK(contaminate(samples, none, 42) == samples);
    }
    SUBCASE("full weight with dirac noise shifts everything") {
        ContaminationModel all{1.0, DistributionSpec::dirac(0.1)};
        auto out = contaminate(samples, all, 42);
        for (std::size_t i = 0; i < samples.size(); ++i)
            CHECK(out[i] == doctest::Approx(samples[i] + 0.1));
    }
    SUBCASE("perturbed fraction tracks the mixing weight") {
        ContaminationModel ten{0.1, DistributionSpec::uniform(-0.05, 0.05)};
        auto out = contaminate(samples, ten, 42);
        int changed = 0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (out[i] != samples[i]) ++changed;
        // binomial(1000, 0.1): +-3 sigma is about +-0.03
        CHECK(changed >= 70);
        CHECK(changed <= 130);
    }
    SUBCASE("deterministic in the seed") {
        ContaminationModel ten{0.1, DistributionSpec::uniform(-0.05, 0.05)};
        CHECK(contaminate(samples, ten, 9) == contaminate(samples, ten, 9));
    }
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS(DistributionSpec::uniform(1.0, 1.0));
    CHECK_THROWS(DistributionSpec::lognormal(0.0, 0.0));
    CHECK_THROWS(DistributionSpec::pareto(-1.0, 1.5));
    CHECK_THROWS(DistributionSpec::gamma(0.0, 1.0));
    CHECK_THROWS(DiscreteDistribution({0.0, 1.0}, {0.5, 0.6}));
    CHECK_THROWS(DiscreteDistribution({0.0, 1.0}, {1.0, 0.0}));
}

TEST_CASE("duplicate atoms merge by summing probability") {
    DiscreteDistribution d({1.0, 1.0, 2.0}, {0.25, 0.25, 0.5});
    REQUIRE(d.size() == 2);
    CHECK(d.probs()[0] == doctest::Approx(0.5));
    CHECK(d.probs()[1] == doctest::Approx(0.5));
}
