#include "doctest.h"

#include <thread>
#include <vector>

#include "helpers.hpp"
#include "certeq/kantorovich.hpp"
#include "certeq/rmoce.hpp"

using namespace certeq;

// The concurrency contract: values are immutable, solvers hold no shared
// state, and sampling takes explicit seeds. Concurrent runs must produce
// exactly the sequential results.

TEST_CASE("parallel sampling and solves reproduce sequential results") {
    RmoceConfig cfg;
    cfg.spec = DistributionSpec::uniform(-1.0, 1.0);
    cfg.sample_count = 40;
    cfg.alpha = 2.0;
    cfg.breakpoints = 8;
    cfg.lipschitz = 20.0;
    cfg.radius = 0.03;

    const int workers = 4;
    std::vector<double> expected(workers);
    for (int i = 0; i < workers; ++i) {
        auto c = cfg;
        c.seed = 100 + std::uint64_t(i);
        expected[i] = solve_direct(build_problem(c).problem).value;
    }

    std::vector<double> got(workers, 0.0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) {
        pool.emplace_back([&, i]() {
            auto c = cfg;
            c.seed = 100 + std::uint64_t(i);
            got[i] = solve_direct(build_problem(c).problem).value;
        });
    }
    for (auto& t : pool) t.join();
    for (int i = 0; i < workers; ++i) CHECK(got[i] == expected[i]);
}

TEST_CASE("distance computations share utilities across threads") {
    std::mt19937_64 gen(8);
    auto grid = uniform_grid(-1.0, 1.0, 12);
    auto u = testing::random_plu(grid, gen);
    auto v = testing::random_plu(grid, gen);
    const double expected = distance_primal_lp(u, v);

    std::vector<double> got(4, 0.0);
    std::vector<std::thread> pool;
    for (int i = 0; i < 4; ++i)
        pool.emplace_back([&, i]() { got[i] = distance_primal_lp(u, v); });
    for (auto& t : pool) t.join();
    for (double g : got) CHECK(g == expected);
}
