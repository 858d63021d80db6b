#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "certeq/kantorovich.hpp"

using namespace certeq;
using certeq::testing::mix_plu;
using certeq::testing::random_plu;

TEST_CASE("distance of a utility to itself is zero") {
    std::mt19937_64 gen(3);
    auto grid = uniform_grid(-1.0, 1.0, 6);
    auto u = random_plu(grid, gen);
    CHECK(distance_closed_form(u, u) == doctest::Approx(0.0));
    CHECK(distance_primal_lp(u, u) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(distance_dual_lp(u, u) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("hand-computed pair on {0, 1/2, 1}") {
    auto grid = uniform_grid(0.0, 1.0, 3);
    PiecewiseLinearUtility u(grid, {0.0, 0.5, 1.0}, 1.0 + 1e-12); // slopes 1,1
    PiecewiseLinearUtility v(grid, {0.0, 1.0, 1.0}, 2.0);         // slopes 2,0
    // integral of |t - v(t)|: 0.125 on each half
    CHECK(distance_closed_form(u, v) == doctest::Approx(0.25));
    CHECK(distance_primal_lp(u, v) == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(distance_dual_lp(u, v) == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("grid mismatch is rejected") {
    std::mt19937_64 gen(4);
    auto u = random_plu(uniform_grid(0.0, 1.0, 4), gen);
    auto v = random_plu(uniform_grid(0.0, 1.0, 5), gen);
    CHECK_THROWS(distance_primal_lp(u, v));
    CHECK_THROWS(distance_dual_lp(u, v));
    CHECK_THROWS(distance_closed_form(u, v));
}

TEST_CASE("three-way agreement on random pairs") {
    std::mt19937_64 gen(42);
    for (std::size_t n : {3u, 10u, 25u}) {
        auto grid = uniform_grid(-1.5, 2.0, n);
        for (int rep = 0; rep < 12; ++rep) {
            auto u = random_plu(grid, gen);
            auto v = random_plu(grid, gen);
            const double closed = distance_closed_form(u, v);
            const double primal = distance_primal_lp(u, v);
            const double dual = distance_dual_lp(u, v);
            CHECK(std::abs(primal - dual) <= 1e-7);
            CHECK(std::abs(primal - closed) <= 1e-7);
        }
    }
}

TEST_CASE("projected nominal against a perturbed copy") {
    auto nominal = ParametricUtility::exponential(2.0, 0.5, 0.0);
    auto grid = uniform_grid(-1.0, 1.0, 10);
    auto center = project_to_grid(nominal, grid);
    std::mt19937_64 gen(9);
    auto other = random_plu(grid, gen);
    const double closed = distance_closed_form(center, other);
    CHECK(distance_primal_lp(center, other) == doctest::Approx(closed).epsilon(1e-7));
    CHECK(distance_dual_lp(center, other) == doctest::Approx(closed).epsilon(1e-7));
}

TEST_CASE("metric axioms hold on the corpus") {
    std::mt19937_64 gen(7);
    auto grid = uniform_grid(0.0, 2.0, 8);
    for (int rep = 0; rep < 15; ++rep) {
        auto u = random_plu(grid, gen);
        auto v = random_plu(grid, gen);
        auto w = random_plu(grid, gen);
        const double uv = distance_closed_form(u, v);
        const double vu = distance_closed_form(v, u);
        CHECK(uv == doctest::Approx(vu).epsilon(1e-12));
        CHECK(uv >= 0.0);
        CHECK(uv <= distance_closed_form(u, w) + distance_closed_form(w, v) + 1e-9);
    }
    auto u = random_plu(grid, gen);
    CHECK(distance_closed_form(u, u) == 0.0);
}

TEST_CASE("distance scales linearly along convex segments") {
    std::mt19937_64 gen(11);
    auto grid = uniform_grid(-0.5, 1.5, 7);
    auto center = random_plu(grid, gen);
    auto other = random_plu(grid, gen);
    const double full = distance_closed_form(other, center);
    for (double lambda : {0.1, 0.35, 0.5, 0.8}) {
        auto blend = mix_plu(other, center, lambda);
        CHECK(distance_closed_form(blend, center) ==
              doctest::Approx(lambda * full).epsilon(1e-9));
    }
}
