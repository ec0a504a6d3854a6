#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "movavg/recurrence.hpp"
#include "test_helpers.hpp"

using namespace movavg;

TEST_CASE("single moving-average steps") {
    SECTION("two equal weights average the window") {
        auto s = recurrence_state::from_scalars({0.0, 3.0});
        CHECK(s.step(weights({0.5, 0.5}))[0] == 1.5);
    }
    SECTION("constant windows are fixed") {
        std::mt19937_64 rng(1);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t m = 2 + rng() % 6;
            const weights w = testutil::random_weights(rng, m);
            auto s = recurrence_state::from_scalars(std::vector<double>(m, 4.25));
            CHECK(s.step(w)[0] == Catch::Approx(4.25).margin(1e-14));
        }
    }
    SECTION("all mass on the newest term shifts") {
        auto s = recurrence_state::from_scalars({5.0, 9.0});
        CHECK(s.step(weights({0.0, 1.0}))[0] == 9.0);
    }
    SECTION("mismatched dimensions are rejected") {
        CHECK_THROWS_AS(recurrence_state({{1.0, 2.0}, {1.0}}), dimension_mismatch_error);
        auto s = recurrence_state::from_scalars({0.0, 1.0});
        CHECK_THROWS_AS(s.step(weights({0.25, 0.25, 0.5})), dimension_mismatch_error);
    }
}

TEST_CASE("iteration to convergence") {
    SECTION("two equal weights from (0, 3) reach 2") {
        auto s = recurrence_state::from_scalars({0.0, 3.0});
        const auto res = iterate_until(s, weights({0.5, 0.5}), 1e-10, 100000);
        REQUIRE(res.diagnosis == convergence_diagnosis::converged);
        REQUIRE(res.limit.has_value());
        CHECK(res.iterations <= 200);
        CHECK((*res.limit)[0] == Catch::Approx(2.0).margin(1e-9));
    }
    SECTION("pure delay oscillates with period two") {
        auto s = recurrence_state::from_scalars({0.0, 1.0});
        const auto res = iterate_until(s, weights({1.0, 0.0}), 1e-10, 100);
        CHECK(res.diagnosis == convergence_diagnosis::oscillating);
        CHECK_FALSE(res.limit.has_value());
    }
    SECTION("constant data converges without stepping") {
        auto s = recurrence_state::from_scalars({7.0, 7.0, 7.0});
        const auto res = iterate_until(s, weights({0.25, 0.25, 0.5}));
        CHECK(res.diagnosis == convergence_diagnosis::converged);
        CHECK(res.iterations == 0);
        CHECK((*res.limit)[0] == 7.0);
    }
}

TEST_CASE("iterates stay inside the convex hull of the window") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 2 + rng() % 5;
        const weights w = testutil::random_weights(rng, m);
        std::vector<double> init(m);
        for (double& v : init) v = u(rng);
        const double lo = *std::min_element(init.begin(), init.end());
        const double hi = *std::max_element(init.begin(), init.end());
        auto s = recurrence_state::from_scalars(init);
        for (int step = 0; step < 60; ++step) {
            const double y = s.step(w)[0];
            CHECK(y >= lo - 1e-12 * std::max(1.0, std::abs(lo)));
            CHECK(y <= hi + 1e-12 * std::max(1.0, std::abs(hi)));
        }
    }
}

TEST_CASE("iterated limits match the limit functional") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + rng() % 7;
        const std::size_t dim = 1 + rng() % 8;
        const weights w = testutil::random_weights(rng, m);
        std::vector<std::vector<double>> init(m, std::vector<double>(dim));
        for (auto& v : init)
            for (double& x : v) x = u(rng);
        const std::vector<double> expected = limit_functional(w, init);

        recurrence_state s(init);
        const auto res = iterate_until(s, w, 1e-11, 100000);
        REQUIRE(res.diagnosis == convergence_diagnosis::converged);
        for (std::size_t j = 0; j < dim; ++j)
            CHECK((*res.limit)[j] == Catch::Approx(expected[j]).margin(1e-8));
    }
}

TEST_CASE("the empirical limit is linear in the initial data") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t m = 2 + rng() % 4;
        const weights w = testutil::random_weights(rng, m);
        std::vector<double> y(m), z(m), sum(m);
        for (std::size_t k = 0; k < m; ++k) {
            y[k] = u(rng);
            z[k] = u(rng);
            sum[k] = y[k] + z[k];
        }
        auto limit_of = [&](const std::vector<double>& init) {
            auto s = recurrence_state::from_scalars(init);
            const auto res = iterate_until(s, w, 1e-12, 100000);
            REQUIRE(res.diagnosis == convergence_diagnosis::converged);
            return (*res.limit)[0];
        };
        CHECK(limit_of(sum) == Catch::Approx(limit_of(y) + limit_of(z)).margin(1e-8));
    }
}
