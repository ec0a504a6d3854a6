#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "movavg/spectral.hpp"
#include "movavg/weights.hpp"
#include "test_helpers.hpp"

using namespace movavg;

namespace {

bool has_condition(const std::vector<hypothesis_condition>& cs, hypothesis_condition c) {
    return std::find(cs.begin(), cs.end(), c) != cs.end();
}

} // namespace

TEST_CASE("weight construction validates its invariants") {
    CHECK_NOTHROW(weights({0.5, 0.5}));
    CHECK_NOTHROW(weights({0.0, 1.0 / 3.0, 2.0 / 3.0}));
    CHECK_THROWS_AS(weights({0.5, 0.25}), sum_not_one_error);
    CHECK_THROWS_AS(weights({1.0}), too_short_error);
    CHECK_THROWS_AS(weights({-0.25, 1.25}), negative_weight_error);

    const weights w({0.5, 0.5});
    CHECK(w.m() == 2);
    CHECK(w.alpha_m() == 0.5); // wrap-around accessor

    try {
        weights({0.5, 0.25});
        FAIL("expected sum_not_one_error");
    } catch (const sum_not_one_error& e) {
        CHECK(e.deviation == Catch::Approx(-0.25));
    }
}

TEST_CASE("rational weights require an exact unit sum") {
    CHECK_NOTHROW(rational_weights({rational(1, 3), rational(1, 3), rational(1, 3)}));
    CHECK_THROWS_AS(rational_weights({rational(1, 3), rational(1, 3)}), sum_not_one_error);
}

TEST_CASE("partial sums and normalized weights") {
    SECTION("two equal weights") {
        const auto cw = cumulative(weights({0.5, 0.5}));
        CHECK(cw.a[0] == Catch::Approx(0.5).margin(1e-15));
        CHECK(cw.a[1] == Catch::Approx(1.0).margin(1e-15));
        CHECK(cw.lambda[0] == Catch::Approx(1.0 / 3.0).margin(1e-15));
        CHECK(cw.lambda[1] == Catch::Approx(2.0 / 3.0).margin(1e-15));
    }
    SECTION("quarter quarter half, exactly") {
        const auto cw = cumulative(rational_weights({rational(1, 4), rational(1, 4), rational(1, 2)}));
        CHECK(cw.a[0] == rational(1, 4));
        CHECK(cw.a[1] == rational(1, 2));
        CHECK(cw.a[2] == rational(1));
        CHECK(cw.lambda[0] == rational(1, 7));
        CHECK(cw.lambda[1] == rational(2, 7));
        CHECK(cw.lambda[2] == rational(4, 7));
    }
    SECTION("all mass on the last weight") {
        const auto cw = cumulative(weights({0.0, 0.0, 0.0, 1.0}));
        for (std::size_t k = 0; k + 1 < 4; ++k) {
            CHECK(cw.a[k] == 0.0);
            CHECK(cw.lambda[k] == 0.0);
        }
        CHECK(cw.a[3] == 1.0);
        CHECK(cw.lambda[3] == 1.0);
    }
}

TEST_CASE("normalized weights form a probability vector with a maximal last entry") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 9);
        const auto cw = cumulative(testutil::random_weights(rng, m));
        double sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            CHECK(cw.lambda[k] >= 0.0);
            CHECK(cw.lambda[m - 1] >= cw.lambda[k] - 1e-15);
            sum += cw.lambda[k];
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("gcd criterion and its sufficient conditions") {
    SECTION("positive last weight suffices") {
        const auto rep = check_basic_hypothesis(weights({0.0, 1.0}));
        CHECK(rep.holds);
        CHECK(has_condition(rep.conditions, hypothesis_condition::last_weight_positive));
    }
    SECTION("support on the even index only fails") {
        const auto rep = check_basic_hypothesis(weights({1.0, 0.0}), true);
        CHECK_FALSE(rep.holds);
        REQUIRE(rep.root_certificate.has_value());
        // x^2 - 1 factors as (x-1)(x+1); the certificate must show the -1 root
        bool found_minus_one = false;
        for (const auto& e : *rep.root_certificate)
            found_minus_one |= std::abs(e.root - std::complex<double>(-1.0, 0.0)) < 1e-9;
        CHECK(found_minus_one);
        CHECK(rep.margin <= 0.0);
        CHECK_FALSE(rep.certificate_contradicts);
    }
    SECTION("uniform weights satisfy the last-weight condition for every m") {
        for (std::size_t m = 2; m <= 8; ++m) {
            const auto rep = check_basic_hypothesis(weights(std::vector<double>(m, 1.0 / double(m))));
            CHECK(rep.holds);
            CHECK(has_condition(rep.conditions, hypothesis_condition::last_weight_positive));
        }
    }
    SECTION("all four conditions fire for (0, 1/2, 1/2)") {
        const auto rep = check_basic_hypothesis(weights({0.0, 0.5, 0.5}));
        CHECK(rep.holds);
        CHECK(has_condition(rep.conditions, hypothesis_condition::gcd_one));
        CHECK(has_condition(rep.conditions, hypothesis_condition::last_weight_positive));
        CHECK(has_condition(rep.conditions, hypothesis_condition::adjacent_pair));
        CHECK(has_condition(rep.conditions, hypothesis_condition::coprime_pair));
    }
    SECTION("coprime pair without adjacency") {
        // support at distances 2 and 3 from the end: alpha_{m-2}, alpha_{m-3}
        const auto rep = check_basic_hypothesis(weights({0.0, 0.5, 0.5, 0.0, 0.0}));
        CHECK(rep.holds);
        CHECK(has_condition(rep.conditions, hypothesis_condition::coprime_pair));
        CHECK_FALSE(has_condition(rep.conditions, hypothesis_condition::last_weight_positive));
        CHECK_FALSE(has_condition(rep.conditions, hypothesis_condition::adjacent_pair));
    }
}

TEST_CASE("verdict and root certificate agree on exact-support weights") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 7);
        // random sparse support
        std::vector<double> a(m, 0.0);
        int support = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (rng() % 2 == 0) {
                a[i] = 1.0;
                ++support;
            }
        if (support == 0) {
            a[rng() % m] = 1.0;
            support = 1;
        }
        for (double& x : a) x /= support;
        const auto rep = check_basic_hypothesis(weights(a), true);
        INFO("trial " << trial);
        CHECK_FALSE(rep.certificate_contradicts);
        if (rep.holds) CHECK(rep.margin > 0.0);
    }
}

TEST_CASE("limit functional evaluates the normalized-weight combination") {
    CHECK(limit_functional(weights({0.5, 0.5}), std::vector<double>{0.0, 3.0}) ==
          Catch::Approx(2.0).margin(1e-15));
    CHECK(limit_functional(weights({0.25, 0.25, 0.5}), std::vector<double>{7.0, 0.0, 0.0}) ==
          Catch::Approx(1.0).margin(1e-12));

    SECTION("constant data is a fixed point") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t m = 2 + static_cast<std::size_t>(rng() % 6);
            const weights w = testutil::random_weights(rng, m);
            const double c = std::uniform_real_distribution<double>(-5, 5)(rng);
            CHECK(limit_functional(w, std::vector<double>(m, c)) == Catch::Approx(c).margin(1e-12));
        }
    }
    SECTION("gcd failure raises") {
        CHECK_THROWS_AS(limit_functional(weights({1.0, 0.0}), std::vector<double>{0.0, 1.0}),
                        hypothesis_error);
    }
    SECTION("affine in the data") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(-3, 3);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t m = 2 + static_cast<std::size_t>(rng() % 5);
            const weights w = testutil::random_weights(rng, m);
            std::vector<double> y(m), z(m), yz(m);
            for (std::size_t k = 0; k < m; ++k) {
                y[k] = u(rng);
                z[k] = u(rng);
                yz[k] = y[k] + z[k];
            }
            const double c = u(rng);
            std::vector<double> cy(m);
            for (std::size_t k = 0; k < m; ++k) cy[k] = c * y[k];
            CHECK(limit_functional(w, yz) ==
                  Catch::Approx(limit_functional(w, y) + limit_functional(w, z)).margin(1e-10));
            CHECK(limit_functional(w, cy) == Catch::Approx(c * limit_functional(w, y)).margin(1e-10));
        }
    }
}

TEST_CASE("limit functional result stays in the convex hull") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 6);
        const weights w = testutil::random_weights(rng, m);
        std::vector<double> y(m);
        for (double& v : y) v = u(rng);
        const double lim = limit_functional(w, y);
        CHECK(lim >= *std::min_element(y.begin(), y.end()) - 1e-12);
        CHECK(lim <= *std::max_element(y.begin(), y.end()) + 1e-12);
    }
}
