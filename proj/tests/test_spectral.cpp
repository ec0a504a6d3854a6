#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "movavg/companion.hpp"
#include "movavg/spectral.hpp"
#include "test_helpers.hpp"

using namespace movavg;

namespace {

bool contains_root(const root_set& rs, std::complex<double> z, double tol = 1e-9) {
    for (const auto& r : rs.roots)
        if (std::abs(r.value - z) <= tol) return true;
    return false;
}

int total_multiplicity(const root_set& rs) {
    int n = 0;
    for (const auto& r : rs.roots) n += r.multiplicity;
    return n;
}

} // namespace

TEST_CASE("characteristic polynomial of the weights") {
    SECTION("two equal weights") {
        const polynomial p = characteristic_polynomial(weights({0.5, 0.5}));
        REQUIRE(p.degree() == 2);
        CHECK(p.coefficients[0] == -0.5);
        CHECK(p.coefficients[1] == -0.5);
        CHECK(p.coefficients[2] == 1.0);
    }
    SECTION("pure shift weights") {
        const polynomial p = characteristic_polynomial(weights({0.0, 1.0}));
        CHECK(p.coefficients[0] == 0.0);
        CHECK(p.coefficients[1] == -1.0);
        CHECK(p.coefficients[2] == 1.0);
    }
    SECTION("mass on the last weight for any m") {
        for (std::size_t m = 2; m <= 6; ++m) {
            std::vector<double> a(m, 0.0);
            a[m - 1] = 1.0;
            const polynomial p = characteristic_polynomial(weights(a));
            REQUIRE(p.degree() == m);
            CHECK(p.coefficients[m] == 1.0);
            CHECK(p.coefficients[m - 1] == -1.0);
            for (std::size_t i = 0; i + 1 < m; ++i) CHECK(p.coefficients[i] == 0.0);
        }
    }
}

TEST_CASE("root finding on factorable cases") {
    SECTION("x^2 - x") {
        const root_set rs = roots(polynomial({0.0, -1.0, 1.0}));
        CHECK(total_multiplicity(rs) == 2);
        CHECK(contains_root(rs, {0.0, 0.0}));
        CHECK(contains_root(rs, {1.0, 0.0}));
    }
    SECTION("x^2 - x/2 - 1/2 has roots 1 and -1/2") {
        // quadratic formula: (1/2 +- sqrt(1/4 + 2))/2 = (0.5 +- 1.5)/2
        const root_set rs = roots(polynomial({-0.5, -0.5, 1.0}));
        CHECK(contains_root(rs, {1.0, 0.0}));
        CHECK(contains_root(rs, {-0.5, 0.0}));
    }
    SECTION("cubic with a conjugate pair of modulus 1/2") {
        // x^3 - x^2/2 - x/4 - 1/4 = (x - 1)(x^2 + x/2 + 1/4); the pair has
        // product 1/4, so modulus 1/2
        const root_set rs = roots(polynomial({-0.25, -0.25, -0.5, 1.0}));
        CHECK(contains_root(rs, {1.0, 0.0}));
        int pair_count = 0;
        for (const auto& r : rs.roots)
            if (std::abs(r.value - std::complex<double>(1.0, 0.0)) > 1e-6) {
                CHECK(std::abs(r.value) == Catch::Approx(0.5).margin(1e-9));
                pair_count += r.multiplicity;
            }
        CHECK(pair_count == 2);
    }
    SECTION("residual and multiplicity invariants") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-2, 2);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t deg = 2 + rng() % 7;
            std::vector<double> c(deg + 1);
            for (double& v : c) v = u(rng);
            if (std::abs(c.back()) < 0.1) c.back() = 1.0;
            const polynomial p(c);
            const root_set rs = roots(p);
            CHECK(total_multiplicity(rs) == static_cast<int>(deg));
            CHECK(rs.residual <= 1e-9 * std::max(1.0, p.max_coefficient_magnitude()));
        }
    }
}

TEST_CASE("unique dominant positive root for coprime-support coefficients") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + rng() % 7;
        // x^m - b_1 x^{m-1} - ... - b_m with b_1 > 0 so the support gcd is 1
        std::vector<double> coeffs(m + 1, 0.0);
        coeffs[m] = 1.0;
        coeffs[m - 1] = -(u(rng) + 0.05);
        for (std::size_t k = 2; k <= m; ++k)
            if (rng() % 2 == 0) coeffs[m - k] = -u(rng);
        const root_set rs = roots(polynomial(coeffs));

        int positive_real = 0;
        double positive_modulus = 0.0;
        double other_max = 0.0;
        for (const auto& r : rs.roots) {
            const bool real_positive =
                r.value.real() > 0.0 && std::abs(r.value.imag()) <= 1e-8 * (1.0 + r.value.real());
            if (real_positive) {
                positive_real += r.multiplicity;
                positive_modulus = std::abs(r.value);
            } else {
                other_max = std::max(other_max, std::abs(r.value));
            }
        }
        INFO("trial " << trial);
        CHECK(positive_real == 1);
        CHECK(positive_modulus > other_max);
    }
}

TEST_CASE("power limits of matrices") {
    SECTION("identity is already its own limit") {
        const auto I = square_matrix<double>::identity(3);
        const auto res = power_limit(I);
        REQUIRE(res.converged());
        CHECK(max_abs_diff(*res.limit, I) == 0.0);
    }
    SECTION("a swap oscillates with period two") {
        square_matrix<double> B(2);
        B(0, 1) = 1.0;
        B(1, 0) = 1.0;
        const auto res = power_limit(B);
        CHECK_FALSE(res.converged());
        REQUIRE(res.period.has_value());
        CHECK(*res.period == 2);
    }
    SECTION("companion matrix of two equal weights") {
        const auto A = build_companion(weights({0.5, 0.5}));
        const auto res = power_limit(A);
        REQUIRE(res.converged());
        // oracle: fifty brute-force multiplications
        const auto P50 = testutil::brute_power(A, 50);
        CHECK(max_abs_diff(*res.limit, P50) < 1e-9);
        square_matrix<double> closed(2);
        closed(0, 0) = closed(1, 0) = 1.0 / 3.0;
        closed(0, 1) = closed(1, 1) = 2.0 / 3.0;
        CHECK(max_abs_diff(*res.limit, closed) < 1e-9);
    }
    SECTION("returned limits satisfy the projector identities") {
        std::mt19937_64 rng(29);
        for (int trial = 0; trial < 25; ++trial) {
            const std::size_t m = 2 + rng() % 7;
            const auto A = build_companion(testutil::random_weights(rng, m));
            const double tol = 1e-12;
            const auto res = power_limit(A, tol);
            REQUIRE(res.converged());
            const auto& L = *res.limit;
            const double slack = 10.0 * tol * std::max(1.0, sup_norm(L));
            CHECK(max_abs_diff(L * A, L) <= slack);
            CHECK(max_abs_diff(A * L, L) <= slack);
            CHECK(max_abs_diff(L * L, L) <= slack);
        }
    }
}

TEST_CASE("rank-one limit from an eigenvector pair") {
    SECTION("ones against partial sums") {
        const auto L = rank_one_limit({1.0, 1.0}, {0.5, 1.0});
        CHECK(L(0, 0) == Catch::Approx(1.0 / 3.0));
        CHECK(L(0, 1) == Catch::Approx(2.0 / 3.0));
        CHECK(L(1, 0) == Catch::Approx(1.0 / 3.0));
        CHECK(L(1, 1) == Catch::Approx(2.0 / 3.0));
    }
    SECTION("scalar case") {
        const auto L = rank_one_limit({1.0}, {1.0});
        CHECK(L(0, 0) == 1.0);
    }
    SECTION("orthogonal pairing is rejected") {
        CHECK_THROWS_AS(rank_one_limit({1.0, 0.0}, {0.0, 1.0}), degenerate_pairing_error);
    }
}

TEST_CASE("hypothesis-satisfying weights have one unit root strictly dominating") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + rng() % 7;
        const weights w = testutil::random_weights(rng, m);
        REQUIRE(hypothesis_holds(w));
        const root_set rs = roots(characteristic_polynomial(w));
        int unit = 0;
        double other = 0.0;
        for (const auto& r : rs.roots) {
            if (std::abs(r.value - std::complex<double>(1.0, 0.0)) <= 1e-9)
                unit += r.multiplicity;
            else
                other = std::max(other, std::abs(r.value));
        }
        CHECK(unit == 1);
        CHECK(other < 1.0);
    }
}
