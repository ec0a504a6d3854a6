#pragma once

// Shared generators and independent oracles for the test suites.  Everything
// here is deliberately separate from the library's own computation paths so
// expected values come from a second route.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "movavg/matrix.hpp"
#include "movavg/rational.hpp"
#include "movavg/weights.hpp"

namespace testutil {

/// Weights from independent exponential draws; every entry positive.
inline movavg::weights random_weights(std::mt19937_64& rng, std::size_t m) {
    std::exponential_distribution<double> exp_dist(1.0);
    std::vector<double> a(m);
    double sum = 0.0;
    for (double& x : a) {
        x = exp_dist(rng) + 1e-3;
        sum += x;
    }
    for (double& x : a) x /= sum;
    return movavg::weights(std::move(a));
}

/// Weights with every entry at least `floor` after normalization; keeps the
/// subdominant root modulus away from one so power iterations stay short.
inline movavg::weights random_weights_floored(std::mt19937_64& rng, std::size_t m, double floor) {
    std::exponential_distribution<double> exp_dist(1.0);
    std::vector<double> a(m);
    double sum = 0.0;
    for (double& x : a) {
        x = exp_dist(rng) + floor;
        sum += x;
    }
    for (double& x : a) x /= sum;
    return movavg::weights(std::move(a));
}

/// Exact rational weights n_i / (sum n) with small random numerators; at
/// least two nonzero entries.
inline movavg::rational_weights random_rational_weights(std::mt19937_64& rng, std::size_t m) {
    std::uniform_int_distribution<long long> digit(0, 9);
    std::vector<long long> nums(m);
    long long total = 0;
    do {
        total = 0;
        int nonzero = 0;
        for (long long& n : nums) {
            n = digit(rng);
            total += n;
            if (n > 0) ++nonzero;
        }
        if (nonzero < 2) total = 0;
    } while (total == 0);
    std::vector<movavg::rational> alphas;
    alphas.reserve(m);
    for (long long n : nums) alphas.emplace_back(n, total);
    return movavg::rational_weights(std::move(alphas));
}

/// Brute-force matrix power by repeated multiplication, the oracle for
/// power-limit checks.
inline movavg::square_matrix<double> brute_power(const movavg::square_matrix<double>& B,
                                                 std::size_t k) {
    movavg::square_matrix<double> P = movavg::square_matrix<double>::identity(B.n());
    for (std::size_t i = 0; i < k; ++i) P = P * B;
    return P;
}

/// Numerical rank via Gaussian elimination with partial pivoting.
inline std::size_t numerical_rank(movavg::square_matrix<double> M, double tol) {
    const std::size_t n = M.n();
    std::size_t rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t pivot = row;
        for (std::size_t r = row + 1; r < n; ++r)
            if (std::abs(M(r, col)) > std::abs(M(pivot, col))) pivot = r;
        if (std::abs(M(pivot, col)) <= tol) continue;
        if (pivot != row)
            for (std::size_t c = 0; c < n; ++c) std::swap(M(pivot, c), M(row, c));
        for (std::size_t r = row + 1; r < n; ++r) {
            const double f = M(r, col) / M(row, col);
            for (std::size_t c = col; c < n; ++c) M(r, c) -= f * M(row, c);
        }
        ++rank;
        ++row;
    }
    return rank;
}

/// Solve (A - I) x = 0 for a unit-sup-norm kernel vector by inverse-free
/// elimination on the augmented system; assumes a one-dimensional kernel.
inline std::vector<double> unit_eigenvector(const movavg::square_matrix<double>& A) {
    const std::size_t n = A.n();
    movavg::square_matrix<double> M = A - movavg::square_matrix<double>::identity(n);
    // eliminate; the free variable is set to 1
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    std::vector<std::size_t> pivot_col(n, n);
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t pivot = row;
        for (std::size_t r = row + 1; r < n; ++r)
            if (std::abs(M(r, col)) > std::abs(M(pivot, col))) pivot = r;
        if (std::abs(M(pivot, col)) <= 1e-10) continue;
        if (pivot != row)
            for (std::size_t c = 0; c < n; ++c) std::swap(M(pivot, c), M(row, c));
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row) continue;
            const double f = M(r, col) / M(row, col);
            for (std::size_t c = col; c < n; ++c) M(r, c) -= f * M(row, c);
        }
        pivot_col[row] = col;
        ++row;
    }
    std::size_t free_col = n;
    for (std::size_t col = 0; col < n; ++col) {
        bool is_pivot = false;
        for (std::size_t r = 0; r < row; ++r) is_pivot |= pivot_col[r] == col;
        if (!is_pivot) {
            free_col = col;
            break;
        }
    }
    std::vector<double> x(n, 0.0);
    x[free_col] = 1.0;
    for (std::size_t r = 0; r < row; ++r)
        x[pivot_col[r]] = -M(r, free_col) / M(r, pivot_col[r]);
    return x;
}

} // namespace testutil
