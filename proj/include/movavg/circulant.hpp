#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "movavg/matrix.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/**
 * Circulant matrix built from the weights, with the support data feeding the
 * gcd criterion for existence of the power limit.  The support U collects
 * k in {1,...,m} with alpha_k > 0, where alpha_m wraps to alpha_0; the two
 * competing gcds are gcd(U + {m}) and gcd((U - U) + {m}) over pairwise
 * differences.
 */
template <class T>
struct circulant_spec {
    square_matrix<T> C;
    std::vector<std::size_t> support; ///< U, ascending
    std::size_t gcd_period;           ///< gcd(U + {m})
    std::size_t gcd_differences;      ///< gcd((U - U) + {m})
    std::size_t m;
};

template <class T>
circulant_spec<T> build_circulant(const basic_weights<T>& w) {
    const std::size_t m = w.m();
    circulant_spec<T> spec{square_matrix<T>(m), {}, 0, 0, m};

    // each row is the cyclic right rotation of the row above
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) spec.C(i, j) = w.alpha((j + m - i) % m);

    for (std::size_t k = 1; k <= m; ++k) {
        const T& ak = k == m ? w.alpha_m() : w.alpha(k);
        if (detail::is_positive(ak)) spec.support.push_back(k);
    }

    std::size_t g = m;
    for (std::size_t k : spec.support) g = std::gcd(g, k);
    spec.gcd_period = g;

    std::size_t gd = m;
    for (std::size_t a : spec.support)
        for (std::size_t b : spec.support) gd = std::gcd(gd, a >= b ? a - b : b - a);
    spec.gcd_differences = gd;
    return spec;
}

/**
 * Closed-form power limit of the circulant when it exists: equal gcds decide
 * existence, and then entry (i,j) is gcd_period/m when i = j modulo the gcd
 * and zero otherwise (1-based congruence; identical 0-based).  Absent when
 * the gcds differ, in which case the powers cycle.
 */
template <class T>
std::optional<square_matrix<T>> krafft_limit(const circulant_spec<T>& spec) {
    if (spec.gcd_period != spec.gcd_differences) return std::nullopt;
    const std::size_t gamma = spec.gcd_period;
    const T value = T(static_cast<long long>(gamma)) * detail::inverse_of<T>(spec.m);
    square_matrix<T> L(spec.m);
    for (std::size_t i = 0; i < spec.m; ++i)
        for (std::size_t j = 0; j < spec.m; ++j)
            if ((i >= j ? i - j : j - i) % gamma == 0) L(i, j) = value;
    return L;
}

} // namespace movavg
