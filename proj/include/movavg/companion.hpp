#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "movavg/matrix.hpp"
#include "movavg/spectral.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/// Companion matrix of the moving average: ones on the superdiagonal and the
/// weights in the last row.  Row-stochastic by construction.
template <class T>
square_matrix<T> build_companion(const basic_weights<T>& w) {
    const std::size_t m = w.m();
    square_matrix<T> A(m);
    for (std::size_t i = 0; i + 1 < m; ++i) A(i, i + 1) = T(1);
    for (std::size_t j = 0; j < m; ++j) A(m - 1, j) = w.alpha(j);
    return A;
}

/// All-ones vector.
template <class T>
std::vector<T> ones_vector(std::size_t n) {
    return std::vector<T>(n, T(1));
}

/// Standard unit vector e_k (0-based index).
template <class T>
std::vector<T> unit_vector(std::size_t n, std::size_t k) {
    std::vector<T> e(n, T(0));
    e.at(k) = T(1);
    return e;
}

template <class T>
struct eigenvector_residuals {
    T left;  ///< max |a^T A - a^T|
    T right; ///< max |A e - e|
};

/// Residuals of the eigenvalue-one identities: a^T (partial sums) is a left
/// eigenvector and e a right eigenvector of the companion matrix.
template <class T>
eigenvector_residuals<T> eigenvector_identities(const basic_weights<T>& w) {
    const std::size_t m = w.m();
    const square_matrix<T> A = build_companion(w);
    const cumulative_weights<T> cw = cumulative(w);

    eigenvector_residuals<T> out{T(0), T(0)};
    for (std::size_t j = 0; j < m; ++j) {
        T col(0);
        for (std::size_t i = 0; i < m; ++i) col += cw.a[i] * A(i, j);
        T dev = col - cw.a[j];
        if (dev < T(0)) dev = -dev;
        out.left = std::max(out.left, dev);
    }
    const std::vector<T> Ae = A.apply(ones_vector<T>(m));
    for (std::size_t i = 0; i < m; ++i) {
        T dev = Ae[i] - T(1);
        if (dev < T(0)) dev = -dev;
        out.right = std::max(out.right, dev);
    }
    return out;
}

/// Closed-form limit of companion powers: the rank-one stochastic matrix with
/// every row equal to lambda^T.  Requires the gcd criterion.
template <class T>
square_matrix<T> companion_limit(const basic_weights<T>& w) {
    if (!hypothesis_holds(w))
        throw hypothesis_error("gcd criterion fails; companion powers need not converge");
    const cumulative_weights<T> cw = cumulative(w);
    square_matrix<T> L(w.m());
    for (std::size_t i = 0; i < w.m(); ++i)
        for (std::size_t j = 0; j < w.m(); ++j) L(i, j) = cw.lambda[j];
    return L;
}

/// Membership in the diagonal subspace: all coordinates equal within tol.
inline bool is_diagonal_point(const std::vector<double>& x, double tol) {
    for (double v : x)
        if (std::abs(v - x.front()) > tol) return false;
    return true;
}

inline bool is_diagonal_point(const std::vector<rational>& x) {
    for (const rational& v : x)
        if (!(v == x.front())) return false;
    return true;
}

} // namespace movavg
