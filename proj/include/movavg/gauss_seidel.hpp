#pragma once

#include <cstddef>
#include <vector>

#include "movavg/companion.hpp"
#include "movavg/matrix.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/// Cyclic right-shift permutation matrix.
template <class T>
square_matrix<T> right_shift(std::size_t m) {
    square_matrix<T> R(m);
    R(0, m - 1) = T(1);
    for (std::size_t i = 1; i < m; ++i) R(i, i - 1) = T(1);
    return R;
}

/// Cyclic left-shift permutation matrix, the transpose and inverse of the
/// right shift.
template <class T>
square_matrix<T> left_shift(std::size_t m) {
    square_matrix<T> L(m);
    for (std::size_t i = 0; i + 1 < m; ++i) L(i, i + 1) = T(1);
    L(m - 1, 0) = T(1);
    return L;
}

/**
 * Single-row update matrix T_k (1-based k): identity except row k, which
 * carries the cyclically rotated weights.  Entrywise, row k holds
 * alpha_{m-k+j} for columns j < k and alpha_{j-k} for columns j >= k.
 */
template <class T>
square_matrix<T> build_Tk(const basic_weights<T>& w, std::size_t k) {
    const std::size_t m = w.m();
    if (k < 1 || k > m) throw index_error("k must lie in 1..m");
    square_matrix<T> Tk = square_matrix<T>::identity(m);
    for (std::size_t j = 1; j <= m; ++j) {
        Tk(k - 1, j - 1) = j < k ? w.alpha(m - k + j) : w.alpha(j - k);
    }
    return Tk;
}

/// Full sweep T = T_m * ... * T_1, equal to the m-th companion power.
template <class T>
square_matrix<T> build_T(const basic_weights<T>& w) {
    const std::size_t m = w.m();
    square_matrix<T> out = build_Tk(w, 1);
    for (std::size_t k = 2; k <= m; ++k) out = build_Tk(w, k) * out;
    return out;
}

template <class T>
struct shift_identity_report {
    T tk_residual;      ///< max over k of max |T_k - R^k A L^{k-1}|
    T partial_residual; ///< max over k of max |T_k...T_1 - R^k A^k|
};

/// Deviations of the shift-conjugation identities; zero exactly on rationals.
template <class T>
shift_identity_report<T> shift_identities(const basic_weights<T>& w) {
    const std::size_t m = w.m();
    const square_matrix<T> A = build_companion(w);
    const square_matrix<T> R = right_shift<T>(m);
    const square_matrix<T> L = left_shift<T>(m);

    shift_identity_report<T> out{T(0), T(0)};
    square_matrix<T> Rk = R;                          // R^k
    square_matrix<T> Ak = A;                          // A^k
    square_matrix<T> Lk1 = square_matrix<T>::identity(m); // L^{k-1}
    square_matrix<T> partial = build_Tk(w, 1);        // T_k ... T_1
    for (std::size_t k = 1; k <= m; ++k) {
        if (k > 1) {
            Rk = R * Rk;
            Ak = A * Ak;
            Lk1 = L * Lk1;
            partial = build_Tk(w, k) * partial;
        }
        out.tk_residual = std::max(out.tk_residual, max_abs_diff(build_Tk(w, k), Rk * A * Lk1));
        out.partial_residual = std::max(out.partial_residual, max_abs_diff(partial, Rk * Ak));
    }
    return out;
}

/// Limit of the sweep powers T^n; identical to the companion power limit.
template <class T>
square_matrix<T> t_limit(const basic_weights<T>& w) {
    return companion_limit(w);
}

namespace detail {

template <class T>
T scalar_pow(T base, unsigned e) {
    T out(1);
    while (e > 0) {
        if (e & 1u) out *= base;
        base *= base;
        e >>= 1u;
    }
    return out;
}

} // namespace detail

/// The distinguished weight vector (0, 1/(m-1), ..., 1/(m-1)).
template <class T>
basic_weights<T> special_weights(std::size_t m) {
    if (m < 2) throw too_short_error("need m >= 2");
    std::vector<T> alphas(m, detail::inverse_of<T>(m - 1));
    alphas[0] = T(0);
    return basic_weights<T>(alphas);
}

/**
 * Closed form of the full sweep for the special weights, with
 * gamma = 1/(m-1): entry (i,j) is gamma (1+gamma)^{i-1} above the diagonal
 * and gamma (1+gamma)^{i-1} - gamma (1+gamma)^{i-j} on or below it.
 */
template <class T>
square_matrix<T> closed_form_T_special(std::size_t m) {
    if (m < 2) throw too_short_error("need m >= 2");
    const T gamma = detail::inverse_of<T>(m - 1);
    const T growth = T(1) + gamma;
    square_matrix<T> Tt(m);
    for (std::size_t i = 1; i <= m; ++i) {
        const T lead = gamma * detail::scalar_pow(growth, static_cast<unsigned>(i - 1));
        for (std::size_t j = 1; j <= m; ++j) {
            if (i < j)
                Tt(i - 1, j - 1) = lead;
            else
                Tt(i - 1, j - 1) = lead - gamma * detail::scalar_pow(growth, static_cast<unsigned>(i - j));
        }
    }
    return Tt;
}

/// Closed form of the partial product T_k ... T_1 for the special weights:
/// the first k rows of the full-sweep closed form over identity rows.
template <class T>
square_matrix<T> closed_form_partial(std::size_t m, std::size_t k) {
    if (k < 1 || k > m) throw index_error("k must lie in 1..m");
    const square_matrix<T> Tt = closed_form_T_special<T>(m);
    square_matrix<T> out(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            out(i, j) = i < k ? Tt(i, j) : (i == j ? T(1) : T(0));
    return out;
}

/// Closed form of the k-th companion power for the special weights: a shift
/// block stacked over the first k rows of the full-sweep closed form.
template <class T>
square_matrix<T> closed_form_companion_power(std::size_t m, std::size_t k) {
    if (k < 1 || k > m) throw index_error("k must lie in 1..m");
    const square_matrix<T> Tt = closed_form_T_special<T>(m);
    square_matrix<T> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (i < m - k) {
            out(i, i + k) = T(1);
        } else {
            for (std::size_t j = 0; j < m; ++j) out(i, j) = Tt(i + k - m, j);
        }
    }
    return out;
}

} // namespace movavg
