#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "movavg/errors.hpp"
#include "movavg/recurrence.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/**
 * Symmetric positive definite matrix.  Symmetry is checked entrywise at
 * 1e-12 and definiteness by attempting a Cholesky factorization; failure of
 * the factorization is the definition of leaving the cone.
 */
class spd_matrix {
public:
    spd_matrix(std::size_t n, std::vector<double> entries) : n_(n), e_(std::move(entries)) {
        if (e_.size() != n_ * n_) throw dimension_mismatch_error("entry count must be n*n");
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > 1e-12)
                    throw not_spd_error("matrix is not symmetric");
        cholesky(); // throws not_spd_error if not positive definite
    }

    static spd_matrix identity(std::size_t n) {
        std::vector<double> e(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
        return spd_matrix(n, std::move(e));
    }

    std::size_t n() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    const std::vector<double>& entries() const { return e_; }

    /// Lower Cholesky factor.
    std::vector<double> cholesky() const {
        std::vector<double> L(n_ * n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = (*this)(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= L[i * n_ + k] * L[j * n_ + k];
                if (i == j) {
                    if (s <= 0.0) throw not_spd_error("matrix is not positive definite");
                    L[i * n_ + i] = std::sqrt(s);
                } else {
                    L[i * n_ + j] = s / L[j * n_ + j];
                }
            }
        }
        return L;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : e_) s += v * v;
        return std::sqrt(s);
    }

private:
    std::size_t n_;
    std::vector<double> e_;
};

inline double frobenius_distance(const spd_matrix& a, const spd_matrix& b) {
    if (a.n() != b.n()) throw dimension_mismatch_error("dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        const double d = a.entries()[i] - b.entries()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Inverse through the Cholesky factor; throws near_singular_error when the
/// Frobenius condition estimate exceeds 1e14.
inline spd_matrix spd_inverse(const spd_matrix& M) {
    const std::size_t n = M.n();
    const std::vector<double> L = M.cholesky();

    // solve L L^T X = I column by column
    std::vector<double> X(n * n, 0.0);
    std::vector<double> y(n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = i == col ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * y[k];
            y[i] = s / L[i * n + i];
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = y[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= L[k * n + i] * X[k * n + col];
            X[i * n + col] = s / L[i * n + i];
        }
    }
    // symmetrize roundoff
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (X[i * n + j] + X[j * n + i]);
            X[i * n + j] = X[j * n + i] = v;
        }
    spd_matrix inv(n, std::move(X));
    if (M.frobenius_norm() * inv.frobenius_norm() > 1e14)
        throw near_singular_error("condition estimate exceeds 1e14");
    return inv;
}

enum class matrix_mean_kind { arithmetic, harmonic, resolvent };

inline const char* to_string(matrix_mean_kind k) {
    switch (k) {
        case matrix_mean_kind::arithmetic: return "arithmetic";
        case matrix_mean_kind::harmonic: return "harmonic";
        case matrix_mean_kind::resolvent: return "resolvent";
    }
    return "?";
}

struct matrix_mean_result {
    std::vector<spd_matrix> iterates; ///< terms produced after the initial window
    spd_matrix limit;                 ///< lambda-weighted closed form
    convergence_result convergence;   ///< from the iterated recursion
};

namespace detail {

inline spd_matrix weighted_sum(const std::vector<double>& coeffs,
                               const std::vector<spd_matrix>& ms) {
    const std::size_t n = ms.front().n();
    std::vector<double> acc(n * n, 0.0);
    for (std::size_t k = 0; k < ms.size(); ++k)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeffs[k] * ms[k].entries()[i];
    return spd_matrix(n, std::move(acc));
}

inline spd_matrix shift_by_identity(const spd_matrix& M, double sign) {
    std::vector<double> e = M.entries();
    for (std::size_t i = 0; i < M.n(); ++i) e[i * M.n() + i] += sign;
    return spd_matrix(M.n(), std::move(e));
}

/// f(Y) for the conjugated kinds; arithmetic is the identity map.
inline spd_matrix mean_forward(matrix_mean_kind kind, const spd_matrix& Y) {
    switch (kind) {
        case matrix_mean_kind::arithmetic: return Y;
        case matrix_mean_kind::harmonic: return spd_inverse(Y);
        case matrix_mean_kind::resolvent: return spd_inverse(shift_by_identity(Y, +1.0));
    }
    throw bad_parameter_error("unknown mean kind");
}

inline spd_matrix mean_backward(matrix_mean_kind kind, const spd_matrix& Z) {
    switch (kind) {
        case matrix_mean_kind::arithmetic: return Z;
        case matrix_mean_kind::harmonic: return spd_inverse(Z);
        case matrix_mean_kind::resolvent: return shift_by_identity(spd_inverse(Z), -1.0);
    }
    throw bad_parameter_error("unknown mean kind");
}

} // namespace detail

/**
 * Moving arithmetic, harmonic, or resolvent mean of SPD matrices.
 *
 * The arithmetic kind runs the linear recurrence on flattened entries; the
 * other kinds run the conjugated iteration Y_n = f^{-1}(sum_i alpha_i f(Y_i))
 * with f the matrix inverse or the shifted resolvent map.  Every iterate is
 * revalidated against the SPD cone.  The reported limit is the lambda-weighted
 * closed form f^{-1}(sum_k lambda_k f(Y_k)).
 */
inline matrix_mean_result moving_matrix_mean(matrix_mean_kind kind, const weights& w,
                                             const std::vector<spd_matrix>& initial,
                                             double tol = 1e-10, std::size_t max_iter = 100000) {
    if (initial.size() != w.m()) throw dimension_mismatch_error("need exactly m initial matrices");
    const std::size_t n = initial.front().n();
    for (const auto& Y : initial)
        if (Y.n() != n) throw dimension_mismatch_error("initial matrices differ in dimension");
    if (!hypothesis_holds(w))
        throw hypothesis_error("gcd criterion fails; moving mean need not converge");

    const cumulative_weights<double> cw = cumulative(w);

    // closed-form limit in the conjugate domain
    std::vector<spd_matrix> f_initial;
    f_initial.reserve(initial.size());
    for (const auto& Y : initial) f_initial.push_back(detail::mean_forward(kind, Y));
    spd_matrix limit = detail::mean_backward(kind, detail::weighted_sum(cw.lambda, f_initial));

    // iterate in the conjugate domain through the flat-vector recurrence,
    // materializing and cone-checking each term
    std::vector<std::vector<double>> flat;
    flat.reserve(f_initial.size());
    for (const auto& Z : f_initial) flat.push_back(Z.entries());
    recurrence_state state(std::move(flat));

    matrix_mean_result out{{}, limit, {}};
    for (std::size_t iter = 0;; ++iter) {
        if (state.window_diameter() < tol) {
            out.convergence.limit =
                detail::mean_backward(kind, spd_matrix(n, state.window().back())).entries();
            out.convergence.iterations = iter;
            out.convergence.final_residual = state.window_diameter();
            out.convergence.diagnosis = convergence_diagnosis::converged;
            break;
        }
        if (iter >= max_iter) {
            out.convergence.iterations = max_iter;
            out.convergence.final_residual = state.window_diameter();
            out.convergence.diagnosis = convergence_diagnosis::max_iter;
            break;
        }
        std::vector<double> z = state.step(w);
        out.iterates.push_back(detail::mean_backward(kind, spd_matrix(n, std::move(z))));
    }
    return out;
}

} // namespace movavg
