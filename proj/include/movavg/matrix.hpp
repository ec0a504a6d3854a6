#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "movavg/errors.hpp"
#include "movavg/rational.hpp"

namespace movavg {

/**
 * Dense square matrix with row-major storage and value semantics.
 *
 * The scalar type is double on the numeric path and rational on the exact
 * path used for structural identities.  Dimensions here are small (m up to
 * ~100), so no sparse or blocked machinery.
 */
template <class T>
class square_matrix {
public:
    square_matrix() : n_(0) {}
    explicit square_matrix(std::size_t n, const T& fill = T(0)) : n_(n), data_(n * n, fill) {}

    static square_matrix identity(std::size_t n) {
        square_matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t n() const { return n_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    const std::vector<T>& data() const { return data_; }

    friend square_matrix operator*(const square_matrix& x, const square_matrix& y) {
        if (x.n_ != y.n_) throw dimension_mismatch_error("matrix product dimension mismatch");
        square_matrix out(x.n_);
        for (std::size_t i = 0; i < x.n_; ++i)
            for (std::size_t k = 0; k < x.n_; ++k) {
                const T& xik = x(i, k);
                if (xik == T(0)) continue;
                for (std::size_t j = 0; j < x.n_; ++j) out(i, j) += xik * y(k, j);
            }
        return out;
    }

    friend square_matrix operator+(const square_matrix& x, const square_matrix& y) {
        if (x.n_ != y.n_) throw dimension_mismatch_error("matrix sum dimension mismatch");
        square_matrix out(x.n_);
        for (std::size_t i = 0; i < x.data_.size(); ++i) out.data_[i] = x.data_[i] + y.data_[i];
        return out;
    }

    friend square_matrix operator-(const square_matrix& x, const square_matrix& y) {
        if (x.n_ != y.n_) throw dimension_mismatch_error("matrix difference dimension mismatch");
        square_matrix out(x.n_);
        for (std::size_t i = 0; i < x.data_.size(); ++i) out.data_[i] = x.data_[i] - y.data_[i];
        return out;
    }

    friend square_matrix operator*(const T& c, const square_matrix& x) {
        square_matrix out(x.n_);
        for (std::size_t i = 0; i < x.data_.size(); ++i) out.data_[i] = c * x.data_[i];
        return out;
    }

    friend bool operator==(const square_matrix& x, const square_matrix& y) {
        return x.n_ == y.n_ && x.data_ == y.data_;
    }

    square_matrix transpose() const {
        square_matrix out(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (x.size() != n_) throw dimension_mismatch_error("matrix-vector dimension mismatch");
        std::vector<T> out(n_, T(0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * x[j];
        return out;
    }

private:
    std::size_t n_;
    std::vector<T> data_;
};

/// k-th power by repeated squaring.
template <class T>
square_matrix<T> matrix_power(square_matrix<T> base, unsigned long long k) {
    square_matrix<T> out = square_matrix<T>::identity(base.n());
    while (k > 0) {
        if (k & 1ull) out = out * base;
        base = base * base;
        k >>= 1ull;
    }
    return out;
}

inline double sup_norm(const square_matrix<double>& m) {
    double v = 0.0;
    for (double x : m.data()) v = std::max(v, std::abs(x));
    return v;
}

inline double max_abs_diff(const square_matrix<double>& x, const square_matrix<double>& y) {
    return sup_norm(x - y);
}

inline rational max_abs_diff(const square_matrix<rational>& x, const square_matrix<rational>& y) {
    rational v(0);
    square_matrix<rational> d = x - y;
    for (const rational& e : d.data()) v = std::max(v, abs(e));
    return v;
}

/// Row-stochastic check: nonnegative entries, unit row sums.
inline bool is_stochastic(const square_matrix<double>& m, double tol = 1e-12) {
    for (std::size_t i = 0; i < m.n(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.n(); ++j) {
            if (m(i, j) < -tol) return false;
            s += m(i, j);
        }
        if (std::abs(s - 1.0) > tol) return false;
    }
    return true;
}

inline bool is_stochastic(const square_matrix<rational>& m) {
    for (std::size_t i = 0; i < m.n(); ++i) {
        rational s(0);
        for (std::size_t j = 0; j < m.n(); ++j) {
            if (m(i, j) < rational(0)) return false;
            s += m(i, j);
        }
        if (!(s == rational(1))) return false;
    }
    return true;
}

template <class T>
square_matrix<double> to_double(const square_matrix<T>& m) {
    square_matrix<double> out(m.n());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) {
            if constexpr (std::is_same_v<T, double>)
                out(i, j) = m(i, j);
            else
                out(i, j) = m(i, j).to_double();
        }
    return out;
}

} // namespace movavg
