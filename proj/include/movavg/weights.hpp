#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <type_traits>
#include <vector>

#include "movavg/errors.hpp"
#include "movavg/rational.hpp"

namespace movavg {

namespace detail {

inline double to_double_scalar(double x) { return x; }
inline double to_double_scalar(const rational& x) { return x.to_double(); }

template <class T>
bool is_positive(const T& x) {
    return x > T(0);
}

template <class T>
T inverse_of(std::size_t d);

template <>
inline double inverse_of<double>(std::size_t d) {
    return 1.0 / static_cast<double>(d);
}

template <>
inline rational inverse_of<rational>(std::size_t d) {
    return rational(1, static_cast<long long>(d));
}

} // namespace detail

/**
 * Nonnegative averaging weights (alpha_0, ..., alpha_{m-1}) summing to one.
 *
 * The scalar type is double for numeric work or rational for the exact path.
 * Floating construction tolerates a sum deviation of 1e-12; rational
 * construction requires the sum to equal one exactly.  Immutable after
 * construction.
 */
template <class T>
class basic_weights {
public:
    explicit basic_weights(std::vector<T> alphas) : alphas_(std::move(alphas)) {
        if (alphas_.size() < 2) throw too_short_error("need at least two weights");
        T sum(0);
        for (const T& a : alphas_) {
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(a)) throw negative_weight_error("weight is not finite");
            }
            if (a < T(0)) throw negative_weight_error("weights must be nonnegative");
            sum += a;
        }
        if constexpr (std::is_same_v<T, double>) {
            if (std::abs(sum - 1.0) > 1e-12) throw sum_not_one_error(sum - 1.0);
        } else {
            if (!(sum == T(1))) throw sum_not_one_error((sum - T(1)).to_double());
        }
    }

    std::size_t m() const { return alphas_.size(); }
    const std::vector<T>& alphas() const { return alphas_; }
    const T& alpha(std::size_t i) const { return alphas_.at(i); }
    /// The wrap-around weight alpha_m := alpha_0.
    const T& alpha_m() const { return alphas_.front(); }

private:
    std::vector<T> alphas_;
};

using weights = basic_weights<double>;
using rational_weights = basic_weights<rational>;

template <class T>
weights to_double(const basic_weights<T>& w) {
    std::vector<double> a;
    a.reserve(w.m());
    for (const T& x : w.alphas()) a.push_back(detail::to_double_scalar(x));
    return weights(a);
}

/// Partial sums a_k = sum_{i<=k} alpha_i and the normalized weights
/// lambda_k = a_k / sum_i a_i that appear in every limit formula.
template <class T>
struct cumulative_weights {
    std::vector<T> a;
    std::vector<T> lambda;
};

template <class T>
cumulative_weights<T> cumulative(const basic_weights<T>& w) {
    cumulative_weights<T> out;
    out.a.reserve(w.m());
    T run(0);
    for (const T& alpha : w.alphas()) {
        run += alpha;
        out.a.push_back(run);
    }
    T total(0);
    for (const T& ak : out.a) total += ak;
    out.lambda.reserve(w.m());
    for (const T& ak : out.a) out.lambda.push_back(ak / total);
    return out;
}

/// Sufficient conditions for the unit-root dominance criterion.  Each of the
/// last three implies the first.
enum class hypothesis_condition {
    gcd_one,
    last_weight_positive,
    adjacent_pair,
    coprime_pair,
};

inline const char* to_string(hypothesis_condition c) {
    switch (c) {
        case hypothesis_condition::gcd_one: return "gcd-one";
        case hypothesis_condition::last_weight_positive: return "last-weight-positive";
        case hypothesis_condition::adjacent_pair: return "adjacent-pair";
        case hypothesis_condition::coprime_pair: return "coprime-pair";
    }
    return "?";
}

/// Indices i in {1,...,m} with alpha_{m-i} > 0.
template <class T>
std::vector<std::size_t> support_indices(const basic_weights<T>& w) {
    std::vector<std::size_t> out;
    const std::size_t m = w.m();
    for (std::size_t i = 1; i <= m; ++i)
        if (detail::is_positive(w.alpha(m - i))) out.push_back(i);
    if (out.empty()) throw degenerate_support_error("all weights are zero");
    return out;
}

template <class T>
std::vector<hypothesis_condition> satisfied_conditions(const basic_weights<T>& w) {
    const std::size_t m = w.m();
    const std::vector<std::size_t> support = support_indices(w);
    std::vector<hypothesis_condition> out;

    std::size_t g = 0;
    for (std::size_t i : support) g = std::gcd(g, i);
    if (g == 1) out.push_back(hypothesis_condition::gcd_one);

    if (detail::is_positive(w.alpha(m - 1))) out.push_back(hypothesis_condition::last_weight_positive);

    bool adjacent = false;
    for (std::size_t i = 1; i + 1 <= m && !adjacent; ++i)
        adjacent = detail::is_positive(w.alpha(m - i)) && detail::is_positive(w.alpha(m - i - 1));
    if (adjacent) out.push_back(hypothesis_condition::adjacent_pair);

    bool coprime = false;
    for (std::size_t a = 0; a < support.size() && !coprime; ++a)
        for (std::size_t b = a + 1; b < support.size() && !coprime; ++b)
            coprime = support[a] <= m - 1 && support[b] <= m - 1 &&
                      std::gcd(support[a], support[b]) == 1;
    if (coprime) out.push_back(hypothesis_condition::coprime_pair);

    return out;
}

/// Whether the gcd criterion holds, i.e. the characteristic polynomial has a
/// unique positive root, simple and equal to one, strictly dominating all
/// other root moduli.
template <class T>
bool hypothesis_holds(const basic_weights<T>& w) {
    std::size_t g = 0;
    for (std::size_t i : support_indices(w)) g = std::gcd(g, i);
    return g == 1;
}

/**
 * The limit functional: the weighted combination sum_k lambda_k y_k that the
 * moving average converges to.  Affine in the data; the result lies in the
 * convex hull of the inputs.
 */
template <class T>
std::vector<double> limit_functional(const basic_weights<T>& w,
                                     const std::vector<std::vector<double>>& y) {
    if (!hypothesis_holds(w))
        throw hypothesis_error("gcd criterion fails; closed-form limit not guaranteed");
    if (y.size() != w.m()) throw dimension_mismatch_error("need exactly m initial vectors");
    const std::size_t dim = y.front().size();
    for (const auto& v : y)
        if (v.size() != dim) throw dimension_mismatch_error("initial vectors differ in dimension");

    const cumulative_weights<T> cw = cumulative(w);
    std::vector<double> out(dim, 0.0);
    for (std::size_t k = 0; k < w.m(); ++k) {
        const double lk = detail::to_double_scalar(cw.lambda[k]);
        for (std::size_t j = 0; j < dim; ++j) out[j] += lk * y[k][j];
    }
    return out;
}

template <class T>
double limit_functional(const basic_weights<T>& w, const std::vector<double>& y) {
    std::vector<std::vector<double>> wrapped;
    wrapped.reserve(y.size());
    for (double v : y) wrapped.push_back({v});
    return limit_functional(w, wrapped).front();
}

} // namespace movavg
