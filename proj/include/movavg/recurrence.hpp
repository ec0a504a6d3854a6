#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "movavg/errors.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/**
 * Moving-average iterator over flat real vectors.  Scalars are 1-vectors and
 * matrix-valued sequences flatten to arrays, so one iterator serves all of
 * them.  Holds the m most recent terms, oldest first; single-owner mutable.
 */
class recurrence_state {
public:
    explicit recurrence_state(std::vector<std::vector<double>> initial)
        : history_(initial.begin(), initial.end()) {
        if (history_.size() < 2) throw too_short_error("need at least two initial terms");
        dim_ = history_.front().size();
        for (const auto& v : history_)
            if (v.size() != dim_) throw dimension_mismatch_error("initial terms differ in dimension");
    }

    static recurrence_state from_scalars(const std::vector<double>& initial) {
        std::vector<std::vector<double>> wrapped;
        wrapped.reserve(initial.size());
        for (double v : initial) wrapped.push_back({v});
        return recurrence_state(std::move(wrapped));
    }

    std::size_t m() const { return history_.size(); }
    std::size_t dim() const { return dim_; }
    std::size_t steps() const { return steps_; }

    /// Window of the m most recent terms, oldest first.
    const std::deque<std::vector<double>>& window() const { return history_; }

    /// Produce the next term sum_i alpha_i * (window item i), push it, evict
    /// the oldest.
    std::vector<double> step(const weights& w) {
        if (w.m() != history_.size())
            throw dimension_mismatch_error("weight count does not match window length");
        std::vector<double> next(dim_, 0.0);
        for (std::size_t i = 0; i < history_.size(); ++i) {
            const double a = w.alpha(i);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < dim_; ++j) next[j] += a * history_[i][j];
        }
        history_.pop_front();
        history_.push_back(next);
        ++steps_;
        return history_.back();
    }

    /// Sup-norm diameter of the current window; bounds the distance to the
    /// limit because every later term stays in the window's convex hull.
    double window_diameter() const {
        double d = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            double lo = history_.front()[j], hi = lo;
            for (const auto& v : history_) {
                lo = std::min(lo, v[j]);
                hi = std::max(hi, v[j]);
            }
            d = std::max(d, hi - lo);
        }
        return d;
    }

private:
    std::deque<std::vector<double>> history_;
    std::size_t dim_ = 0;
    std::size_t steps_ = 0;
};

enum class convergence_diagnosis { converged, oscillating, max_iter };

inline const char* to_string(convergence_diagnosis d) {
    switch (d) {
        case convergence_diagnosis::converged: return "converged";
        case convergence_diagnosis::oscillating: return "oscillating";
        case convergence_diagnosis::max_iter: return "max_iter";
    }
    return "?";
}

struct convergence_result {
    std::optional<std::vector<double>> limit;
    std::size_t iterations = 0;
    double final_residual = 0.0;
    convergence_diagnosis diagnosis = convergence_diagnosis::max_iter;
};

namespace detail {

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace detail

/**
 * Iterate until the window diameter drops below tol or max_iter is reached.
 * Window diameter, not successive difference: a slowly drifting sequence
 * with tiny steps must not stop early, and hull confinement makes the
 * diameter an upper bound on the distance to the limit.
 *
 * Exact short cycles (period p <= m) with a non-shrinking window are
 * diagnosed as oscillation.
 */
inline convergence_result iterate_until(recurrence_state& s, const weights& w, double tol = 1e-10,
                                        std::size_t max_iter = 100000) {
    convergence_result out;
    double scale = 1.0;
    for (const auto& v : s.window())
        for (double x : v) scale = std::max(scale, std::abs(x));
    const double cycle_eps = 1e-12 * scale;

    // trail of recent terms for cycle detection, oldest first
    std::deque<std::vector<double>> trail(s.window().begin(), s.window().end());
    const std::size_t m = s.m();
    const std::size_t trail_cap = 3 * m + 2;

    for (std::size_t iter = 0; iter <= max_iter; ++iter) {
        const double diameter = s.window_diameter();
        if (diameter < tol) {
            out.limit = s.window().back();
            out.iterations = iter;
            out.final_residual = diameter;
            out.diagnosis = convergence_diagnosis::converged;
            return out;
        }
        if (trail.size() >= 2 * m) {
            for (std::size_t p = 1; p <= m; ++p) {
                if (trail.size() < m + p) continue;
                bool cycle = true;
                for (std::size_t t = 0; t < m && cycle; ++t) {
                    const auto& late = trail[trail.size() - 1 - t];
                    const auto& early = trail[trail.size() - 1 - t - p];
                    cycle = detail::sup_diff(late, early) <= cycle_eps;
                }
                if (cycle) {
                    out.iterations = iter;
                    out.final_residual = diameter;
                    out.diagnosis = convergence_diagnosis::oscillating;
                    return out;
                }
            }
        }
        if (iter == max_iter) break;
        trail.push_back(s.step(w));
        if (trail.size() > trail_cap) trail.pop_front();
    }
    out.iterations = max_iter;
    out.final_residual = s.window_diameter();
    out.diagnosis = convergence_diagnosis::max_iter;
    return out;
}

} // namespace movavg
