#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "movavg/errors.hpp"
#include "movavg/piecewise_quadratic.hpp"
#include "movavg/recurrence.hpp"
#include "movavg/weights.hpp"

namespace movavg {

inline constexpr double plus_infinity = std::numeric_limits<double>::infinity();

inline constexpr double default_grid_lo = -8.0;
inline constexpr double default_grid_hi = 8.0;
inline constexpr std::size_t default_grid_n = 2001;

/**
 * Proper convex function on the line sampled on a uniform grid, with +infinity
 * as a first-class value.  Invariants checked on construction: at least one
 * finite value, infinite values only as a prefix and suffix (the effective
 * domain is an interval), no minus infinity or NaN, and discrete convexity of
 * the finite part within 1e-9 of scale.
 */
class grid_function {
public:
    grid_function(double lo, double hi, std::vector<double> values)
        : lo_(lo), hi_(hi), values_(std::move(values)) {
        if (values_.size() < 2) throw improper_function_error("need at least two grid points");
        if (!(lo_ < hi_)) throw improper_function_error("need lo < hi");

        dom_begin_ = values_.size();
        dom_end_ = 0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double v = values_[i];
            if (std::isnan(v) || v == -plus_infinity)
                throw improper_function_error("values must be finite or +infinity");
            if (std::isfinite(v)) {
                dom_begin_ = std::min(dom_begin_, i);
                dom_end_ = std::max(dom_end_, i + 1);
            }
        }
        if (dom_begin_ >= dom_end_) throw improper_function_error("function is identically +infinity");
        for (std::size_t i = dom_begin_; i < dom_end_; ++i)
            if (!std::isfinite(values_[i]))
                throw improper_function_error("effective domain must be an interval");

        double scale = 1.0;
        for (std::size_t i = dom_begin_; i < dom_end_; ++i)
            scale = std::max(scale, std::abs(values_[i]));
        for (std::size_t i = dom_begin_ + 1; i + 1 < dom_end_; ++i)
            if (values_[i - 1] + values_[i + 1] - 2.0 * values_[i] < -1e-9 * scale)
                throw improper_function_error("values are not convex at grid resolution");
    }

    template <class F>
    static grid_function sample(double lo, double hi, std::size_t n, F&& f) {
        std::vector<double> vals(n);
        for (std::size_t i = 0; i < n; ++i)
            vals[i] = f(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        return grid_function(lo, hi, std::move(vals));
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t size() const { return values_.size(); }
    double h() const { return (hi_ - lo_) / static_cast<double>(values_.size() - 1); }
    double x(std::size_t i) const {
        return lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(values_.size() - 1);
    }
    double value(std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    std::size_t domain_begin() const { return dom_begin_; }
    std::size_t domain_end() const { return dom_end_; }

    bool same_grid(const grid_function& o) const {
        return lo_ == o.lo_ && hi_ == o.hi_ && values_.size() == o.values_.size();
    }

private:
    double lo_, hi_;
    std::vector<double> values_;
    std::size_t dom_begin_, dom_end_;
};

/// Half-squared-norm samples on a grid.
inline grid_function quadratic_energy(double lo = default_grid_lo, double hi = default_grid_hi,
                                      std::size_t n = default_grid_n) {
    return grid_function::sample(lo, hi, n, [](double x) { return 0.5 * x * x; });
}

enum class conj_policy {
    brute_force, ///< O(n^2) max over all grid points
    monotone,    ///< O(n) two-pointer sweep, valid for convex inputs
};

namespace detail {

inline std::size_t conj_argmax(const grid_function& g, double s) {
    std::size_t best = g.domain_begin();
    double best_v = s * g.x(best) - g.value(best);
    for (std::size_t i = g.domain_begin() + 1; i < g.domain_end(); ++i) {
        const double v = s * g.x(i) - g.value(i);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

/// Pointwise sum with coeff * half-squared norm on finite entries.
inline std::vector<double> add_energy(const grid_function& g, double coeff) {
    std::vector<double> vals = g.values();
    for (std::size_t i = g.domain_begin(); i < g.domain_end(); ++i)
        vals[i] += coeff * 0.5 * g.x(i) * g.x(i);
    return vals;
}

/// Lower convex hull of the finite entries, in place.  Double conjugation at
/// grid resolution can dent second differences by up to h^2; the hull
/// restores a valid convex sample vector without raising any value.
inline void convexify(std::vector<double>& vals, double lo, double hi, std::size_t begin,
                      std::size_t end) {
    const std::size_t n = vals.size();
    auto xat = [&](std::size_t i) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    std::vector<std::size_t> hull;
    for (std::size_t i = begin; i < end; ++i) {
        while (hull.size() >= 2) {
            const std::size_t p = hull[hull.size() - 2], q = hull[hull.size() - 1];
            if ((vals[q] - vals[p]) * (xat(i) - xat(q)) >= (vals[i] - vals[q]) * (xat(q) - xat(p)))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const std::size_t i1 = hull[h], i2 = hull[h + 1];
        for (std::size_t i = i1 + 1; i < i2; ++i) {
            const double t = static_cast<double>(i - i1) / static_cast<double>(i2 - i1);
            vals[i] = (1.0 - t) * vals[i1] + t * vals[i2];
        }
    }
}

inline pq::pq_function to_pq(const grid_function& g) {
    std::vector<double> xs, vs;
    xs.reserve(g.domain_end() - g.domain_begin());
    vs.reserve(xs.capacity());
    for (std::size_t i = g.domain_begin(); i < g.domain_end(); ++i) {
        xs.push_back(g.x(i));
        vs.push_back(g.value(i));
    }
    return pq::pq_function::from_samples(xs, vs);
}

} // namespace detail

/**
 * Discrete Legendre-Fenchel transform: g*(s) = max over grid points y of
 * (s*y - g(y)), evaluated on a dual grid.  Points where g is +infinity drop
 * out of the max.  The monotone policy exploits that the maximizing index is
 * nondecreasing in s for convex g and must agree with brute force exactly.
 */
inline grid_function fenchel_conjugate(const grid_function& g, double dual_lo, double dual_hi,
                                       std::size_t dual_n,
                                       conj_policy policy = conj_policy::brute_force) {
    std::vector<double> out(dual_n);
    auto dual_x = [&](std::size_t j) {
        return dual_lo + (dual_hi - dual_lo) * static_cast<double>(j) / static_cast<double>(dual_n - 1);
    };
    if (policy == conj_policy::brute_force) {
        for (std::size_t j = 0; j < dual_n; ++j) {
            const double s = dual_x(j);
            const std::size_t i = detail::conj_argmax(g, s);
            out[j] = s * g.x(i) - g.value(i);
        }
    } else {
        std::size_t i = g.domain_begin();
        for (std::size_t j = 0; j < dual_n; ++j) {
            const double s = dual_x(j);
            while (i + 1 < g.domain_end() &&
                   s * g.x(i + 1) - g.value(i + 1) >= s * g.x(i) - g.value(i))
                ++i;
            out[j] = s * g.x(i) - g.value(i);
        }
    }
    return grid_function(dual_lo, dual_hi, std::move(out));
}

inline grid_function fenchel_conjugate(const grid_function& g,
                                       conj_policy policy = conj_policy::brute_force) {
    return fenchel_conjugate(g, g.lo(), g.hi(), g.size(), policy);
}

/**
 * Moreau envelope at grid resolution: pointwise min over grid points y of
 * g(y) + (x-y)^2/2.  Finite everywhere on the grid, convex, below g.
 */
inline grid_function moreau_envelope(const grid_function& g,
                                     conj_policy policy = conj_policy::brute_force) {
    const std::size_t n = g.size();
    std::vector<double> out(n);
    if (policy == conj_policy::brute_force) {
        for (std::size_t k = 0; k < n; ++k) {
            const double xk = g.x(k);
            double best = plus_infinity;
            for (std::size_t i = g.domain_begin(); i < g.domain_end(); ++i) {
                const double d = xk - g.x(i);
                best = std::min(best, g.value(i) + 0.5 * d * d);
            }
            out[k] = best;
        }
    } else {
        // the minimizing index is nondecreasing in x for convex g
        std::size_t i = g.domain_begin();
        for (std::size_t k = 0; k < n; ++k) {
            const double xk = g.x(k);
            auto obj = [&](std::size_t idx) {
                const double d = xk - g.x(idx);
                return g.value(idx) + 0.5 * d * d;
            };
            while (i + 1 < g.domain_end() && obj(i + 1) <= obj(i)) ++i;
            out[k] = obj(i);
        }
    }
    return grid_function(g.lo(), g.hi(), std::move(out));
}

/**
 * Weighted proximal average (sum_k w_k (g_k + q)*)* - q computed with two
 * grid conjugations on the shared grid.
 */
inline grid_function proximal_average(const std::vector<double>& w,
                                      const std::vector<grid_function>& gs) {
    if (w.size() != gs.size() || gs.empty())
        throw improper_function_error("need matching weights and functions");
    double sum = 0.0;
    for (double c : w) {
        if (c < 0.0) throw negative_scale_error("proximal average needs nonnegative weights");
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw sum_not_one_error(sum - 1.0);
    for (const auto& g : gs)
        if (!g.same_grid(gs.front())) throw dimension_mismatch_error("functions on different grids");

    const grid_function& g0 = gs.front();
    std::vector<double> S(g0.size(), 0.0);
    for (std::size_t k = 0; k < gs.size(); ++k) {
        if (w[k] == 0.0) continue;
        const grid_function shifted(g0.lo(), g0.hi(), detail::add_energy(gs[k], +1.0));
        const grid_function phi = fenchel_conjugate(shifted);
        for (std::size_t j = 0; j < S.size(); ++j) S[j] += w[k] * phi.value(j);
    }
    const grid_function Sg(g0.lo(), g0.hi(), std::move(S));
    grid_function outer = fenchel_conjugate(Sg);
    std::vector<double> vals = detail::add_energy(outer, -1.0);
    detail::convexify(vals, g0.lo(), g0.hi(), 0, vals.size());
    return grid_function(g0.lo(), g0.hi(), std::move(vals));
}

/// Window of the m most recent iterates (oldest first) plus the weights.
struct prox_avg_state {
    std::vector<grid_function> window;
    weights w;

    prox_avg_state(std::vector<grid_function> window_, weights w_)
        : window(std::move(window_)), w(std::move(w_)) {
        if (window.size() != w.m()) throw dimension_mismatch_error("window length must equal m");
        for (const auto& g : window)
            if (!g.same_grid(window.front()))
                throw dimension_mismatch_error("window functions on different grids");
    }
};

struct prox_avg_run {
    std::vector<grid_function> iterates;     ///< newly produced terms
    std::vector<double> envelope_residuals;  ///< per-step sup-norm defect of the
                                             ///< envelope recursion
};

/**
 * Moving proximal average g_n = (sum_i alpha_i (g_{n-m+i} + q)*)* - q.
 *
 * The iteration runs on exact piecewise-quadratic representations: sampled
 * double conjugation dents each step by O(h^2), which would swamp the
 * envelope identity it is supposed to exhibit.  Every step recomputes the
 * envelopes of the new iterate and of the window through fresh conjugations
 * and records the sup-norm defect of
 *     env(g_n) = sum_i alpha_i env(g_{n-m+i}),
 * which must sit at roundoff level.  Iterates are returned as grid samples.
 */
inline prox_avg_run moving_proximal_average(prox_avg_state& state, std::size_t steps) {
    if (steps == 0) return {};
    const grid_function& ref = state.window.front();
    const double lo = ref.lo(), hi = ref.hi();
    const std::size_t n = ref.size();

    std::vector<double> qv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        qv[i] = 0.5 * x * x;
    }

    std::vector<pq::pq_function> window;
    window.reserve(state.window.size());
    for (const auto& g : state.window) window.push_back(detail::to_pq(g));

    auto envelope_of = [&](const pq::pq_function& g) {
        pq::pq_function shifted = g;
        shifted.add_quadratic(+1.0);
        const std::vector<double> phi = conjugate(shifted).sample(lo, hi, n);
        std::vector<double> env(n);
        for (std::size_t i = 0; i < n; ++i) env[i] = qv[i] - phi[i];
        return env;
    };

    prox_avg_run run;
    const std::vector<double>& alphas = state.w.alphas();
    for (std::size_t step = 0; step < steps; ++step) {
        std::vector<pq::pq_function> phis;
        phis.reserve(window.size());
        for (const auto& g : window) {
            pq::pq_function shifted = g;
            shifted.add_quadratic(+1.0);
            phis.push_back(conjugate(shifted));
        }
        std::vector<const pq::pq_function*> ptrs;
        for (const auto& p : phis) ptrs.push_back(&p);
        const pq::pq_function S = pq::combine(alphas, ptrs);
        pq::pq_function next = conjugate(S);
        next.add_quadratic(-1.0);

        const std::vector<double> env_next = envelope_of(next);
        std::vector<double> rhs(n, 0.0);
        for (std::size_t k = 0; k < window.size(); ++k) {
            const std::vector<double> env_k = envelope_of(window[k]);
            for (std::size_t i = 0; i < n; ++i) rhs[i] += alphas[k] * env_k[i];
        }
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(env_next[i] - rhs[i]));
        run.envelope_residuals.push_back(resid);

        run.iterates.emplace_back(lo, hi, next.sample(lo, hi, n));
        window.erase(window.begin());
        window.push_back(std::move(next));
    }

    std::vector<grid_function> new_window;
    for (const auto& g : window) new_window.emplace_back(lo, hi, g.sample(lo, hi, n));
    state.window = std::move(new_window);
    return run;
}

/**
 * Epi-scaling alpha * g(x / alpha) resampled on the same grid via linear
 * interpolation; scaling by zero collapses to the indicator of the grid
 * point nearest the origin.
 */
inline grid_function epi_scale(double alpha, const grid_function& g) {
    if (alpha < 0.0) throw negative_scale_error("epi-scaling needs alpha >= 0");
    const std::size_t n = g.size();
    if (alpha == 0.0) {
        std::vector<double> vals(n, plus_infinity);
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(g.x(i)) < std::abs(g.x(nearest))) nearest = i;
        vals[nearest] = 0.0;
        return grid_function(g.lo(), g.hi(), std::move(vals));
    }
    const double dlo = g.x(g.domain_begin());
    const double dhi = g.x(g.domain_end() - 1);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = g.x(i) / alpha;
        if (y < dlo || y > dhi) {
            vals[i] = plus_infinity;
            continue;
        }
        const double pos = std::clamp((y - g.lo()) / g.h(), static_cast<double>(g.domain_begin()),
                                      static_cast<double>(g.domain_end() - 1));
        std::size_t i0 = static_cast<std::size_t>(std::floor(pos));
        double t = pos - static_cast<double>(i0);
        if (i0 + 1 >= g.domain_end()) {
            i0 = g.domain_end() - 1;
            t = 0.0;
        }
        const double v = t == 0.0 ? g.value(i0)
                                  : (1.0 - t) * g.value(i0) + t * g.value(i0 + 1);
        vals[i] = alpha * v;
    }
    return grid_function(g.lo(), g.hi(), std::move(vals));
}

/// Saturation probe for the cofiniteness surrogate: the conjugate must be
/// finite on the dual grid and its maximizer must leave the grid edge before
/// the dual boundary.
inline bool is_cofinite_surrogate(const grid_function& g) {
    const std::size_t n = g.size();
    const std::size_t hi_arg = detail::conj_argmax(g, g.x(n - 2));
    const std::size_t lo_arg = detail::conj_argmax(g, g.x(1));
    const bool saturated_hi = hi_arg == n - 1 && g.domain_end() == n && g.domain_begin() != n - 1;
    const bool saturated_lo = lo_arg == 0 && g.domain_begin() == 0 && g.domain_end() != 1;
    return !saturated_hi && !saturated_lo;
}

struct epi_avg_result {
    std::vector<grid_function> conjugate_iterates; ///< g_n* on the dual grid
    grid_function limit_conjugate;                 ///< sum_k lambda_k g_k*
    grid_function limit;                           ///< conjugated back to the primal grid
};

/**
 * Moving epi-average via its conjugate identity: conjugates follow the plain
 * linear recurrence g_n* = sum_i alpha_i g_{n-m+i}*, run bit-for-bit through
 * the recurrence iterator on the conjugate value vectors.  Primal iterates
 * are recovered by conjugating back on demand.  Inputs must pass the
 * cofiniteness surrogate; the limit requires the gcd criterion.
 */
inline epi_avg_result moving_epi_average(const weights& w, const std::vector<grid_function>& initial,
                                         std::size_t steps) {
    if (initial.size() != w.m()) throw dimension_mismatch_error("need exactly m initial functions");
    for (const auto& g : initial) {
        if (!g.same_grid(initial.front())) throw dimension_mismatch_error("functions on different grids");
        if (!is_cofinite_surrogate(g))
            throw not_cofinite_error("conjugate saturates at the dual boundary");
    }
    if (!hypothesis_holds(w))
        throw hypothesis_error("gcd criterion fails; epi-limit not guaranteed");

    const grid_function& ref = initial.front();
    std::vector<std::vector<double>> conj_vectors;
    conj_vectors.reserve(initial.size());
    for (const auto& g : initial) conj_vectors.push_back(fenchel_conjugate(g).values());

    const std::vector<double> limit_vec = limit_functional(w, conj_vectors);

    recurrence_state state(std::move(conj_vectors));
    std::vector<grid_function> iterates;
    iterates.reserve(steps);
    for (std::size_t s = 0; s < steps; ++s)
        iterates.emplace_back(ref.lo(), ref.hi(), state.step(w));

    grid_function limit_conjugate(ref.lo(), ref.hi(), limit_vec);
    grid_function limit = fenchel_conjugate(limit_conjugate);
    return {std::move(iterates), std::move(limit_conjugate), std::move(limit)};
}

/**
 * Envelope criterion for epi-convergence: the tail of the sequence (the last
 * three terms here) must have envelopes within tol of the target's envelope
 * in sup norm.
 */
inline bool epi_converged(const std::vector<grid_function>& seq, const grid_function& g, double tol) {
    if (seq.empty()) return false;
    const grid_function target_env = moreau_envelope(g);
    const std::size_t tail = std::min<std::size_t>(3, seq.size());
    for (std::size_t k = seq.size() - tail; k < seq.size(); ++k) {
        if (!seq[k].same_grid(g)) throw dimension_mismatch_error("sequence and target grids differ");
        const grid_function e = moreau_envelope(seq[k]);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (std::abs(e.value(i) - target_env.value(i)) >= tol) return false;
    }
    return true;
}

} // namespace movavg
