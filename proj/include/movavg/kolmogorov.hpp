#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "movavg/errors.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/// Real interval with open or closed ends; the domain of a mean generator.
struct interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool open_lo = false;
    bool open_hi = false;

    bool contains(double x) const {
        if (!std::isfinite(x)) return false;
        if (open_lo ? x <= lo : x < lo) return false;
        if (open_hi ? x >= hi : x > hi) return false;
        return true;
    }

    static interval all_reals() { return {}; }
    static interval positive() { return {0.0, std::numeric_limits<double>::infinity(), true, false}; }
    static interval nonnegative() { return {0.0, std::numeric_limits<double>::infinity(), false, false}; }
};

/**
 * An invertible scalar map f with domain metadata; conjugating the moving
 * average by f produces the corresponding moving mean.  Custom generators are
 * accepted only after passing a 1000-point round-trip and strict-monotonicity
 * check, since injectivity and continuity of the inverse can only be tested,
 * not proved.
 */
class mean_generator {
public:
    static mean_generator identity() {
        return mean_generator("identity", [](double x) { return x; }, [](double y) { return y; },
                              interval::all_reals(), std::nullopt, false);
    }

    static mean_generator log() {
        return mean_generator("log", [](double x) { return std::log(x); },
                              [](double y) { return std::exp(y); }, interval::positive(),
                              std::nullopt, false);
    }

    /// Power map x -> x^p; domain is the nonnegative reals for p > 0 and the
    /// positive reals for p < 0 (where the map has a singularity at zero).
    static mean_generator power(double p) {
        if (p == 0.0) throw bad_parameter_error("power mean needs p != 0");
        return mean_generator("power", [p](double x) { return std::pow(x, p); },
                              [p](double y) { return std::pow(y, 1.0 / p); },
                              p > 0.0 ? interval::nonnegative() : interval::positive(), p, false);
    }

    static mean_generator reciprocal() {
        return mean_generator("reciprocal", [](double x) { return 1.0 / x; },
                              [](double y) { return 1.0 / y; }, interval::positive(), std::nullopt,
                              false);
    }

    static mean_generator custom(std::string name, std::function<double(double)> f,
                                 std::function<double(double)> f_inverse, interval domain) {
        return mean_generator(std::move(name), std::move(f), std::move(f_inverse), domain,
                              std::nullopt, true);
    }

    const std::string& name() const { return name_; }
    const interval& domain() const { return domain_; }
    std::optional<double> parameter() const { return parameter_; }

    double forward(double x) const {
        if (!domain_.contains(x))
            throw domain_violation_error(name_ + " generator: " + std::to_string(x) +
                                         " outside domain");
        return f_(x);
    }

    double inverse(double y) const { return finv_(y); }

private:
    mean_generator(std::string name, std::function<double(double)> f,
                   std::function<double(double)> finv, interval domain,
                   std::optional<double> parameter, bool validate)
        : name_(std::move(name)), f_(std::move(f)), finv_(std::move(finv)), domain_(domain),
          parameter_(parameter) {
        if (validate) validate_round_trip();
    }

    void validate_round_trip() const {
        const std::vector<double> xs = domain_samples(1000);
        double prev = 0.0;
        int direction = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double x = xs[i];
            const double y = f_(x);
            if (!std::isfinite(y))
                throw bad_parameter_error(name_ + " generator: f not finite at sample");
            const double back = finv_(y);
            if (std::abs(back - x) > 1e-10 * std::max(1.0, std::abs(x)))
                throw bad_parameter_error(name_ + " generator fails the round-trip check");
            if (i > 0) {
                if (y == prev) throw bad_parameter_error(name_ + " generator is not injective");
                const int d = y > prev ? 1 : -1;
                if (direction == 0)
                    direction = d;
                else if (d != direction)
                    throw bad_parameter_error(name_ + " generator is not monotone");
            }
            prev = y;
        }
    }

    std::vector<double> domain_samples(std::size_t count) const {
        double lo = domain_.lo, hi = domain_.hi;
        if (!std::isfinite(lo)) lo = -1e3;
        if (!std::isfinite(hi)) hi = 1e3;
        if (domain_.open_lo) lo += 1e-3 * std::max(1.0, std::abs(lo));
        if (domain_.open_hi) hi -= 1e-3 * std::max(1.0, std::abs(hi));
        std::vector<double> xs(count);
        for (std::size_t i = 0; i < count; ++i)
            xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        return xs;
    }

    std::string name_;
    std::function<double(double)> f_;
    std::function<double(double)> finv_;
    interval domain_;
    std::optional<double> parameter_;
};

enum class builtin_mean { identity, log, power, reciprocal };

inline mean_generator builtin_generator(builtin_mean kind, double parameter = 0.0) {
    switch (kind) {
        case builtin_mean::identity: return mean_generator::identity();
        case builtin_mean::log: return mean_generator::log();
        case builtin_mean::power: return mean_generator::power(parameter);
        case builtin_mean::reciprocal: return mean_generator::reciprocal();
    }
    throw bad_parameter_error("unknown generator kind");
}

inline mean_generator builtin_generator(const std::string& name, double parameter = 0.0) {
    if (name == "identity") return mean_generator::identity();
    if (name == "log") return mean_generator::log();
    if (name == "power") return mean_generator::power(parameter);
    if (name == "reciprocal") return mean_generator::reciprocal();
    throw bad_parameter_error("unknown generator '" + name + "'");
}

/// One conjugated step: f_inverse of the weighted average of f over the
/// window (oldest first).  Window values are validated eagerly; once a window
/// is valid the iterates stay valid because the range of f is convex.
inline double kolmogorov_step(const mean_generator& gen, const weights& w,
                              const std::vector<double>& window) {
    if (window.size() != w.m()) throw dimension_mismatch_error("window length must equal m");
    double acc = 0.0;
    for (std::size_t i = 0; i < window.size(); ++i) acc += w.alpha(i) * gen.forward(window[i]);
    return gen.inverse(acc);
}

/// Closed-form limit of the conjugated recurrence: f_inverse of the
/// lambda-weighted average of f over the initial window.
inline double kolmogorov_limit(const mean_generator& gen, const weights& w,
                               const std::vector<double>& initial) {
    if (initial.size() != w.m()) throw dimension_mismatch_error("need exactly m initial values");
    if (!hypothesis_holds(w))
        throw hypothesis_error("gcd criterion fails; conjugated limit not guaranteed");
    const cumulative_weights<double> cw = cumulative(w);
    double acc = 0.0;
    for (std::size_t k = 0; k < initial.size(); ++k) acc += cw.lambda[k] * gen.forward(initial[k]);
    return gen.inverse(acc);
}

} // namespace movavg
