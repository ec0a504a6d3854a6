#pragma once

#include <stdexcept>
#include <string>

namespace movavg {

/// Base class for all errors thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- weight construction --------------------------------------------------

struct negative_weight_error : error {
    using error::error;
};

struct sum_not_one_error : error {
    double deviation;
    explicit sum_not_one_error(double dev)
        : error("weights do not sum to one (deviation " + std::to_string(dev) + ")"),
          deviation(dev) {}
};

struct too_short_error : error {
    using error::error;
};

/// The support index set is empty, which cannot happen for weights that sum
/// to one; raised to surface construction bugs.
struct degenerate_support_error : error {
    using error::error;
};

// -- spectral / limits -----------------------------------------------------

struct no_convergence_error : error {
    double residual;
    explicit no_convergence_error(double res)
        : error("root iteration hit its cap (best residual " + std::to_string(res) + ")"),
          residual(res) {}
};

struct degenerate_pairing_error : error {
    using error::error;
};

/// The gcd criterion fails, so the closed-form limit is not guaranteed.
struct hypothesis_error : error {
    using error::error;
};

// -- recurrence / means ----------------------------------------------------

struct dimension_mismatch_error : error {
    using error::error;
};

struct index_error : error {
    using error::error;
};

struct bad_parameter_error : error {
    using error::error;
};

struct domain_violation_error : error {
    using error::error;
};

struct near_singular_error : error {
    using error::error;
};

struct not_spd_error : error {
    using error::error;
};

// -- convex functions -------------------------------------------------------

struct improper_function_error : error {
    using error::error;
};

struct not_cofinite_error : error {
    using error::error;
};

struct negative_scale_error : error {
    using error::error;
};

} // namespace movavg
