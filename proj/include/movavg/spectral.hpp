#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "movavg/errors.hpp"
#include "movavg/matrix.hpp"
#include "movavg/weights.hpp"

namespace movavg {

/// Real polynomial with coefficients in ascending degree order.
struct polynomial {
    std::vector<double> coefficients;

    explicit polynomial(std::vector<double> coeffs) : coefficients(std::move(coeffs)) {
        if (coefficients.empty() || coefficients.back() == 0.0)
            throw bad_parameter_error("polynomial needs a nonzero leading coefficient");
    }

    std::size_t degree() const { return coefficients.size() - 1; }

    std::complex<double> eval(std::complex<double> x) const {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = coefficients.size(); i-- > 0;) acc = acc * x + coefficients[i];
        return acc;
    }

    std::complex<double> eval_derivative(std::complex<double> x) const {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = coefficients.size(); i-- > 1;)
            acc = acc * x + static_cast<double>(i) * coefficients[i];
        return acc;
    }

    double max_coefficient_magnitude() const {
        double v = 0.0;
        for (double c : coefficients) v = std::max(v, std::abs(c));
        return v;
    }
};

/// x^m - alpha_{m-1} x^{m-1} - ... - alpha_1 x - alpha_0, the characteristic
/// polynomial of the companion matrix.
template <class T>
polynomial characteristic_polynomial(const basic_weights<T>& w) {
    std::vector<double> coeffs(w.m() + 1);
    for (std::size_t i = 0; i < w.m(); ++i) coeffs[i] = -detail::to_double_scalar(w.alpha(i));
    coeffs[w.m()] = 1.0;
    return polynomial(std::move(coeffs));
}

struct root_entry {
    std::complex<double> value;
    int multiplicity;
};

struct root_set {
    std::vector<root_entry> roots; ///< clustered within 1e-7; counts sum to the degree
    double residual;               ///< max |p(root)| over representatives
};

namespace detail {

/// Aberth-Ehrlich simultaneous iteration on a monic deflated polynomial.
/// Initial guesses sit on a circle of radius 1 + max|coeff| with a fixed
/// angular offset; fully deterministic.
inline std::vector<std::complex<double>> aberth(const polynomial& p, double rel_tol,
                                                std::size_t max_iter, double& out_residual) {
    const std::size_t d = p.degree();
    const double scale = std::max(1.0, p.max_coefficient_magnitude());
    const double radius = 1.0 + p.max_coefficient_magnitude();

    std::vector<std::complex<double>> z(d);
    constexpr double offset = 0.3761263890318375; // breaks symmetry with real axis
    for (std::size_t k = 0; k < d; ++k) {
        double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(d) + offset;
        z[k] = std::polar(radius, theta);
    }

    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter; ++it) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            std::complex<double> pv = p.eval(z[i]);
            std::complex<double> dv = p.eval_derivative(z[i]);
            if (dv == std::complex<double>(0.0, 0.0)) {
                z[i] += std::complex<double>(1e-8, 1e-8);
                continue;
            }
            std::complex<double> newton = pv / dv;
            std::complex<double> repel(0.0, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i) continue;
                std::complex<double> diff = z[i] - z[j];
                if (diff == std::complex<double>(0.0, 0.0)) diff = std::complex<double>(1e-12, 0.0);
                repel += 1.0 / diff;
            }
            std::complex<double> denom = 1.0 - newton * repel;
            std::complex<double> step = denom == std::complex<double>(0.0, 0.0) ? newton : newton / denom;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        residual = 0.0;
        for (std::size_t i = 0; i < d; ++i) residual = std::max(residual, std::abs(p.eval(z[i])));
        if (residual <= rel_tol * scale) break;
        if (max_step <= 1e-16 * (1.0 + radius)) break;
    }
    out_residual = residual;
    return z;
}

} // namespace detail

/**
 * All complex roots of p with multiplicities.  Exact zero roots are deflated
 * first (trailing zero coefficients); the rest run through Aberth-Ehrlich
 * with a 200-iteration cap.  Roots closer than 1e-7 are clustered into one
 * entry whose multiplicity is the cluster size.
 */
inline root_set roots(const polynomial& p) {
    if (p.degree() < 1) throw bad_parameter_error("root finding needs degree >= 1");

    std::size_t zero_mult = 0;
    while (zero_mult < p.degree() && p.coefficients[zero_mult] == 0.0) ++zero_mult;

    std::vector<std::complex<double>> raw;
    double residual = 0.0;
    if (zero_mult < p.degree()) {
        std::vector<double> deflated(p.coefficients.begin() + static_cast<std::ptrdiff_t>(zero_mult),
                                     p.coefficients.end());
        for (double& c : deflated) c /= deflated.back();
        polynomial pm(std::move(deflated));
        if (pm.degree() == 1) {
            raw.push_back(std::complex<double>(-pm.coefficients[0], 0.0));
        } else {
            raw = detail::aberth(pm, 1e-12, 200, residual);
        }
    }
    for (std::size_t k = 0; k < zero_mult; ++k) raw.push_back({0.0, 0.0});

    const double scale = std::max(1.0, p.max_coefficient_magnitude());
    double full_residual = 0.0;
    for (const auto& z : raw) full_residual = std::max(full_residual, std::abs(p.eval(z)));
    if (full_residual > 1e-9 * scale) throw no_convergence_error(full_residual);

    // cluster within 1e-7 for multiplicity detection
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    root_set out;
    out.residual = 0.0;
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        std::complex<double> sum = raw[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(raw[j] - raw[i]) <= 1e-7) {
                sum += raw[j];
                ++count;
                used[j] = true;
            }
        }
        out.roots.push_back({sum / static_cast<double>(count), count});
    }
    for (const auto& r : out.roots) out.residual = std::max(out.residual, std::abs(p.eval(r.value)));
    return out;
}

/// Outcome of iterating matrix powers: either the limit, or absent with an
/// oscillation diagnostic (detected cycle period, if any).
struct power_limit_result {
    std::optional<square_matrix<double>> limit;
    std::size_t iterations = 0;
    std::optional<std::size_t> period;
    double last_delta = 0.0;

    bool converged() const { return limit.has_value(); }
};

/**
 * Limit of B^n if the power sequence settles: successive sup-norm differences
 * below tol over a confirmation window, and the candidate passing the
 * projector checks L*B = B*L = L and L*L = L within 10*tol.  Short cycles
 * (period p <= dimension) are reported as oscillation instead; absence of a
 * limit is a value, not an error.
 */
inline power_limit_result power_limit(const square_matrix<double>& B, double tol = 1e-12,
                                      std::size_t max_iter = 100000) {
    const std::size_t n = B.n();
    const std::size_t confirm = 4;
    std::deque<square_matrix<double>> history; // most recent powers, oldest first
    square_matrix<double> P = B;
    history.push_back(P);

    std::size_t streak = 0;
    double delta = 0.0;
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        square_matrix<double> next = P * B;
        delta = max_abs_diff(next, P);
        const double scale = std::max(1.0, sup_norm(next));

        if (delta < tol) {
            ++streak;
        } else {
            streak = 0;
            // a genuine cycle repeats while successive powers stay far apart
            for (std::size_t p = 1; p <= std::min(n, history.size()); ++p) {
                if (delta >= 1000.0 * tol * scale &&
                    max_abs_diff(next, history[history.size() - p]) < tol * scale) {
                    return {std::nullopt, iter, p, delta};
                }
            }
        }

        history.push_back(next);
        if (history.size() > n + 1) history.pop_front();
        P = std::move(next);

        if (streak >= confirm) {
            const double slack = 10.0 * tol * std::max(1.0, sup_norm(P));
            if (max_abs_diff(P * B, P) <= slack && max_abs_diff(B * P, P) <= slack &&
                max_abs_diff(P * P, P) <= slack) {
                return {P, iter, std::nullopt, delta};
            }
            streak = 0;
        }
    }
    return {std::nullopt, max_iter, std::nullopt, delta};
}

/// The rank-one limit x y^T / (y^T x) of a power sequence with simple
/// dominant eigenvalue one.
inline square_matrix<double> rank_one_limit(const std::vector<double>& x,
                                            const std::vector<double>& y) {
    if (x.size() != y.size()) throw dimension_mismatch_error("eigenvector lengths differ");
    double pairing = 0.0;
    double xmax = 0.0, ymax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        pairing += y[i] * x[i];
        xmax = std::max(xmax, std::abs(x[i]));
        ymax = std::max(ymax, std::abs(y[i]));
    }
    if (std::abs(pairing) <= 1e-14 * std::max(1.0, xmax * ymax))
        throw degenerate_pairing_error("y^T x vanishes; rank-one limit undefined");
    square_matrix<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) out(i, j) = x[i] * y[j] / pairing;
    return out;
}

struct root_certificate_entry {
    std::complex<double> root;
    double modulus;
    int multiplicity;
};

/// Verdict on the unit-root dominance criterion, with the sufficient
/// conditions that fired and an optional numeric root certificate.
struct hypothesis_report {
    bool holds = false;
    std::vector<hypothesis_condition> conditions;
    std::optional<std::vector<root_certificate_entry>> root_certificate;
    /// 1 - (max modulus among roots other than +1); positive margin means
    /// strict dominance.  Only meaningful when the certificate is present.
    double margin = 0.0;
    /// Set when the gcd verdict and the numeric certificate disagree; the
    /// analytic verdict is reported unchanged in that case.
    bool certificate_contradicts = false;
};

template <class T>
hypothesis_report check_basic_hypothesis(const basic_weights<T>& w, bool verify_roots = false) {
    hypothesis_report report;
    report.conditions = satisfied_conditions(w);
    report.holds = std::find(report.conditions.begin(), report.conditions.end(),
                             hypothesis_condition::gcd_one) != report.conditions.end();

    if (verify_roots) {
        const root_set rs = roots(characteristic_polynomial(w));
        std::vector<root_certificate_entry> cert;
        int unit_roots = 0;
        bool unit_simple = true;
        double max_other = 0.0;
        for (const root_entry& r : rs.roots) {
            cert.push_back({r.value, std::abs(r.value), r.multiplicity});
            if (std::abs(r.value - std::complex<double>(1.0, 0.0)) <= 1e-9) {
                ++unit_roots;
                if (r.multiplicity != 1) unit_simple = false;
            } else {
                max_other = std::max(max_other, std::abs(r.value));
            }
        }
        const bool numeric_holds = unit_roots == 1 && unit_simple && max_other < 1.0;
        report.root_certificate = std::move(cert);
        report.margin = 1.0 - max_other;
        report.certificate_contradicts = numeric_holds != report.holds;
    }
    return report;
}

} // namespace movavg
