#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "movavg/errors.hpp"

namespace movavg::pq {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// One quadratic piece: x -> 0.5*a*x^2 + b*x + c with a >= 0.
struct piece {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double value(double x) const { return 0.5 * a * x * x + b * x + c; }
    double slope(double x) const { return a * x + b; }
};

/**
 * Convex piecewise-quadratic function on an interval (possibly all of the
 * line), +infinity outside.  Closed under adding or subtracting the
 * half-squared norm, convex combination, and Legendre conjugation, all in
 * closed form per piece; the proximal-average pipeline runs entirely inside
 * this class, so its envelope identities hold to floating-point roundoff
 * rather than grid resolution.
 *
 * Degenerate single-point domains (indicator plus a constant) are carried as
 * an explicit special case.
 */
class pq_function {
public:
    /// PL lower hull of finitely many sample points (xs ascending).
    static pq_function from_samples(const std::vector<double>& xs, const std::vector<double>& vs) {
        if (xs.size() != vs.size() || xs.empty())
            throw improper_function_error("need matching nonempty samples");
        if (xs.size() == 1) return point(xs[0], vs[0]);

        std::vector<std::size_t> hull;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            while (hull.size() >= 2) {
                const std::size_t p = hull[hull.size() - 2], q = hull[hull.size() - 1];
                const double lhs = (vs[q] - vs[p]) * (xs[i] - xs[q]);
                const double rhs = (vs[i] - vs[q]) * (xs[q] - xs[p]);
                if (lhs >= rhs)
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(i);
        }

        pq_function f;
        if (hull.size() == 1) return point(xs[hull[0]], vs[hull[0]]);
        f.knots_.reserve(hull.size());
        f.pieces_.reserve(hull.size() - 1);
        for (std::size_t h = 0; h < hull.size(); ++h) f.knots_.push_back(xs[hull[h]]);
        for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
            const double x1 = xs[hull[h]], x2 = xs[hull[h + 1]];
            const double v1 = vs[hull[h]], v2 = vs[hull[h + 1]];
            const double slope = (v2 - v1) / (x2 - x1);
            f.pieces_.push_back({0.0, slope, v1 - slope * x1});
        }
        return f;
    }

    static pq_function point(double x, double v) {
        pq_function f;
        f.knots_ = {x};
        f.point_value_ = v;
        return f;
    }

    static pq_function from_pieces(std::vector<double> knots, std::vector<piece> pieces) {
        pq_function f;
        f.knots_ = std::move(knots);
        f.pieces_ = std::move(pieces);
        return f;
    }

    bool is_point() const { return pieces_.empty(); }
    double domain_lo() const { return knots_.front(); }
    double domain_hi() const { return knots_.back(); }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<piece>& pieces() const { return pieces_; }

    double operator()(double x) const {
        if (is_point()) return x == knots_.front() ? point_value_ : inf;
        if (x < knots_.front() || x > knots_.back()) return inf;
        return pieces_[piece_index(x)].value(x);
    }

    /// Add coeff * (half-squared norm).  Negative coefficients may leave
    /// roundoff-sized negative curvature, which is clamped at 1e-9.
    pq_function& add_quadratic(double coeff) {
        if (is_point()) {
            point_value_ += coeff * 0.5 * knots_.front() * knots_.front();
            return *this;
        }
        for (piece& p : pieces_) {
            p.a += coeff;
            if (p.a < 0.0) {
                if (p.a < -1e-9) throw improper_function_error("curvature went negative");
                p.a = 0.0;
            }
        }
        return *this;
    }

    std::vector<double> sample(double lo, double hi, std::size_t n) const {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            out[i] = (*this)(x);
        }
        return out;
    }

    friend pq_function conjugate(const pq_function& F);
    friend pq_function combine(const std::vector<double>& coeffs,
                               const std::vector<const pq_function*>& fs);

private:
    std::vector<double> knots_;  ///< ascending; single entry for a point mass
    std::vector<piece> pieces_;  ///< one fewer than knots, empty for a point
    double point_value_ = 0.0;

    std::size_t piece_index(double x) const {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        std::size_t idx = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
        return std::min(idx, pieces_.size() - 1);
    }
};

/**
 * Exact Legendre conjugate of a convex piecewise-quadratic function.
 *
 * Each strictly curved piece maps to a dual piece over its slope range,
 * each kink to an affine dual piece, and a finite domain endpoint to an
 * affine tail.  Conjugating twice reproduces the input up to roundoff.
 */
inline pq_function conjugate(const pq_function& F) {
    if (F.is_point())
        return pq_function::from_pieces({-inf, inf}, {{0.0, F.domain_lo(), -F.point_value_}});

    const std::size_t K = F.pieces_.size();
    std::vector<double> sl(K), sh(K);
    for (std::size_t i = 0; i < K; ++i) {
        const piece& p = F.pieces_[i];
        const double tl = F.knots_[i], th = F.knots_[i + 1];
        sl[i] = std::isfinite(tl) ? p.slope(tl) : (p.a > 0.0 ? -inf : p.b);
        sh[i] = std::isfinite(th) ? p.slope(th) : (p.a > 0.0 ? inf : p.b);
    }

    struct segment {
        double lo, hi;
        piece pc;
    };
    std::vector<segment> segs;
    if (std::isfinite(F.knots_.front()))
        segs.push_back({-inf, sl[0], {0.0, F.knots_.front(), -F(F.knots_.front())}});
    for (std::size_t i = 0; i < K; ++i) {
        const piece& p = F.pieces_[i];
        if (p.a > 0.0 && sl[i] < sh[i])
            segs.push_back({sl[i], sh[i], {1.0 / p.a, -p.b / p.a, p.b * p.b / (2.0 * p.a) - p.c}});
        // slope jumps at the roundoff level are artifacts of evaluating the
        // slope from both neighbouring pieces, not kinks
        if (i + 1 < K && sh[i] < sl[i + 1] &&
            sl[i + 1] - sh[i] > 1e-12 * std::max(1.0, std::abs(sh[i])))
            segs.push_back({sh[i], sl[i + 1], {0.0, F.knots_[i + 1], -F(F.knots_[i + 1])}});
    }
    if (std::isfinite(F.knots_.back()))
        segs.push_back({sh[K - 1], inf, {0.0, F.knots_.back(), -F(F.knots_.back())}});

    if (segs.empty()) {
        // affine on the whole line: the conjugate is a point mass at the slope
        return pq_function::point(F.pieces_[0].b, -F.pieces_[0].c);
    }

    std::vector<double> knots;
    std::vector<piece> pieces;
    knots.push_back(segs.front().lo);
    for (const segment& s : segs) {
        double hi = std::max(s.hi, knots.back()); // monotonize roundoff crossings
        if (hi <= knots.back()) continue;
        knots.push_back(hi);
        pieces.push_back(s.pc);
    }
    if (pieces.empty()) return pq_function::point(segs.front().pc.b, -segs.front().pc.c);
    return pq_function::from_pieces(std::move(knots), std::move(pieces));
}

/// Convex combination over the intersection of domains.
inline pq_function combine(const std::vector<double>& coeffs,
                           const std::vector<const pq_function*>& fs) {
    if (coeffs.size() != fs.size() || fs.empty())
        throw improper_function_error("combine needs matching coefficients and functions");

    double lo = -inf, hi = inf;
    for (const pq_function* f : fs) {
        lo = std::max(lo, f->domain_lo());
        hi = std::min(hi, f->domain_hi());
    }
    if (lo > hi) throw improper_function_error("combined domain is empty");
    if (lo == hi) {
        double v = 0.0;
        for (std::size_t k = 0; k < fs.size(); ++k) v += coeffs[k] * (*fs[k])(lo);
        return pq_function::point(lo, v);
    }

    std::vector<double> ks;
    ks.push_back(lo);
    ks.push_back(hi);
    for (const pq_function* f : fs)
        for (double t : f->knots())
            if (t > lo && t < hi) ks.push_back(t);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<piece> pieces;
    pieces.reserve(ks.size() - 1);
    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
        double probe;
        if (!std::isfinite(ks[j]))
            probe = std::isfinite(ks[j + 1]) ? ks[j + 1] - 1.0 : 0.0;
        else if (!std::isfinite(ks[j + 1]))
            probe = ks[j] + 1.0;
        else
            probe = 0.5 * (ks[j] + ks[j + 1]);
        piece sum;
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const pq_function& f = *fs[k];
            const piece& p = f.pieces_[f.piece_index(probe)];
            sum.a += coeffs[k] * p.a;
            sum.b += coeffs[k] * p.b;
            sum.c += coeffs[k] * p.c;
        }
        pieces.push_back(sum);
    }
    return pq_function::from_pieces(std::move(ks), std::move(pieces));
}

} // namespace movavg::pq
