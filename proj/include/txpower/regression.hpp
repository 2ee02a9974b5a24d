#pragma once

// Frequency-trend regression: exponential fits in log space (plain and
// weighted), per-bin best-point selection, and the piecewise
// parabola-then-exponential curve used for oscillator efficiency.
//
// Every fit is closed form. Exponentials are fitted as straight lines of
// ln(y) against f; the piecewise fit grid-searches its knot.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "txpower/error.hpp"
#include "txpower/units.hpp"

namespace txpower {

struct Point {
    double f;  // GHz
    double y;
};

struct WeightedPoint {
    double f;  // GHz
    double y;
    double weight;
};

/// Closed frequency interval [lo, hi] in GHz over which a curve was fitted.
struct Domain {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double f) const noexcept { return f >= lo && f <= hi; }
};

inline Domain make_domain(double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo <= 0.0 || !(lo < hi)) {
        throw FitError("curve domain must satisfy 0 < lo < hi");
    }
    return {lo, hi};
}

/// y(f) = a * exp(b * f)
struct ExponentialCurve {
    double a = 1.0;
    double b = 0.0;  // 1/GHz
    Domain domain;

    [[nodiscard]] double operator()(double f) const noexcept { return a * std::exp(b * f); }
};

inline ExponentialCurve make_exponential(double a, double b, Domain domain) {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw FitError("exponential curve needs finite a > 0 and finite b");
    }
    return {a, b, make_domain(domain.lo, domain.hi)};
}

/// c0 + c1 f + c2 f^2 on [domain.lo, knot], a * exp(b f) on (knot, domain.hi].
/// The parabola peaks at the knot and the exponential is anchored to the
/// parabola's value there.
struct PiecewiseParabExpCurve {
    double knot = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double a = 1.0;
    double b = 0.0;
    Domain domain;

    [[nodiscard]] double parabola(double f) const noexcept { return c0 + f * (c1 + f * c2); }
    [[nodiscard]] double exponential(double f) const noexcept { return a * std::exp(b * f); }
    [[nodiscard]] double operator()(double f) const noexcept { return f <= knot ? parabola(f) : exponential(f); }
};

using Curve = std::variant<ExponentialCurve, PiecewiseParabExpCurve>;

struct FitReport {
    std::size_t n_points = 0;
    std::size_t n_best_points = 0;
    double rmse = 0.0;
    double r_squared = 1.0;
    bool converged = true;
};

template <class C>
struct FitResult {
    C curve;
    FitReport report;
};

struct Evaluation {
    double value;
    bool extrapolated;
};

/// Value of the curve at f. Outside the fitted domain the same formula is
/// used and the result is flagged.
template <class C>
Evaluation evaluate(const C& curve, FrequencyGhz f) {
    return {curve(f.value()), !curve.domain.contains(f.value())};
}

inline Evaluation evaluate(const Curve& curve, FrequencyGhz f) {
    return std::visit([f](const auto& c) { return evaluate(c, f); }, curve);
}

inline const Domain& curve_domain(const Curve& curve) {
    return std::visit([](const auto& c) -> const Domain& { return c.domain; }, curve);
}

/// Sum over points of (y - curve(f))^2, accumulated in input order.
template <class C, class P>
double residual_sum_of_squares(const C& curve, std::span<const P> points) {
    double sse = 0.0;
    for (const auto& p : points) {
        const double r = p.y - curve(p.f);
        sse += r * r;
    }
    return sse;
}

namespace detail {

template <class P>
void validate_fit_input(std::span<const P> points, std::size_t min_points, const char* what) {
    if (points.size() < min_points) {
        throw FitError(std::string(what) + " needs at least " + std::to_string(min_points) + " points, got " +
                       std::to_string(points.size()));
    }
    for (const auto& p : points) {
        if (!std::isfinite(p.f) || p.f <= 0.0) {
            throw FitError(std::string(what) + ": frequencies must be finite and positive");
        }
        if (!std::isfinite(p.y) || p.y <= 0.0) {
            throw FitError(std::string(what) + ": values must be finite and positive (log-domain fit)");
        }
    }
    const bool all_same = std::all_of(points.begin(), points.end(),
                                      [&](const auto& p) { return p.f == points.front().f; });
    if (all_same) {
        throw FitError(std::string(what) + ": all frequencies are identical");
    }
}

template <class P>
Domain span_of(std::span<const P> points) {
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const auto& l, const auto& r) { return l.f < r.f; });
    return make_domain(lo->f, hi->f);
}

template <class C, class P>
FitReport make_report(const C& curve, std::span<const P> points) {
    FitReport rep;
    rep.n_points = points.size();
    const double sse = residual_sum_of_squares(curve, points);
    double mean = 0.0;
    for (const auto& p : points) {
        mean += p.y;
    }
    mean /= static_cast<double>(points.size());
    double sst = 0.0;
    for (const auto& p : points) {
        sst += (p.y - mean) * (p.y - mean);
    }
    rep.rmse = std::sqrt(sse / static_cast<double>(points.size()));
    rep.r_squared = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
    return rep;
}

struct Line {
    double intercept;
    double slope;
};

// Ordinary least squares of ln(y) on f, centred two-pass form.
inline Line ols_log_line(std::span<const Point> points) {
    const double n = static_cast<double>(points.size());
    double mf = 0.0, ml = 0.0;
    for (const auto& p : points) {
        mf += p.f;
        ml += std::log(p.y);
    }
    mf /= n;
    ml /= n;
    double sff = 0.0, sfl = 0.0;
    for (const auto& p : points) {
        const double df = p.f - mf;
        sff += df * df;
        sfl += df * (std::log(p.y) - ml);
    }
    const double slope = sfl / sff;
    return {ml - slope * mf, slope};
}

} // namespace detail

/// Least-squares line of ln(y) on f, exponentiated: a = exp(intercept),
/// b = slope. Domain is the data span.
inline FitResult<ExponentialCurve> fit_exponential_loglinear(std::span<const Point> points) {
    detail::validate_fit_input(points, 2, "exponential fit");
    const auto line = detail::ols_log_line(points);
    auto curve = make_exponential(std::exp(line.intercept), line.slope, detail::span_of(points));
    auto report = detail::make_report(curve, points);
    return {curve, report};
}

/// Minimises sum w_i (ln y_i - ln a - b f_i)^2. Unit weights give the same
/// answer as fit_exponential_loglinear.
inline FitResult<ExponentialCurve> fit_exponential_weighted(std::span<const WeightedPoint> points) {
    detail::validate_fit_input(points, 2, "weighted exponential fit");
    double sw = 0.0;
    for (const auto& p : points) {
        if (!std::isfinite(p.weight) || p.weight <= 0.0) {
            throw FitError("weighted exponential fit: weights must be finite and positive");
        }
        sw += p.weight;
    }
    double mf = 0.0, ml = 0.0;
    for (const auto& p : points) {
        mf += p.weight * p.f;
        ml += p.weight * std::log(p.y);
    }
    mf /= sw;
    ml /= sw;
    double sff = 0.0, sfl = 0.0;
    for (const auto& p : points) {
        const double df = p.f - mf;
        sff += p.weight * df * df;
        sfl += p.weight * df * (std::log(p.y) - ml);
    }
    if (!(sff > 0.0)) {
        throw FitError("weighted exponential fit: frequency variance vanishes under the given weights");
    }
    const double b = sfl / sff;
    auto curve = make_exponential(std::exp(ml - b * mf), b, detail::span_of(points));
    return {curve, detail::make_report(curve, points)};
}

/// Weighted objective sum w_i (ln y_i - ln a - b f_i)^2 at (ln a, b).
inline double weighted_log_objective(std::span<const WeightedPoint> points, double ln_a, double b) {
    double s = 0.0;
    for (const auto& p : points) {
        const double r = std::log(p.y) - ln_a - b * p.f;
        s += p.weight * r * r;
    }
    return s;
}

/// Lower edges of n_bins logarithmically spaced bins over [lo, hi]
/// (edge k = lo * (hi/lo)^(k/n_bins)).
inline std::vector<double> log_bin_edges(double lo, double hi, std::size_t n_bins) {
    std::vector<double> edges(n_bins);
    const double llo = std::log(lo);
    const double step = (std::log(hi) - llo) / static_cast<double>(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        edges[k] = k == 0 ? lo : std::exp(llo + step * static_cast<double>(k));
    }
    return edges;
}

/// Bin of f given the lower edges: the last edge not above f. The top bin
/// is closed on the right.
inline std::size_t log_bin_index(const std::vector<double>& edges, double f) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), f);
    return it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
}

/// Indices of the per-bin maxima, in ascending bin order. Ties in y go to
/// the lower frequency, then to the earlier input position.
inline std::vector<std::size_t> select_best_indices(std::span<const Point> points, std::size_t n_bins) {
    if (points.empty()) {
        throw FitError("best-point selection on an empty point set");
    }
    if (n_bins == 0) {
        throw FitError("best-point selection needs at least one bin");
    }
    for (const auto& p : points) {
        if (!std::isfinite(p.f) || p.f <= 0.0 || !std::isfinite(p.y)) {
            throw FitError("best-point selection: frequencies must be positive and values finite");
        }
    }
    auto [lo_it, hi_it] = std::minmax_element(points.begin(), points.end(),
                                              [](const Point& l, const Point& r) { return l.f < r.f; });
    const auto edges = log_bin_edges(lo_it->f, hi_it->f, n_bins);
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> best(n_bins, none);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t k = log_bin_index(edges, points[i].f);
        const std::size_t cur = best[k];
        if (cur == none || points[i].y > points[cur].y ||
            (points[i].y == points[cur].y && points[i].f < points[cur].f)) {
            best[k] = i;
        }
    }
    std::vector<std::size_t> out;
    for (auto idx : best) {
        if (idx != none) {
            out.push_back(idx);
        }
    }
    return out;
}

inline std::vector<Point> select_best_points(std::span<const Point> points, std::size_t n_bins) {
    std::vector<Point> out;
    for (auto i : select_best_indices(points, n_bins)) {
        out.push_back(points[i]);
    }
    return out;
}

/// Candidate knot locations: every distinct frequency and the midpoints
/// between neighbouring distinct frequencies, ascending.
inline std::vector<double> knot_candidates(std::span<const Point> points) {
    std::vector<double> fs;
    fs.reserve(points.size());
    for (const auto& p : points) {
        fs.push_back(p.f);
    }
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i > 0) {
            out.push_back(0.5 * (fs[i - 1] + fs[i]));
        }
        out.push_back(fs[i]);
    }
    return out;
}

namespace detail {

inline std::size_t distinct_frequencies(const std::vector<Point>& pts) {
    std::vector<double> fs;
    for (const auto& p : pts) {
        fs.push_back(p.f);
    }
    std::sort(fs.begin(), fs.end());
    return static_cast<std::size_t>(std::unique(fs.begin(), fs.end()) - fs.begin());
}

// Piecewise curve for one knot, or nullopt when the knot is not viable.
inline bool splits_at(std::span<const Point> points, double knot) {
    std::vector<Point> left, right;
    for (const auto& p : points) {
        (p.f <= knot ? left : right).push_back(p);
    }
    return distinct_frequencies(left) >= 2 && distinct_frequencies(right) >= 2;
}

inline std::optional<PiecewiseParabExpCurve> piecewise_at_knot(std::span<const Point> points, double knot,
                                                               Domain domain) {
    std::vector<Point> left, right;
    for (const auto& p : points) {
        (p.f <= knot ? left : right).push_back(p);
    }
    if (distinct_frequencies(left) < 2 || distinct_frequencies(right) < 2) {
        return std::nullopt;
    }
    // y = p + q (f - knot)^2 by least squares on the left segment
    const double n = static_cast<double>(left.size());
    double mu = 0.0, my = 0.0;
    for (const auto& pt : left) {
        mu += (pt.f - knot) * (pt.f - knot);
        my += pt.y;
    }
    mu /= n;
    my /= n;
    double suu = 0.0, suy = 0.0;
    for (const auto& pt : left) {
        const double du = (pt.f - knot) * (pt.f - knot) - mu;
        suu += du * du;
        suy += du * (pt.y - my);
    }
    const double q = suy / suu;
    const double peak = my - q * mu;
    if (!(q <= 0.0) || !(peak > 0.0)) {
        return std::nullopt;
    }
    PiecewiseParabExpCurve c;
    c.knot = knot;
    c.c2 = q;
    c.c1 = -2.0 * q * knot;
    c.c0 = peak + q * knot * knot;
    c.domain = domain;
    if (!(c.parabola(domain.lo) > 0.0)) {
        return std::nullopt;
    }
    const auto line = ols_log_line(right);
    c.b = line.slope;
    c.a = c.parabola(knot) / std::exp(c.b * knot);
    if (!std::isfinite(c.a) || !(c.a > 0.0)) {
        return std::nullopt;
    }
    return c;
}

} // namespace detail

/// Grid-searches the knot over knot_candidates(points). For each interior
/// knot the left segment gets a least-squares parabola with its vertex at
/// the knot and the right segment a log-linear exponential re-anchored to
/// the parabola's knot value. The left domain edge stands for the plain
/// exponential fit over all points. The knot with the smallest total
/// squared residual wins; ties go to the lower knot.
inline FitResult<PiecewiseParabExpCurve> fit_piecewise_parab_exp(std::span<const Point> points) {
    detail::validate_fit_input(points, 6, "piecewise fit");
    const Domain domain = detail::span_of(points);

    const auto plain = fit_exponential_loglinear(points);
    PiecewiseParabExpCurve best;
    best.knot = domain.lo;
    best.c0 = plain.curve(domain.lo);
    best.a = plain.curve.a;
    best.b = plain.curve.b;
    best.domain = domain;
    double best_sse = residual_sum_of_squares(best, points);

    bool any_interior = false;
    for (double knot : knot_candidates(points)) {
        if (knot <= domain.lo || !detail::splits_at(points, knot)) {
            continue;
        }
        any_interior = true;
        auto cand = detail::piecewise_at_knot(points, knot, domain);
        if (!cand) {
            continue;
        }
        const double sse = residual_sum_of_squares(*cand, points);
        if (sse < best_sse) {
            best = *cand;
            best_sse = sse;
        }
    }
    if (!any_interior) {
        throw FitError("piecewise fit: too few points on either side of every candidate knot");
    }
    return {best, detail::make_report(best, points)};
}

} // namespace txpower
