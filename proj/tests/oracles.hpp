#pragma once

// Test-only reference implementations, kept apart from the library code
// they check.

#include <cmath>
#include <vector>

#include "txpower/regression.hpp"

namespace oracle {

/// Pearson coefficient from raw sums in long double:
/// (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2)).
inline double pearson_sums(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double a = x[i], b = y[i];
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    const long double num = n * sxy - sx * sy;
    const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    return static_cast<double>(num / den);
}

struct LogLine {
    double ln_a;
    double b;
};

/// Weighted normal equations for ln y = ln a + b f, solved by Cramer's rule
/// in long double on raw (uncentred) sums.
inline LogLine normal_equations(const std::vector<txpower::WeightedPoint>& pts) {
    long double sw = 0, swf = 0, swff = 0, swl = 0, swfl = 0;
    for (const auto& p : pts) {
        const long double w = p.weight, f = p.f, l = std::log(static_cast<long double>(p.y));
        sw += w;
        swf += w * f;
        swff += w * f * f;
        swl += w * l;
        swfl += w * f * l;
    }
    const long double det = sw * swff - swf * swf;
    const long double ln_a = (swl * swff - swf * swfl) / det;
    const long double b = (sw * swfl - swf * swl) / det;
    return {static_cast<double>(ln_a), static_cast<double>(b)};
}

inline LogLine normal_equations(const std::vector<txpower::Point>& pts) {
    std::vector<txpower::WeightedPoint> w;
    for (const auto& p : pts) {
        w.push_back({p.f, p.y, 1.0});
    }
    return normal_equations(w);
}

/// Per-bin maximum by exhaustive scan: for each bin, walk every point,
/// keep the highest y, breaking ties toward lower f then earlier index.
inline std::vector<std::size_t> best_per_bin(const std::vector<txpower::Point>& pts, std::size_t n_bins) {
    double lo = pts[0].f, hi = pts[0].f;
    for (const auto& p : pts) {
        lo = std::min(lo, p.f);
        hi = std::max(hi, p.f);
    }
    const auto edges = txpower::log_bin_edges(lo, hi, n_bins);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double left = edges[k];
        const bool last = k + 1 == n_bins;
        const double right = last ? hi : edges[k + 1];
        std::size_t best = pts.size();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double f = pts[i].f;
            const bool inside = (k == 0 || f >= left) && (last ? true : f < right);
            if (!inside) {
                continue;
            }
            if (best == pts.size()) {
                best = i;
                continue;
            }
            const auto& a = pts[i];
            const auto& b = pts[best];
            if (a.y > b.y || (a.y == b.y && a.f < b.f)) {
                best = i;
            }
        }
        if (best != pts.size()) {
            out.push_back(best);
        }
    }
    return out;
}

} // namespace oracle
