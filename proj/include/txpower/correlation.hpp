#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "txpower/dataset.hpp"

namespace txpower {

/// Dense square matrix with row labels, row-major.
struct LabeledMatrix {
    std::vector<std::string> labels;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * size() + j]; }
};

enum class PaFeature { freq, psat, pae, gain, area };

/// Feature order used by the PA correlation table.
inline std::vector<PaFeature> default_pa_features() {
    return {PaFeature::psat, PaFeature::pae, PaFeature::gain, PaFeature::area};
}

inline std::string_view pa_feature_name(PaFeature f) {
    switch (f) {
    case PaFeature::freq: return "freq_ghz";
    case PaFeature::psat: return "psat_dbm";
    case PaFeature::pae: return "pae_pct";
    case PaFeature::gain: return "gain_db";
    case PaFeature::area: return "area_mm2";
    }
    return "?";
}

/// Accepts the CSV column names and the short forms freq/psat/pae/gain/area.
inline PaFeature parse_pa_feature(std::string_view name) {
    const auto n = detail::to_lower(detail::trim(name));
    for (auto f : {PaFeature::freq, PaFeature::psat, PaFeature::pae, PaFeature::gain, PaFeature::area}) {
        const auto full = pa_feature_name(f);
        if (n == full || n == full.substr(0, full.find('_'))) {
            return f;
        }
    }
    throw DataError("unknown PA feature '" + std::string(name) + "'");
}

inline std::optional<double> pa_feature_value(const PaSurveyEntry& e, PaFeature f) {
    switch (f) {
    case PaFeature::freq: return e.freq.value();
    case PaFeature::psat: return e.psat.value();
    case PaFeature::pae: return e.pae_pct;
    case PaFeature::gain: return e.gain_db;
    case PaFeature::area: return e.area_mm2;
    }
    return std::nullopt;
}

/// Pearson correlation of two equally long samples (two-pass, centred).
/// Throws DataError when fewer than 3 pairs or either side has no variance.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) {
        throw DataError("correlation needs at least 3 complete rows, got " + std::to_string(n));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DataError("zero-variance feature in correlation");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Pearson correlation matrix over the selected PA features. Each pair uses
/// the rows where both features are present (pairwise-complete).
inline LabeledMatrix correlation_matrix(const PaDataset& ds, const std::vector<PaFeature>& features) {
    const std::size_t k = features.size();
    LabeledMatrix m;
    for (auto f : features) {
        m.labels.emplace_back(pa_feature_name(f));
    }
    m.values.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            std::vector<double> x, y;
            for (const auto& e : ds.entries) {
                auto a = pa_feature_value(e, features[i]);
                auto b = pa_feature_value(e, features[j]);
                if (a && b) {
                    x.push_back(*a);
                    y.push_back(*b);
                }
            }
            double r = 0.0;
            try {
                r = pearson(x, y);
            } catch (const DataError& err) {
                throw DataError(std::string(err.what()) + " (" + m.labels[i] + " vs " + m.labels[j] + ")");
            }
            m.at(i, j) = i == j ? 1.0 : r;
            m.at(j, i) = m.at(i, j);
        }
    }
    return m;
}

} // namespace txpower
