#pragma once

// Figures of merit for the three transmitter blocks and the DC-power models
// built on fitted frequency curves.
//
//   PA:         P_DC = (P_out - P_in) / PAE(f)               (powers in mW)
//   oscillator: P_DC = P_RF / eff(f)
//   mixer:      P_DC = G_lin / eta(f),  G_lin = P_RF,out / P_IF,in
//
// eta is the mixer's linear conversion gain per mW of DC power; it is the
// quantity fitted against frequency for mixers.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "txpower/dataset.hpp"
#include "txpower/error.hpp"
#include "txpower/regression.hpp"
#include "txpower/units.hpp"

namespace txpower {

/// (P_out - P_in) / P_DC with every power in mW.
inline double compute_pae(PowerMw p_out, PowerMw p_in, PowerMw p_dc) {
    if (!(p_dc.value() > 0.0)) {
        throw DomainError("PAE: DC power must be positive");
    }
    if (p_out < p_in) {
        throw DomainError("PAE: output power below input power");
    }
    return (p_out.value() - p_in.value()) / p_dc.value();
}

/// Oscillator figure of merit in dB:
/// PN + 10 log10(P_DC / 1 mW) - P_out - 20 log10(f_o / delta_f).
inline double osc_fom(double phase_noise_dbc_hz, PowerMw p_dc, PowerDbm p_out, FrequencyGhz f_o,
                      double delta_f_mhz) {
    if (!(p_dc.value() > 0.0)) {
        throw DomainError("oscillator FOM: DC power must be positive");
    }
    if (!std::isfinite(delta_f_mhz) || !(delta_f_mhz > 0.0)) {
        throw DomainError("oscillator FOM: frequency offset must be positive");
    }
    const double offset_hz = delta_f_mhz * 1e6;
    return phase_noise_dbc_hz + 10.0 * std::log10(p_dc.value()) - p_out.value() -
           20.0 * std::log10(f_o.hz() / offset_hz);
}

/// P_RF / P_DC.
inline double osc_dc_to_rf_eff(PowerMw p_rf, PowerMw p_dc) {
    if (!(p_rf.value() > 0.0) || !(p_dc.value() > 0.0)) {
        throw DomainError("DC-to-RF efficiency: powers must be positive");
    }
    return p_rf.value() / p_dc.value();
}

/// Conversion gain 10 log10(P_RF,out / P_IF,in) in dB.
inline double mixer_cg(PowerMw p_rf_out, PowerMw p_if_in) {
    if (!(p_rf_out.value() > 0.0) || !(p_if_in.value() > 0.0)) {
        throw DomainError("conversion gain: powers must be positive");
    }
    return 10.0 * std::log10(p_rf_out.value() / p_if_in.value());
}

/// Result of a model query: DC power, the model's intermediate figure
/// (PAE, efficiency or eta) at f, and whether f was outside the fit domain.
struct DcPower {
    PowerMw pdc;
    double metric = 0.0;
    bool extrapolated = false;
};

namespace detail {
inline std::string ghz_str(FrequencyGhz f) {
    std::ostringstream os;
    os << f.value() << " GHz";
    return os.str();
}

inline double checked_fraction(const Evaluation& e, FrequencyGhz f, const char* what) {
    if (!std::isfinite(e.value) || !(e.value > 0.0) || e.value > 1.0) {
        std::ostringstream os;
        os << what << " at " << ghz_str(f) << " is " << e.value << ", outside (0, 1]";
        throw ModelRangeError(os.str());
    }
    return e.value;
}
} // namespace detail

struct PaPowerModel {
    ExponentialCurve pae_curve;  // PAE as a fraction
    FitReport fit;

    [[nodiscard]] const Domain& domain() const noexcept { return pae_curve.domain; }
    [[nodiscard]] bool covers(FrequencyGhz f) const noexcept { return domain().contains(f.value()); }

    [[nodiscard]] DcPower dc_power(FrequencyGhz f, PowerDbm p_out, PowerDbm p_in) const {
        if (p_out < p_in) {
            throw DomainError("PA: output power below input power");
        }
        const auto e = evaluate(pae_curve, f);
        if (p_out == p_in) {
            return {PowerMw::zero(), e.value, e.extrapolated};
        }
        const double pae = detail::checked_fraction(e, f, "PAE");
        const double delta = dbm_to_mw(p_out).value() - dbm_to_mw(p_in).value();
        return {PowerMw(delta / pae), pae, e.extrapolated};
    }
};

struct OscPowerModel {
    PiecewiseParabExpCurve eff_curve;  // DC-to-RF efficiency as a fraction
    FitReport fit;

    [[nodiscard]] const Domain& domain() const noexcept { return eff_curve.domain; }
    [[nodiscard]] bool covers(FrequencyGhz f) const noexcept { return domain().contains(f.value()); }

    [[nodiscard]] DcPower dc_power(FrequencyGhz f, PowerDbm p_rf) const {
        const auto e = evaluate(eff_curve, f);
        const double eff = detail::checked_fraction(e, f, "oscillator efficiency");
        return {PowerMw(dbm_to_mw(p_rf).value() / eff), eff, e.extrapolated};
    }
};

struct MixerPowerModel {
    ExponentialCurve eta_curve;  // linear conversion gain per mW of DC power
    PowerDbm pif_in{-20.0};
    FitReport fit;

    [[nodiscard]] const Domain& domain() const noexcept { return eta_curve.domain; }
    [[nodiscard]] bool covers(FrequencyGhz f) const noexcept { return domain().contains(f.value()); }

    [[nodiscard]] DcPower dc_power(FrequencyGhz f, PowerDbm p_rf_out) const {
        const auto e = evaluate(eta_curve, f);
        if (!std::isfinite(e.value) || !(e.value > 0.0)) {
            std::ostringstream os;
            os << "mixer gain-per-DC-power at " << detail::ghz_str(f) << " is " << e.value << ", not positive";
            throw ModelRangeError(os.str());
        }
        const double g_lin = dbm_to_mw(p_rf_out).value() / dbm_to_mw(pif_in).value();
        return {PowerMw(g_lin / e.value), e.value, e.extrapolated};
    }
};

inline DcPower pa_pdc(const PaPowerModel& m, FrequencyGhz f, PowerDbm p_out, PowerDbm p_in) {
    return m.dc_power(f, p_out, p_in);
}

inline DcPower osc_pdc(const OscPowerModel& m, FrequencyGhz f, PowerDbm p_rf) { return m.dc_power(f, p_rf); }

inline DcPower mixer_pdc(const MixerPowerModel& m, FrequencyGhz f, PowerDbm p_rf_out) {
    return m.dc_power(f, p_rf_out);
}

/// Knobs shared by the three model builders.
struct FitOptions {
    std::size_t n_bins = 8;
    double bp_weight = 10.0;  // weight of best points; others get 1
    std::optional<std::string> technology;
    PowerDbm pif_in{-20.0};  // mixer only
};

namespace detail {

template <class Entry>
Dataset<Entry> apply_filter(const Dataset<Entry>& ds, const FitOptions& opt) {
    return opt.technology ? filter_by_technology(ds, *opt.technology) : ds;
}

// Weighted exponential fit where the per-bin best points carry bp_weight.
inline FitResult<ExponentialCurve> fit_with_best_points(const std::vector<Point>& pts, const FitOptions& opt) {
    if (!(opt.bp_weight > 0.0) || !std::isfinite(opt.bp_weight)) {
        throw FitError("best-point weight must be positive");
    }
    const auto best = select_best_indices(pts, opt.n_bins);
    std::vector<WeightedPoint> wp;
    wp.reserve(pts.size());
    for (const auto& p : pts) {
        wp.push_back({p.f, p.y, 1.0});
    }
    for (auto i : best) {
        wp[i].weight = opt.bp_weight;
    }
    auto res = fit_exponential_weighted(wp);
    res.report.n_best_points = best.size();
    return res;
}

} // namespace detail

/// PAE(f) from a PA survey: best points weighted in an exponential fit.
inline PaPowerModel build_pa_model(const PaDataset& raw, const FitOptions& opt = {}) {
    const auto ds = detail::apply_filter(raw, opt);
    std::vector<Point> pts;
    for (const auto& e : ds.entries) {
        pts.push_back({e.freq.value(), e.pae_pct / 100.0});
    }
    auto res = detail::fit_with_best_points(pts, opt);
    const auto [lo, hi] = frequency_span(ds);
    res.curve.domain = make_domain(lo, hi);
    return {res.curve, res.report};
}

/// Efficiency(f) from an oscillator survey: per-entry P_RF/P_DC, best points
/// only, piecewise parabola + exponential.
inline OscPowerModel build_osc_model(const OscDataset& raw, const FitOptions& opt = {}) {
    const auto ds = detail::apply_filter(raw, opt);
    std::vector<Point> pts;
    for (const auto& e : ds.entries) {
        pts.push_back({e.freq.value(), osc_dc_to_rf_eff(dbm_to_mw(e.pout), e.pdc)});
    }
    const auto best = select_best_points(pts, opt.n_bins);
    auto res = fit_piecewise_parab_exp(best);
    res.report.n_best_points = best.size();
    const auto [lo, hi] = frequency_span(ds);
    res.curve.domain = make_domain(lo, hi);
    return {res.curve, res.report};
}

/// eta(f) from a mixer survey: eta = 10^(CG/10) / P_DC per entry, best
/// points weighted in an exponential fit.
inline MixerPowerModel build_mixer_model(const MixerDataset& raw, const FitOptions& opt = {}) {
    const auto ds = detail::apply_filter(raw, opt);
    std::vector<Point> pts;
    for (const auto& e : ds.entries) {
        pts.push_back({e.freq.value(), db_to_linear(e.cg_db) / e.pdc.value()});
    }
    auto res = detail::fit_with_best_points(pts, opt);
    const auto [lo, hi] = frequency_span(ds);
    res.curve.domain = make_domain(lo, hi);
    return {res.curve, opt.pif_in, res.report};
}

} // namespace txpower
