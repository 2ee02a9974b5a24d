#pragma once

// Transmitter-chain composition: mixer -> PA cascade plus a free-running
// oscillator, evaluated per (frequency, mixer output level).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "txpower/components.hpp"
#include "txpower/error.hpp"
#include "txpower/units.hpp"

namespace txpower {

template <class M>
concept PaModel = requires(const M& m, FrequencyGhz f, PowerDbm p) {
    { m.dc_power(f, p, p) } -> std::convertible_to<DcPower>;
    { m.covers(f) } -> std::convertible_to<bool>;
    { m.domain() } -> std::convertible_to<Domain>;
};

template <class M>
concept OscModel = requires(const M& m, FrequencyGhz f, PowerDbm p) {
    { m.dc_power(f, p) } -> std::convertible_to<DcPower>;
    { m.covers(f) } -> std::convertible_to<bool>;
    { m.domain() } -> std::convertible_to<Domain>;
};

template <class M>
concept MixerModel = OscModel<M>;

struct ChainConfig {
    std::vector<FrequencyGhz> frequencies{FrequencyGhz(28.0), FrequencyGhz(60.0), FrequencyGhz(140.0),
                                          FrequencyGhz(243.0)};
    PowerDbm pa_pout{0.0};
    PowerDbm osc_prf{-10.0};
    std::vector<PowerDbm> mixer_pout_levels{PowerDbm(-20.0), PowerDbm(-10.0), PowerDbm(-5.0), PowerDbm(0.0)};
    PowerDbm mixer_pif_in{-20.0};
};

/// Throws DomainError describing the first broken invariant.
inline void validate(const ChainConfig& cfg) {
    if (cfg.frequencies.empty()) {
        throw DomainError("chain: no frequencies given");
    }
    if (!std::is_sorted(cfg.frequencies.begin(), cfg.frequencies.end())) {
        throw DomainError("chain: frequencies must be sorted ascending");
    }
    if (cfg.mixer_pout_levels.empty()) {
        throw DomainError("chain: no mixer output levels given");
    }
    for (auto p : cfg.mixer_pout_levels) {
        if (p > cfg.pa_pout) {
            throw DomainError("chain: mixer output " + detail::format_double(p.value()) +
                              " dBm exceeds PA output " + detail::format_double(cfg.pa_pout.value()) + " dBm");
        }
        if (p < cfg.mixer_pif_in) {
            throw DomainError("chain: mixer output " + detail::format_double(p.value()) +
                              " dBm is below the IF input " + detail::format_double(cfg.mixer_pif_in.value()) +
                              " dBm");
        }
    }
}

struct ExtrapolationFlags {
    bool pa = false;
    bool mixer = false;
    bool osc = false;

    [[nodiscard]] bool any() const noexcept { return pa || mixer || osc; }
};

struct ChainBreakdown {
    FrequencyGhz f{1.0};
    PowerDbm mixer_pout;
    PowerMw pa_pdc;
    PowerMw mixer_pdc;
    PowerMw osc_pdc;
    PowerMw total_pdc;
    double pa_share = 0.0;
    double mixer_share = 0.0;
    double osc_share = 0.0;
    ExtrapolationFlags extrapolated;
};

/// One (frequency, mixer level) cell; `breakdown` is empty when a component
/// query failed and `error` then says why.
struct ChainCell {
    FrequencyGhz f{1.0};
    PowerDbm mixer_pout;
    std::optional<ChainBreakdown> breakdown;
    std::string error;

    [[nodiscard]] bool ok() const noexcept { return breakdown.has_value(); }
};

template <PaModel Pa, MixerModel Mixer, OscModel Osc>
ChainBreakdown compose_cell(FrequencyGhz f, PowerDbm mixer_pout, const ChainConfig& cfg, const Pa& pa,
                            const Mixer& mixer, const Osc& osc) {
    ChainBreakdown b;
    b.f = f;
    b.mixer_pout = mixer_pout;

    if (mixer_pout == cfg.pa_pout) {
        b.pa_pdc = PowerMw::zero();
        b.extrapolated.pa = !pa.covers(f);
    } else {
        const auto r = pa.dc_power(f, cfg.pa_pout, mixer_pout);
        b.pa_pdc = r.pdc;
        b.extrapolated.pa = r.extrapolated;
    }
    const auto m = mixer.dc_power(f, mixer_pout);
    b.mixer_pdc = m.pdc;
    b.extrapolated.mixer = m.extrapolated;
    const auto o = osc.dc_power(f, cfg.osc_prf);
    b.osc_pdc = o.pdc;
    b.extrapolated.osc = o.extrapolated;

    const double total = b.pa_pdc.value() + b.mixer_pdc.value() + b.osc_pdc.value();
    b.total_pdc = PowerMw(total);
    if (total > 0.0) {
        b.pa_share = b.pa_pdc.value() / total;
        b.mixer_share = b.mixer_pdc.value() / total;
        b.osc_share = b.osc_pdc.value() / total;
    }
    return b;
}

/// Evaluates every (frequency, mixer level) pair, frequency-major. A failing
/// component query marks only its own cell.
template <PaModel Pa, MixerModel Mixer, OscModel Osc>
std::vector<ChainCell> compose(const ChainConfig& cfg, const Pa& pa, const Mixer& mixer, const Osc& osc) {
    validate(cfg);
    std::vector<ChainCell> cells;
    cells.reserve(cfg.frequencies.size() * cfg.mixer_pout_levels.size());
    for (auto f : cfg.frequencies) {
        for (auto level : cfg.mixer_pout_levels) {
            ChainCell cell{f, level, std::nullopt, {}};
            try {
                cell.breakdown = compose_cell(f, level, cfg, pa, mixer, osc);
            } catch (const Error& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

inline std::vector<FrequencyGhz> linear_grid(double lo, double hi, std::size_t n) {
    if (n == 0) {
        return {};
    }
    std::vector<FrequencyGhz> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        out.emplace_back(i + 1 == n && n > 1 ? hi : lo + (hi - lo) * t);
    }
    return out;
}

inline std::vector<FrequencyGhz> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > 0.0)) {
        throw DomainError("log grid needs positive bounds");
    }
    std::vector<FrequencyGhz> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        out.emplace_back(i + 1 == n && n > 1 ? hi : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * t));
    }
    return out;
}

struct SweepOptions {
    bool allow_extrapolation = false;
};

/// compose() over a dense grid (cfg.frequencies is replaced by `grid`).
/// Without allow_extrapolation every grid point must lie within
/// [min lo, max hi] over the three model domains.
template <class Pa, class Mixer, class Osc>
    requires PaModel<Pa> && MixerModel<Mixer> && OscModel<Osc>
std::vector<ChainCell> sweep(ChainConfig cfg, const std::vector<FrequencyGhz>& grid, const Pa& pa,
                             const Mixer& mixer, const Osc& osc, SweepOptions opt = {}) {
    if (grid.empty()) {
        throw DomainError("sweep: empty frequency grid");
    }
    if (!opt.allow_extrapolation) {
        const double lo = std::min({pa.domain().lo, mixer.domain().lo, osc.domain().lo});
        const double hi = std::max({pa.domain().hi, mixer.domain().hi, osc.domain().hi});
        for (auto f : grid) {
            if (f.value() < lo || f.value() > hi) {
                throw DomainError("sweep: " + detail::format_double(f.value()) +
                                  " GHz is outside the combined model domains");
            }
        }
    }
    cfg.frequencies = grid;
    std::sort(cfg.frequencies.begin(), cfg.frequencies.end());
    return compose(cfg, pa, mixer, osc);
}

} // namespace txpower
