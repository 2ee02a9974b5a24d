#pragma once

// Power and frequency quantities. dBm and mW values live in distinct types;
// the only way across is dbm_to_mw / mw_to_dbm.

#include <cmath>
#include <compare>
#include <string>

#include "txpower/error.hpp"

namespace txpower {

namespace detail {
inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}
} // namespace detail

/// Power in decibel-milliwatts.
class PowerDbm {
public:
    constexpr PowerDbm() = default;
    explicit PowerDbm(double dbm) : value_(dbm) { detail::require_finite(dbm, "power [dBm]"); }

    [[nodiscard]] constexpr double value() const noexcept { return value_; }

    friend constexpr auto operator<=>(PowerDbm, PowerDbm) = default;

private:
    double value_ = 0.0;
};

/// Power in milliwatts. Zero is reserved for "component absent".
class PowerMw {
public:
    constexpr PowerMw() = default;
    explicit PowerMw(double mw) : value_(mw) {
        detail::require_finite(mw, "power [mW]");
        if (mw < 0.0) {
            throw DomainError("power [mW] must be non-negative");
        }
    }

    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    [[nodiscard]] constexpr bool absent() const noexcept { return value_ == 0.0; }

    static constexpr PowerMw zero() noexcept { return PowerMw{}; }

    friend constexpr auto operator<=>(PowerMw, PowerMw) = default;

private:
    double value_ = 0.0;
};

/// Frequency in gigahertz, strictly positive.
class FrequencyGhz {
public:
    explicit FrequencyGhz(double ghz) : value_(ghz) {
        detail::require_finite(ghz, "frequency [GHz]");
        if (ghz <= 0.0) {
            throw DomainError("frequency [GHz] must be positive");
        }
    }

    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    [[nodiscard]] constexpr double hz() const noexcept { return value_ * 1e9; }

    friend constexpr auto operator<=>(FrequencyGhz, FrequencyGhz) = default;

private:
    double value_;
};

inline PowerMw dbm_to_mw(PowerDbm p) { return PowerMw(std::pow(10.0, p.value() / 10.0)); }

inline PowerDbm mw_to_dbm(PowerMw p) {
    if (p.value() <= 0.0) {
        throw DomainError("cannot express a non-positive power in dBm");
    }
    return PowerDbm(10.0 * std::log10(p.value()));
}

/// Gain in dB between two logarithmic power levels.
inline double gain_db(PowerDbm p_out, PowerDbm p_in) noexcept { return p_out.value() - p_in.value(); }

/// dB ratio to linear power ratio.
inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

} // namespace txpower
