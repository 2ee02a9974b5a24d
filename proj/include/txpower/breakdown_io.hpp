#pragma once

// CSV / JSON tables of chain breakdowns.
//
// Failed cells keep their frequency and level, leave the numeric columns
// empty and carry "error: <message>" in the last column.

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "txpower/chain.hpp"
#include "txpower/detail/text.hpp"
#include "txpower/model_io.hpp"

namespace txpower {

inline constexpr std::string_view kBreakdownHeader =
    "freq_ghz,mixer_pout_dbm,pa_pdc_mw,mixer_pdc_mw,osc_pdc_mw,total_pdc_mw,pa_share,mixer_share,osc_share,"
    "extrapolated_components";

inline std::vector<std::string> extrapolated_names(const ExtrapolationFlags& x) {
    std::vector<std::string> out;
    if (x.pa) out.emplace_back("pa");
    if (x.mixer) out.emplace_back("mixer");
    if (x.osc) out.emplace_back("osc");
    return out;
}

inline void write_breakdown_csv(std::ostream& out, const std::vector<ChainCell>& cells) {
    using detail::format_double;
    out << kBreakdownHeader << '\n';
    for (const auto& c : cells) {
        out << format_double(c.f.value()) << ',' << format_double(c.mixer_pout.value()) << ',';
        if (!c.breakdown) {
            std::string msg = c.error;
            for (auto& ch : msg) {
                if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
            }
            out << ",,,,,,,error: " << msg << '\n';
            continue;
        }
        const auto& b = *c.breakdown;
        std::string flags;
        for (const auto& n : extrapolated_names(b.extrapolated)) {
            flags += (flags.empty() ? "" : ";") + n;
        }
        out << format_double(b.pa_pdc.value()) << ',' << format_double(b.mixer_pdc.value()) << ','
            << format_double(b.osc_pdc.value()) << ',' << format_double(b.total_pdc.value()) << ','
            << format_double(b.pa_share) << ',' << format_double(b.mixer_share) << ','
            << format_double(b.osc_share) << ',' << flags << '\n';
    }
}

inline Json breakdown_to_json(const std::vector<ChainCell>& cells) {
    Json rows = Json::array();
    for (const auto& c : cells) {
        Json r;
        r["freq_ghz"] = c.f.value();
        r["mixer_pout_dbm"] = c.mixer_pout.value();
        if (!c.breakdown) {
            r["error"] = c.error;
            rows.push_back(std::move(r));
            continue;
        }
        const auto& b = *c.breakdown;
        r["pa_pdc_mw"] = b.pa_pdc.value();
        r["mixer_pdc_mw"] = b.mixer_pdc.value();
        r["osc_pdc_mw"] = b.osc_pdc.value();
        r["total_pdc_mw"] = b.total_pdc.value();
        r["pa_share"] = b.pa_share;
        r["mixer_share"] = b.mixer_share;
        r["osc_share"] = b.osc_share;
        r["extrapolated_components"] = extrapolated_names(b.extrapolated);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Parses a table written by write_breakdown_csv.
inline std::vector<ChainCell> read_breakdown_csv(std::istream& in, std::string_view source = "breakdown") {
    const std::string src(source);
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(src + ": empty breakdown table");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kBreakdownHeader) {
        throw FormatError(src + ":1: not a breakdown table header");
    }
    std::vector<ChainCell> cells;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        const auto where = src + ":" + std::to_string(row);
        if (fields.size() != 10) {
            throw FormatError(where + ": expected 10 fields");
        }
        auto need = [&](std::size_t col) {
            auto v = detail::parse_double(fields[col]);
            if (!v) {
                throw FormatError(where + ":" + std::to_string(col + 1) + ": bad number '" + fields[col] + "'");
            }
            return *v;
        };
        try {
            ChainCell c{FrequencyGhz(need(0)), PowerDbm(need(1)), std::nullopt, {}};
            if (fields[9].rfind("error:", 0) == 0) {
                c.error = std::string(detail::trim(std::string_view(fields[9]).substr(6)));
                cells.push_back(std::move(c));
                continue;
            }
            ChainBreakdown b;
            b.f = c.f;
            b.mixer_pout = c.mixer_pout;
            b.pa_pdc = PowerMw(need(2));
            b.mixer_pdc = PowerMw(need(3));
            b.osc_pdc = PowerMw(need(4));
            b.total_pdc = PowerMw(need(5));
            b.pa_share = need(6);
            b.mixer_share = need(7);
            b.osc_share = need(8);
            std::string flags = fields[9];
            for (auto& ch : flags) {
                if (ch == ';') ch = ',';
            }
            for (const auto& n : detail::split_list(flags)) {
                if (n == "pa") b.extrapolated.pa = true;
                else if (n == "mixer") b.extrapolated.mixer = true;
                else if (n == "osc") b.extrapolated.osc = true;
                else throw FormatError(where + ": unknown component '" + n + "'");
            }
            c.breakdown = b;
            cells.push_back(std::move(c));
        } catch (const DomainError& e) {
            throw FormatError(where + ": " + e.what());
        }
    }
    return cells;
}

} // namespace txpower
