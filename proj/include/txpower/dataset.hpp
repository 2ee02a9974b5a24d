#pragma once

// Survey record schemas for the three front-end blocks, CSV ingestion with
// row-level validation, and descriptive statistics.
//
// Numeric cells that fail to parse are fatal (DataError naming row:column).
// Rows that parse but break a record invariant are dropped and reported in
// Dataset::rejected; a file that leaves no valid rows is fatal.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "txpower/detail/text.hpp"
#include "txpower/error.hpp"
#include "txpower/units.hpp"

namespace txpower {

struct PaSurveyEntry {
    FrequencyGhz freq;
    PowerDbm psat;
    double pae_pct;                  // (0, 100]
    double gain_db;
    std::optional<double> area_mm2;  // > 0 when present
    std::string technology;
    std::string source;
};

struct OscSurveyEntry {
    FrequencyGhz freq;
    PowerMw pdc;
    PowerDbm pout;
    double phase_noise_dbc_hz;
    double offset_mhz;
    std::string technology;
    std::string source;
};

struct MixerSurveyEntry {
    FrequencyGhz freq;
    PowerMw pdc;
    double cg_db;
    std::string technology;
    std::string source;
};

/// One problem found while loading, with 1-based file coordinates (the
/// header is row 1).
struct Diagnostic {
    std::size_t row = 0;
    std::size_t column = 0;
    std::string message;

    [[nodiscard]] std::string to_string() const {
        return std::to_string(row) + ":" + std::to_string(column) + ": " + message;
    }
};

template <class Entry>
struct Dataset {
    std::vector<Entry> entries;
    std::string path;
    std::string loaded_at;
    std::vector<Diagnostic> rejected;

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries.empty(); }
};

using PaDataset = Dataset<PaSurveyEntry>;
using OscDataset = Dataset<OscSurveyEntry>;
using MixerDataset = Dataset<MixerSurveyEntry>;

/// A named numeric column of a survey record; nullopt when the cell is empty.
template <class Entry>
struct Feature {
    std::string name;
    std::function<std::optional<double>(const Entry&)> get;
};

namespace detail {

// Cell reader used by the per-schema row parsers. Parse failures throw;
// invariant failures are queued and make the row invalid.
class RowReader {
public:
    RowReader(const std::vector<std::string>& fields, std::size_t row, std::string_view source)
        : fields_(fields), row_(row), source_(source) {}

    std::optional<double> optional_number(std::size_t col) const {
        const auto cell = trim(fields_[col]);
        if (cell.empty()) {
            return std::nullopt;
        }
        auto v = parse_double(cell);
        if (!v || !std::isfinite(*v)) {
            throw DataError(std::string(source_) + ":" + std::to_string(row_) + ":" +
                            std::to_string(col + 1) + ": cannot parse '" + std::string(cell) +
                            "' as a number");
        }
        return v;
    }

    double number(std::size_t col, std::string_view name) {
        auto v = optional_number(col);
        if (!v) {
            reject(col, std::string(name) + " is required");
            return std::numeric_limits<double>::quiet_NaN();
        }
        return *v;
    }

    std::string text(std::size_t col) const { return std::string(trim(fields_[col])); }

    void check(bool ok, std::size_t col, std::string message) {
        if (!ok) {
            reject(col, std::move(message));
        }
    }

    [[nodiscard]] bool ok() const noexcept { return problems_.empty(); }
    std::vector<Diagnostic>& problems() noexcept { return problems_; }

private:
    void reject(std::size_t col, std::string message) {
        problems_.push_back({row_, col + 1, std::move(message)});
    }

    const std::vector<std::string>& fields_;
    std::size_t row_;
    std::string_view source_;
    std::vector<Diagnostic> problems_;
};

inline std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

} // namespace detail

/// Column layout and row conversion for each survey record type.
template <class Entry>
struct SurveySchema;

template <>
struct SurveySchema<PaSurveyEntry> {
    static constexpr std::array<std::string_view, 7> header{
        "freq_ghz", "psat_dbm", "pae_pct", "gain_db", "area_mm2", "technology", "source"};

    static std::optional<PaSurveyEntry> parse(detail::RowReader& r) {
        const double f = r.number(0, "freq_ghz");
        const double psat = r.number(1, "psat_dbm");
        const double pae = r.number(2, "pae_pct");
        const double gain = r.number(3, "gain_db");
        const auto area = r.optional_number(4);
        r.check(std::isnan(f) || f > 0.0, 0, "freq_ghz must be > 0");
        r.check(std::isnan(pae) || (pae > 0.0 && pae <= 100.0), 2, "pae_pct must lie in (0, 100]");
        r.check(!area || *area > 0.0, 4, "area_mm2 must be > 0 when present");
        if (!r.ok()) {
            return std::nullopt;
        }
        return PaSurveyEntry{FrequencyGhz(f), PowerDbm(psat), pae, gain, area, r.text(5), r.text(6)};
    }

    static std::vector<std::string> row(const PaSurveyEntry& e) {
        using detail::format_double;
        return {format_double(e.freq.value()), format_double(e.psat.value()), format_double(e.pae_pct),
                format_double(e.gain_db),      detail::fmt_opt(e.area_mm2),   e.technology,
                e.source};
    }

    static std::vector<Feature<PaSurveyEntry>> features() {
        return {
            {"freq_ghz", [](const PaSurveyEntry& e) -> std::optional<double> { return e.freq.value(); }},
            {"psat_dbm", [](const PaSurveyEntry& e) -> std::optional<double> { return e.psat.value(); }},
            {"pae_pct", [](const PaSurveyEntry& e) -> std::optional<double> { return e.pae_pct; }},
            {"gain_db", [](const PaSurveyEntry& e) -> std::optional<double> { return e.gain_db; }},
            {"area_mm2", [](const PaSurveyEntry& e) { return e.area_mm2; }},
        };
    }
};

template <>
struct SurveySchema<OscSurveyEntry> {
    static constexpr std::array<std::string_view, 7> header{
        "freq_ghz", "pdc_mw", "pout_dbm", "pn_dbc_hz", "offset_mhz", "technology", "source"};

    static std::optional<OscSurveyEntry> parse(detail::RowReader& r) {
        const double f = r.number(0, "freq_ghz");
        const double pdc = r.number(1, "pdc_mw");
        const double pout = r.number(2, "pout_dbm");
        const double pn = r.number(3, "pn_dbc_hz");
        const double offset = r.number(4, "offset_mhz");
        r.check(std::isnan(f) || f > 0.0, 0, "freq_ghz must be > 0");
        r.check(std::isnan(pdc) || pdc > 0.0, 1, "pdc_mw must be > 0");
        r.check(std::isnan(pn) || pn < 0.0, 3, "pn_dbc_hz must be negative");
        r.check(std::isnan(offset) || offset > 0.0, 4, "offset_mhz must be > 0");
        if (!r.ok()) {
            return std::nullopt;
        }
        return OscSurveyEntry{FrequencyGhz(f), PowerMw(pdc), PowerDbm(pout), pn, offset, r.text(5), r.text(6)};
    }

    static std::vector<std::string> row(const OscSurveyEntry& e) {
        using detail::format_double;
        return {format_double(e.freq.value()), format_double(e.pdc.value()), format_double(e.pout.value()),
                format_double(e.phase_noise_dbc_hz), format_double(e.offset_mhz), e.technology, e.source};
    }

    static std::vector<Feature<OscSurveyEntry>> features() {
        return {
            {"freq_ghz", [](const OscSurveyEntry& e) -> std::optional<double> { return e.freq.value(); }},
            {"pdc_mw", [](const OscSurveyEntry& e) -> std::optional<double> { return e.pdc.value(); }},
            {"pout_dbm", [](const OscSurveyEntry& e) -> std::optional<double> { return e.pout.value(); }},
            {"pn_dbc_hz", [](const OscSurveyEntry& e) -> std::optional<double> { return e.phase_noise_dbc_hz; }},
            {"offset_mhz", [](const OscSurveyEntry& e) -> std::optional<double> { return e.offset_mhz; }},
        };
    }
};

template <>
struct SurveySchema<MixerSurveyEntry> {
    static constexpr std::array<std::string_view, 5> header{"freq_ghz", "pdc_mw", "cg_db", "technology",
                                                            "source"};

    static std::optional<MixerSurveyEntry> parse(detail::RowReader& r) {
        const double f = r.number(0, "freq_ghz");
        const double pdc = r.number(1, "pdc_mw");
        const double cg = r.number(2, "cg_db");
        r.check(std::isnan(f) || f > 0.0, 0, "freq_ghz must be > 0");
        r.check(std::isnan(pdc) || pdc > 0.0, 1, "pdc_mw must be > 0");
        if (!r.ok()) {
            return std::nullopt;
        }
        return MixerSurveyEntry{FrequencyGhz(f), PowerMw(pdc), cg, r.text(3), r.text(4)};
    }

    static std::vector<std::string> row(const MixerSurveyEntry& e) {
        using detail::format_double;
        return {format_double(e.freq.value()), format_double(e.pdc.value()), format_double(e.cg_db),
                e.technology, e.source};
    }

    static std::vector<Feature<MixerSurveyEntry>> features() {
        return {
            {"freq_ghz", [](const MixerSurveyEntry& e) -> std::optional<double> { return e.freq.value(); }},
            {"pdc_mw", [](const MixerSurveyEntry& e) -> std::optional<double> { return e.pdc.value(); }},
            {"cg_db", [](const MixerSurveyEntry& e) -> std::optional<double> { return e.cg_db; }},
        };
    }
};

/// Reads a survey CSV from a stream. `source_name` is used in diagnostics.
template <class Entry>
Dataset<Entry> read_survey_csv(std::istream& in, std::string_view source_name) {
    using Schema = SurveySchema<Entry>;
    const std::string src(source_name);

    Dataset<Entry> ds;
    ds.path = src;
    ds.loaded_at = detail::now_iso8601();

    std::string line;
    std::size_t row = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (row == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (!have_header) {
            const auto cols = detail::split_csv_line(line);
            bool match = cols.size() == Schema::header.size();
            for (std::size_t i = 0; match && i < cols.size(); ++i) {
                match = detail::trim(cols[i]) == Schema::header[i];
            }
            if (!match) {
                std::string expected;
                for (auto h : Schema::header) {
                    expected += (expected.empty() ? "" : ",") + std::string(h);
                }
                throw DataError(src + ":" + std::to_string(row) + ": malformed header, expected '" + expected +
                                "'");
            }
            have_header = true;
            continue;
        }
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != Schema::header.size()) {
            throw DataError(src + ":" + std::to_string(row) + ": expected " +
                            std::to_string(Schema::header.size()) + " fields, found " +
                            std::to_string(fields.size()));
        }
        detail::RowReader reader(fields, row, src);
        if (auto entry = Schema::parse(reader)) {
            ds.entries.push_back(std::move(*entry));
        } else {
            for (auto& d : reader.problems()) {
                ds.rejected.push_back(std::move(d));
            }
        }
    }
    if (!have_header) {
        throw DataError(src + ": zero valid rows (empty file)");
    }
    if (ds.entries.empty()) {
        std::string msg = src + ": zero valid rows";
        if (!ds.rejected.empty()) {
            msg += " (first rejection " + ds.rejected.front().to_string() + ")";
        }
        throw DataError(msg);
    }
    return ds;
}

template <class Entry>
Dataset<Entry> load_survey_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    return read_survey_csv<Entry>(in, path);
}

inline PaDataset load_pa_csv(const std::string& path) { return load_survey_csv<PaSurveyEntry>(path); }
inline OscDataset load_osc_csv(const std::string& path) { return load_survey_csv<OscSurveyEntry>(path); }
inline MixerDataset load_mixer_csv(const std::string& path) { return load_survey_csv<MixerSurveyEntry>(path); }

template <class Entry>
void write_survey_csv(std::ostream& out, const Dataset<Entry>& ds) {
    using Schema = SurveySchema<Entry>;
    for (std::size_t i = 0; i < Schema::header.size(); ++i) {
        out << (i ? "," : "") << Schema::header[i];
    }
    out << '\n';
    for (const auto& e : ds.entries) {
        const auto cells = Schema::row(e);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << detail::csv_escape(cells[i]);
        }
        out << '\n';
    }
}

/// Keeps entries whose technology label contains `needle` (case-insensitive).
template <class Entry>
Dataset<Entry> filter_by_technology(const Dataset<Entry>& ds, std::string_view needle) {
    Dataset<Entry> out;
    out.path = ds.path;
    out.loaded_at = ds.loaded_at;
    const auto key = detail::to_lower(needle);
    for (const auto& e : ds.entries) {
        if (detail::to_lower(e.technology).find(key) != std::string::npos) {
            out.entries.push_back(e);
        }
    }
    if (out.entries.empty()) {
        throw DataError(ds.path + ": no entries match technology filter '" + std::string(needle) + "'");
    }
    return out;
}

struct FeatureStats {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

/// Per-feature min/max/mean/count. Features that no row carries are omitted.
template <class Entry>
std::vector<FeatureStats> summary_stats(const Dataset<Entry>& ds) {
    std::vector<FeatureStats> out;
    for (const auto& feat : SurveySchema<Entry>::features()) {
        FeatureStats st{feat.name, std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity(), 0.0, 0};
        double sum = 0.0;
        for (const auto& e : ds.entries) {
            if (auto v = feat.get(e)) {
                st.min = std::min(st.min, *v);
                st.max = std::max(st.max, *v);
                sum += *v;
                ++st.count;
            }
        }
        if (st.count == 0) {
            continue;
        }
        st.mean = std::clamp(sum / static_cast<double>(st.count), st.min, st.max);
        out.push_back(std::move(st));
    }
    return out;
}

/// Frequency span [min, max] of a dataset in GHz.
template <class Entry>
std::pair<double, double> frequency_span(const Dataset<Entry>& ds) {
    if (ds.entries.empty()) {
        throw DataError("frequency span of an empty dataset");
    }
    double lo = ds.entries.front().freq.value();
    double hi = lo;
    for (const auto& e : ds.entries) {
        lo = std::min(lo, e.freq.value());
        hi = std::max(hi, e.freq.value());
    }
    return {lo, hi};
}

} // namespace txpower
