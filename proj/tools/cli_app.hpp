#pragma once

// txpower command-line front end. Exit codes: 0 success, 1 usage error,
// 2 data / fit / model error. Diagnostics go to the error stream only.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "txpower/breakdown_io.hpp"
#include "txpower/chain.hpp"
#include "txpower/components.hpp"
#include "txpower/correlation.hpp"
#include "txpower/dataset.hpp"
#include "txpower/model_io.hpp"
#include "txpower/plot.hpp"

namespace txpower::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Writes to `path`, or to `out` when path is empty or "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw DataError("cannot write '" + path + "'");
    }
    f << text;
    if (!f) {
        throw DataError("failed writing '" + path + "'");
    }
}

inline std::vector<FrequencyGhz> to_freqs(const std::vector<double>& v) {
    std::vector<FrequencyGhz> out;
    for (double f : v) {
        out.emplace_back(f);
    }
    return out;
}

inline std::vector<PowerDbm> to_levels(const std::vector<double>& v) {
    std::vector<PowerDbm> out;
    for (double p : v) {
        out.emplace_back(p);
    }
    return out;
}

template <class Entry>
void report_rejections(const Dataset<Entry>& ds, std::ostream& err) {
    for (const auto& d : ds.rejected) {
        err << "warning: " << ds.path << ":" << d.to_string() << " (row rejected)\n";
    }
}

inline std::string render_table(const std::vector<ChainCell>& cells, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        os << breakdown_to_json(cells).dump(2) << '\n';
    } else {
        write_breakdown_csv(os, cells);
    }
    return os.str();
}

inline int table_status(const std::vector<ChainCell>& cells, std::ostream& err) {
    int status = kOk;
    for (const auto& c : cells) {
        if (!c.ok()) {
            err << "error: cell f=" << g6(c.f.value()) << " GHz, mixer P_out=" << g6(c.mixer_pout.value())
                << " dBm: " << c.error << '\n';
            status = kDataError;
        }
    }
    return status;
}

} // namespace detail

struct FitArgs {
    std::string component;
    std::string input;
    std::string output;
    std::size_t bins = 8;
    double bp_weight = 10.0;
    std::string tech;
    double pif_in = -20.0;
};

inline int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    FitOptions opt;
    opt.n_bins = a.bins;
    opt.bp_weight = a.bp_weight;
    if (!a.tech.empty()) {
        opt.technology = a.tech;
    }
    opt.pif_in = PowerDbm(a.pif_in);

    AnyModel model;
    std::string extra;
    const auto comp = parse_component(a.component);
    if (comp == Component::pa) {
        const auto ds = load_pa_csv(a.input);
        detail::report_rejections(ds, err);
        const auto m = build_pa_model(ds, opt);
        extra = " a=" + detail::g6(m.pae_curve.a) + " b=" + detail::g6(m.pae_curve.b);
        model = m;
    } else if (comp == Component::osc) {
        const auto ds = load_osc_csv(a.input);
        detail::report_rejections(ds, err);
        const auto m = build_osc_model(ds, opt);
        extra = " knot_ghz=" + detail::g6(m.eff_curve.knot) + " peak_eff=" + detail::g6(m.eff_curve(m.eff_curve.knot));
        model = m;
    } else {
        const auto ds = load_mixer_csv(a.input);
        detail::report_rejections(ds, err);
        const auto m = build_mixer_model(ds, opt);
        extra = " a=" + detail::g6(m.eta_curve.a) + " b=" + detail::g6(m.eta_curve.b);
        model = m;
    }
    detail::emit(a.output, dump_model(model), out);

    const FitReport& r = std::visit([](const auto& m) -> const FitReport& { return m.fit; }, model);
    const Domain& d = std::visit([](const auto& m) -> const Domain& { return m.domain(); }, model);
    // keep stdout clean when the model itself went there
    std::ostream& summary = (a.output.empty() || a.output == "-") ? err : out;
    summary << "component=" << component_name(comp) << " n=" << r.n_points << " n_best_points=" << r.n_best_points
            << " rmse=" << detail::g6(r.rmse) << " r2=" << detail::g6(r.r_squared) << extra
            << " domain_ghz=[" << detail::g6(d.lo) << "," << detail::g6(d.hi) << "]\n";
    return kOk;
}

struct QueryArgs {
    std::string model;
    std::optional<double> freq;
    std::optional<double> pout;
    std::optional<double> pin;
    std::optional<double> prf;
};

inline int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream&) {
    if (!a.freq) {
        throw UsageError("query: --freq is required");
    }
    const auto model = read_model_file(a.model);
    const FrequencyGhz f(*a.freq);
    std::ostringstream line;
    DcPower r;
    const char* metric = "";
    switch (component_of(model)) {
    case Component::pa:
        if (!a.pout || !a.pin || a.prf) {
            throw UsageError("query: a PA model takes --pout and --pin");
        }
        r = pa_pdc(std::get<PaPowerModel>(model), f, PowerDbm(*a.pout), PowerDbm(*a.pin));
        metric = "PAE";
        break;
    case Component::osc:
        if (!a.prf || a.pout || a.pin) {
            throw UsageError("query: an oscillator model takes --prf");
        }
        r = osc_pdc(std::get<OscPowerModel>(model), f, PowerDbm(*a.prf));
        metric = "efficiency";
        break;
    case Component::mixer:
        if (!a.pout || a.pin || a.prf) {
            throw UsageError("query: a mixer model takes --pout");
        }
        r = mixer_pdc(std::get<MixerPowerModel>(model), f, PowerDbm(*a.pout));
        metric = "eta_per_mw";
        break;
    }
    line << component_name(component_of(model)) << " f=" << detail::g6(f.value()) << " GHz P_DC="
         << detail::g6(r.pdc.value()) << " mW " << metric << "=" << detail::g6(r.metric);
    if (r.extrapolated) {
        line << " extrapolated";
    }
    out << line.str() << '\n';
    return kOk;
}

struct ChainArgs {
    std::string pa;
    std::string mixer;
    std::string osc;
    std::vector<double> mixer_pout{-20.0, -10.0, -5.0, 0.0};
    double pa_pout = 0.0;
    double osc_prf = -10.0;
    std::string format = "csv";
    std::string output;
};

struct BreakdownArgs : ChainArgs {
    std::vector<double> freqs{28.0, 60.0, 140.0, 243.0};
};

struct SweepArgs : ChainArgs {
    double fmin = 10.0;
    double fmax = 320.0;
    std::size_t points = 100;
    bool log = false;
    bool allow_extrapolation = false;
};

struct LoadedModels {
    PaPowerModel pa;
    MixerPowerModel mixer;
    OscPowerModel osc;
};

inline LoadedModels load_models(const ChainArgs& a) {
    return {read_model_as<PaPowerModel>(a.pa), read_model_as<MixerPowerModel>(a.mixer),
            read_model_as<OscPowerModel>(a.osc)};
}

inline ChainConfig chain_config(const ChainArgs& a, const LoadedModels& m) {
    ChainConfig cfg;
    cfg.pa_pout = PowerDbm(a.pa_pout);
    cfg.osc_prf = PowerDbm(a.osc_prf);
    cfg.mixer_pout_levels = detail::to_levels(a.mixer_pout);
    cfg.mixer_pif_in = m.mixer.pif_in;
    return cfg;
}

inline int cmd_breakdown(const BreakdownArgs& a, std::ostream& out, std::ostream& err) {
    const auto models = load_models(a);
    auto cfg = chain_config(a, models);
    cfg.frequencies = detail::to_freqs(a.freqs);
    const auto cells = compose(cfg, models.pa, models.mixer, models.osc);
    detail::emit(a.output, detail::render_table(cells, a.format), out);
    return detail::table_status(cells, err);
}

inline int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    if (a.points == 0) {
        throw UsageError("sweep: --points must be at least 1");
    }
    if (!(a.fmax >= a.fmin)) {
        throw UsageError("sweep: --fmax must not be below --fmin");
    }
    const auto models = load_models(a);
    const auto cfg = chain_config(a, models);
    const auto grid = a.log ? log_grid(a.fmin, a.fmax, a.points) : linear_grid(a.fmin, a.fmax, a.points);
    const auto cells = sweep(cfg, grid, models.pa, models.mixer, models.osc, {a.allow_extrapolation});
    detail::emit(a.output, detail::render_table(cells, a.format), out);
    return detail::table_status(cells, err);
}

struct CorrArgs {
    std::string input;
    std::vector<std::string> features{"psat", "pae", "gain", "area"};
    std::string tech;
    int precision = 2;
};

inline int cmd_corr(const CorrArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<PaFeature> feats;
    for (const auto& name : a.features) {
        try {
            feats.push_back(parse_pa_feature(name));
        } catch (const DataError& e) {
            throw UsageError(e.what());
        }
    }
    auto ds = load_pa_csv(a.input);
    detail::report_rejections(ds, err);
    if (!a.tech.empty()) {
        ds = filter_by_technology(ds, a.tech);
    }
    const auto m = correlation_matrix(ds, feats);
    std::size_t w = 0;
    for (const auto& l : m.labels) {
        w = std::max(w, l.size());
    }
    const auto col_w = static_cast<int>(std::max<std::size_t>(w, static_cast<std::size_t>(a.precision) + 4)) + 2;
    std::ostringstream os;
    os << std::setw(static_cast<int>(w)) << "";
    for (const auto& l : m.labels) {
        os << std::setw(col_w) << l;
    }
    os << '\n';
    os << std::fixed << std::setprecision(a.precision);
    for (std::size_t i = 0; i < m.size(); ++i) {
        os << std::left << std::setw(static_cast<int>(w)) << m.labels[i] << std::right;
        for (std::size_t j = 0; j < m.size(); ++j) {
            os << std::setw(col_w) << m(i, j);
        }
        os << '\n';
    }
    out << os.str();
    return kOk;
}

struct PlotArgs {
    std::string breakdown;
    std::string model;
    std::string output;
};

inline int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream&) {
    if (a.breakdown.empty() == a.model.empty()) {
        throw UsageError("plot: give exactly one of --breakdown or --model");
    }
    std::string svg;
    if (!a.breakdown.empty()) {
        std::ifstream in(a.breakdown, std::ios::binary);
        if (!in) {
            throw DataError("cannot open '" + a.breakdown + "'");
        }
        svg = render_breakdown_svg(read_breakdown_csv(in, a.breakdown));
    } else {
        svg = render_model_svg(read_model_file(a.model));
    }
    detail::emit(a.output, svg, out);
    return kOk;
}

/// Parses `args` (args[0] is the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Transmitter front-end DC power models for wireless network-on-chip links", "txpower"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* sc_fit = app.add_subcommand("fit", "Fit a component power model from a survey CSV");
    sc_fit->add_option("--component", fit.component, "pa, osc or mixer")
        ->required()
        ->check(CLI::IsMember({"pa", "osc", "mixer"}));
    sc_fit->add_option("--input", fit.input, "Survey CSV")->required();
    sc_fit->add_option("--output", fit.output, "Model JSON ('-' for stdout)")->required();
    sc_fit->add_option("--bins", fit.bins, "Logarithmic best-point bins")->capture_default_str()->check(CLI::PositiveNumber);
    sc_fit->add_option("--bp-weight", fit.bp_weight, "Weight of best points")->capture_default_str()->check(CLI::PositiveNumber);
    sc_fit->add_option("--tech", fit.tech, "Keep rows whose technology contains this text");
    sc_fit->add_option("--pif-in", fit.pif_in, "Mixer IF input level [dBm]")->capture_default_str();

    QueryArgs query;
    auto* sc_query = app.add_subcommand("query", "Evaluate a model at one frequency");
    sc_query->add_option("--model", query.model, "Model JSON")->required();
    sc_query->add_option("--freq", query.freq, "Frequency [GHz]");
    sc_query->add_option("--pout", query.pout, "Output power [dBm] (PA, mixer)");
    sc_query->add_option("--pin", query.pin, "Input power [dBm] (PA)");
    sc_query->add_option("--prf", query.prf, "Oscillator RF output [dBm]");

    auto add_chain = [](CLI::App* sc, ChainArgs& c) {
        sc->add_option("--pa", c.pa, "PA model JSON")->required();
        sc->add_option("--mixer", c.mixer, "Mixer model JSON")->required();
        sc->add_option("--osc", c.osc, "Oscillator model JSON")->required();
        sc->add_option("--mixer-pout", c.mixer_pout, "Mixer output levels [dBm]")->delimiter(',')->capture_default_str();
        sc->add_option("--pa-pout", c.pa_pout, "PA output [dBm]")->capture_default_str();
        sc->add_option("--osc-prf", c.osc_prf, "Oscillator RF output [dBm]")->capture_default_str();
        sc->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        sc->add_option("--output", c.output, "Output file (default stdout)");
    };

    BreakdownArgs bd;
    auto* sc_bd = app.add_subcommand("breakdown", "Chain DC power breakdown at a few frequencies");
    add_chain(sc_bd, bd);
    sc_bd->add_option("--freqs", bd.freqs, "Frequencies [GHz]")->delimiter(',')->capture_default_str();

    SweepArgs sw;
    auto* sc_sw = app.add_subcommand("sweep", "Chain DC power breakdown over a dense frequency grid");
    add_chain(sc_sw, sw);
    sc_sw->add_option("--fmin", sw.fmin, "Lowest frequency [GHz]")->capture_default_str()->check(CLI::PositiveNumber);
    sc_sw->add_option("--fmax", sw.fmax, "Highest frequency [GHz]")->capture_default_str()->check(CLI::PositiveNumber);
    sc_sw->add_option("--points", sw.points, "Grid points")->capture_default_str();
    sc_sw->add_flag("--log", sw.log, "Logarithmic grid");
    sc_sw->add_flag("--allow-extrapolation", sw.allow_extrapolation, "Permit frequencies outside every model domain");

    CorrArgs corr;
    auto* sc_corr = app.add_subcommand("corr", "Correlation matrix of PA survey features");
    sc_corr->add_option("--input", corr.input, "PA survey CSV")->required();
    sc_corr->add_option("--features", corr.features, "Features (freq, psat, pae, gain, area)")
        ->delimiter(',')
        ->capture_default_str();
    sc_corr->add_option("--tech", corr.tech, "Keep rows whose technology contains this text");
    sc_corr->add_option("--precision", corr.precision, "Decimals")->capture_default_str()->check(CLI::Range(0, 17));

    PlotArgs plot;
    auto* sc_plot = app.add_subcommand("plot", "Render a breakdown table or model curve as SVG");
    auto* opt_bd = sc_plot->add_option("--breakdown", plot.breakdown, "Breakdown CSV");
    auto* opt_model = sc_plot->add_option("--model", plot.model, "Model JSON");
    opt_bd->excludes(opt_model);
    sc_plot->add_option("--output", plot.output, "SVG file (default stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args) {
        argv.push_back(s.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (sc_fit->parsed()) return cmd_fit(fit, out, err);
        if (sc_query->parsed()) return cmd_query(query, out, err);
        if (sc_bd->parsed()) return cmd_breakdown(bd, out, err);
        if (sc_sw->parsed()) return cmd_sweep(sw, out, err);
        if (sc_corr->parsed()) return cmd_corr(corr, out, err);
        if (sc_plot->parsed()) return cmd_plot(plot, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

} // namespace txpower::cli
