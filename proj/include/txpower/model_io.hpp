#pragma once

// JSON form of fitted curves and component models:
//
//   {"component": "pa"|"osc"|"mixer", "pif_in_dbm": <mixer only>,
//    "curve": {"kind": "exp"|"parab_exp", "params": {...},
//              "domain_ghz": [lo, hi], "fit": {"rmse": ., "r2": ., "n": .}}}

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "json.hpp"

#include "txpower/components.hpp"
#include "txpower/error.hpp"
#include "txpower/regression.hpp"

namespace txpower {

using Json = nlohmann::ordered_json;

enum class Component { pa, osc, mixer };

inline std::string_view component_name(Component c) {
    switch (c) {
    case Component::pa: return "pa";
    case Component::osc: return "osc";
    case Component::mixer: return "mixer";
    }
    return "?";
}

inline Component parse_component(std::string_view s) {
    if (s == "pa") return Component::pa;
    if (s == "osc") return Component::osc;
    if (s == "mixer") return Component::mixer;
    throw FormatError("unknown component '" + std::string(s) + "' (expected pa, osc or mixer)");
}

inline Json curve_to_json(const ExponentialCurve& c, const FitReport& fit) {
    Json j;
    j["kind"] = "exp";
    j["params"] = {{"a", c.a}, {"b", c.b}};
    j["domain_ghz"] = {c.domain.lo, c.domain.hi};
    j["fit"] = {{"rmse", fit.rmse}, {"r2", fit.r_squared}, {"n", fit.n_points}};
    return j;
}

inline Json curve_to_json(const PiecewiseParabExpCurve& c, const FitReport& fit) {
    Json j;
    j["kind"] = "parab_exp";
    j["params"] = {{"knot_ghz", c.knot}, {"c0", c.c0}, {"c1", c.c1}, {"c2", c.c2}, {"a", c.a}, {"b", c.b}};
    j["domain_ghz"] = {c.domain.lo, c.domain.hi};
    j["fit"] = {{"rmse", fit.rmse}, {"r2", fit.r_squared}, {"n", fit.n_points}};
    return j;
}

namespace detail {

inline double num(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw FormatError(std::string("model JSON: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

inline Domain read_domain(const Json& j) {
    const auto& d = j.at("domain_ghz");
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number()) {
        throw FormatError("model JSON: 'domain_ghz' must be [lo, hi]");
    }
    try {
        return make_domain(d[0].get<double>(), d[1].get<double>());
    } catch (const FitError& e) {
        throw FormatError(std::string("model JSON: ") + e.what());
    }
}

inline FitReport read_fit(const Json& j) {
    FitReport r;
    if (!j.contains("fit")) {
        return r;
    }
    const auto& f = j.at("fit");
    r.rmse = f.value("rmse", 0.0);
    r.r_squared = f.contains("r2") && f.at("r2").is_number() ? f.at("r2").get<double>() : 0.0;
    r.n_points = f.value("n", std::size_t{0});
    return r;
}

} // namespace detail

inline Curve curve_from_json(const Json& j, FitReport* fit = nullptr) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        const auto& p = j.at("params");
        const Domain dom = detail::read_domain(j);
        if (fit) {
            *fit = detail::read_fit(j);
        }
        if (kind == "exp") {
            const double a = detail::num(p, "a");
            if (!(a > 0.0)) {
                throw FormatError("model JSON: exponential amplitude must be positive");
            }
            return ExponentialCurve{a, detail::num(p, "b"), dom};
        }
        if (kind == "parab_exp") {
            PiecewiseParabExpCurve c;
            c.knot = detail::num(p, "knot_ghz");
            c.c0 = detail::num(p, "c0");
            c.c1 = detail::num(p, "c1");
            c.c2 = detail::num(p, "c2");
            c.a = detail::num(p, "a");
            c.b = detail::num(p, "b");
            c.domain = dom;
            return c;
        }
        throw FormatError("model JSON: unknown curve kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model JSON: ") + e.what());
    }
}

using AnyModel = std::variant<PaPowerModel, OscPowerModel, MixerPowerModel>;

inline Component component_of(const AnyModel& m) {
    return static_cast<Component>(m.index());
}

inline Json model_to_json(const PaPowerModel& m) {
    Json j;
    j["component"] = "pa";
    j["curve"] = curve_to_json(m.pae_curve, m.fit);
    return j;
}

inline Json model_to_json(const OscPowerModel& m) {
    Json j;
    j["component"] = "osc";
    j["curve"] = curve_to_json(m.eff_curve, m.fit);
    return j;
}

inline Json model_to_json(const MixerPowerModel& m) {
    Json j;
    j["component"] = "mixer";
    j["pif_in_dbm"] = m.pif_in.value();
    j["curve"] = curve_to_json(m.eta_curve, m.fit);
    return j;
}

inline Json model_to_json(const AnyModel& m) {
    return std::visit([](const auto& x) { return model_to_json(x); }, m);
}

inline AnyModel model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("component") || !j.at("component").is_string()) {
        throw FormatError("model JSON: missing 'component'");
    }
    if (!j.contains("curve")) {
        throw FormatError("model JSON: missing 'curve'");
    }
    const auto comp = parse_component(j.at("component").get<std::string>());
    FitReport fit;
    const Curve curve = curve_from_json(j.at("curve"), &fit);
    switch (comp) {
    case Component::pa:
        if (!std::holds_alternative<ExponentialCurve>(curve)) {
            throw FormatError("model JSON: a PA model needs an 'exp' curve");
        }
        return PaPowerModel{std::get<ExponentialCurve>(curve), fit};
    case Component::osc:
        if (!std::holds_alternative<PiecewiseParabExpCurve>(curve)) {
            throw FormatError("model JSON: an oscillator model needs a 'parab_exp' curve");
        }
        return OscPowerModel{std::get<PiecewiseParabExpCurve>(curve), fit};
    case Component::mixer: {
        if (!std::holds_alternative<ExponentialCurve>(curve)) {
            throw FormatError("model JSON: a mixer model needs an 'exp' curve");
        }
        if (!j.contains("pif_in_dbm") || !j.at("pif_in_dbm").is_number()) {
            throw FormatError("model JSON: mixer model needs 'pif_in_dbm'");
        }
        return MixerPowerModel{std::get<ExponentialCurve>(curve), PowerDbm(j.at("pif_in_dbm").get<double>()), fit};
    }
    }
    throw FormatError("model JSON: unreachable component");
}

inline std::string dump_model(const AnyModel& m) { return model_to_json(m).dump(2) + "\n"; }

inline AnyModel read_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open model '" + path + "'");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

/// Loads a model and insists on its component kind.
template <class Model>
Model read_model_as(const std::string& path) {
    auto any = read_model_file(path);
    if (!std::holds_alternative<Model>(any)) {
        constexpr auto want = std::is_same_v<Model, PaPowerModel>    ? "pa"
                              : std::is_same_v<Model, OscPowerModel> ? "osc"
                                                                     : "mixer";
        throw FormatError(path + ": expected a '" + want + "' model, found '" +
                          std::string(component_name(component_of(any))) + "'");
    }
    return std::get<Model>(any);
}

} // namespace txpower
