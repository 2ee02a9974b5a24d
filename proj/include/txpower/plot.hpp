#pragma once

// Static SVG 1.1 renderings: a stacked-bar chart of a chain breakdown and a
// line chart of a fitted curve. Output depends only on the input (fixed
// canvas, fixed number formatting).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "txpower/chain.hpp"
#include "txpower/model_io.hpp"
#include "txpower/regression.hpp"

namespace txpower {

namespace svg {

inline constexpr double kWidth = 800.0;
inline constexpr double kHeight = 480.0;
inline constexpr double kLeft = 70.0;
inline constexpr double kRight = 20.0;
inline constexpr double kTop = 40.0;
inline constexpr double kBottom = 60.0;
inline constexpr std::size_t kCurveSamples = 200;

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    return s == "-0.00" ? "0.00" : s;
}

inline std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

inline void open(std::ostringstream& os, std::string_view title) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth) << "\" height=\""
       << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
       << "\" fill=\"white\"/>\n"
       << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << escape(title) << "</text>\n";
}

// Axes frame plus `n` evenly spaced y ticks from 0..y_max (or y_min..y_max).
inline void y_axis(std::ostringstream& os, double y_min, double y_max, std::string_view y_label) {
    const double x0 = kLeft, y0 = kHeight - kBottom, y1 = kTop;
    os << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
       << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
       << num(y0) << "\"/>\n"
       << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y1)
       << "\"/>\n</g>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = y_min + (y_max - y_min) * i / 4.0;
        const double y = y0 - (y0 - y1) * i / 4.0;
        os << "<text class=\"ytick\" x=\"" << num(x0 - 6) << "\" y=\"" << num(y + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label(v) << "</text>\n";
    }
    os << "<text x=\"16\" y=\"" << num((y0 + y1) / 2) << "\" transform=\"rotate(-90 16 " << num((y0 + y1) / 2)
       << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(y_label)
       << "</text>\n";
}

} // namespace svg

/// Stacked bars (PA, mixer, oscillator) per row, one group per frequency.
inline std::string render_breakdown_svg(const std::vector<ChainCell>& cells) {
    std::vector<double> freqs;
    for (const auto& c : cells) {
        if (std::find(freqs.begin(), freqs.end(), c.f.value()) == freqs.end()) {
            freqs.push_back(c.f.value());
        }
    }
    double y_max = 0.0;
    for (const auto& c : cells) {
        if (c.breakdown) {
            y_max = std::max(y_max, c.breakdown->total_pdc.value());
        }
    }
    if (!(y_max > 0.0)) {
        y_max = 1.0;
    }

    std::ostringstream os;
    svg::open(os, "Transmitter DC power breakdown");
    svg::y_axis(os, 0.0, y_max, "P_DC [mW]");

    const double plot_w = svg::kWidth - svg::kLeft - svg::kRight;
    const double plot_h = svg::kHeight - svg::kTop - svg::kBottom;
    const double base = svg::kHeight - svg::kBottom;
    const double group_w = freqs.empty() ? plot_w : plot_w / static_cast<double>(freqs.size());

    static constexpr const char* kColors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    static constexpr const char* kParts[3] = {"pa", "mixer", "osc"};

    for (std::size_t g = 0; g < freqs.size(); ++g) {
        std::vector<const ChainCell*> rows;
        for (const auto& c : cells) {
            if (c.f.value() == freqs[g]) {
                rows.push_back(&c);
            }
        }
        const double gx = svg::kLeft + group_w * static_cast<double>(g);
        const double bar_w = group_w * 0.8 / static_cast<double>(rows.size());
        os << "<g class=\"group\" data-freq-ghz=\"" << svg::label(freqs[g]) << "\">\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto& c = *rows[r];
            const double x = gx + group_w * 0.1 + bar_w * static_cast<double>(r);
            os << "<g class=\"bar\" data-mixer-pout-dbm=\"" << svg::label(c.mixer_pout.value()) << "\"";
            if (!c.breakdown) {
                os << " data-error=\"" << svg::escape(c.error) << "\"";
            }
            os << ">\n";
            double parts[3] = {0.0, 0.0, 0.0};
            if (c.breakdown) {
                parts[0] = c.breakdown->pa_pdc.value();
                parts[1] = c.breakdown->mixer_pdc.value();
                parts[2] = c.breakdown->osc_pdc.value();
            }
            double y = base;
            for (int k = 0; k < 3; ++k) {
                const double h = parts[k] / y_max * plot_h;
                y -= h;
                os << "<rect class=\"" << kParts[k] << "\" x=\"" << svg::num(x) << "\" y=\"" << svg::num(y)
                   << "\" width=\"" << svg::num(bar_w * 0.9) << "\" height=\"" << svg::num(h) << "\" fill=\""
                   << kColors[k] << "\"/>\n";
            }
            os << "</g>\n";
        }
        os << "<text x=\"" << svg::num(gx + group_w / 2) << "\" y=\"" << svg::num(base + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << svg::label(freqs[g])
           << " GHz</text>\n</g>\n";
    }

    for (int k = 0; k < 3; ++k) {
        const double lx = svg::kLeft + 10 + 110.0 * k;
        const double ly = svg::kHeight - 22;
        os << "<rect x=\"" << svg::num(lx) << "\" y=\"" << svg::num(ly - 10) << "\" width=\"12\" height=\"12\" fill=\""
           << kColors[k] << "\"/>\n"
           << "<text x=\"" << svg::num(lx + 16) << "\" y=\"" << svg::num(ly) << "\" font-family=\"sans-serif\" "
           << "font-size=\"12\">" << kParts[k] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Polyline of the curve sampled at 200 evenly spaced frequencies over its
/// domain.
inline std::string render_curve_svg(const Curve& curve, std::string_view title, std::string_view y_label) {
    const Domain dom = curve_domain(curve);
    std::vector<double> xs(svg::kCurveSamples), ys(svg::kCurveSamples);
    for (std::size_t i = 0; i < svg::kCurveSamples; ++i) {
        xs[i] = i + 1 == svg::kCurveSamples
                    ? dom.hi
                    : dom.lo + (dom.hi - dom.lo) * static_cast<double>(i) / (svg::kCurveSamples - 1);
        ys[i] = std::visit([&](const auto& c) { return c(xs[i]); }, curve);
    }
    double y_min = std::min(0.0, *std::min_element(ys.begin(), ys.end()));
    double y_max = *std::max_element(ys.begin(), ys.end());
    if (!(y_max > y_min)) {
        y_max = y_min + 1.0;
    }

    std::ostringstream os;
    svg::open(os, title);
    svg::y_axis(os, y_min, y_max, y_label);
    const double plot_w = svg::kWidth - svg::kLeft - svg::kRight;
    const double plot_h = svg::kHeight - svg::kTop - svg::kBottom;
    const double base = svg::kHeight - svg::kBottom;

    os << "<polyline class=\"curve\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double px = svg::kLeft + (xs[i] - dom.lo) / (dom.hi - dom.lo) * plot_w;
        const double py = base - (ys[i] - y_min) / (y_max - y_min) * plot_h;
        os << (i ? " " : "") << svg::num(px) << ',' << svg::num(py);
    }
    os << "\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double f = dom.lo + (dom.hi - dom.lo) * i / 4.0;
        os << "<text class=\"xtick\" x=\"" << svg::num(svg::kLeft + plot_w * i / 4.0) << "\" y=\""
           << svg::num(base + 18) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << svg::label(f) << "</text>\n";
    }
    os << "<text x=\"" << svg::num(svg::kLeft + plot_w / 2) << "\" y=\"" << svg::num(svg::kHeight - 12)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">f [GHz]</text>\n"
       << "</svg>\n";
    return os.str();
}

inline std::string render_model_svg(const AnyModel& model) {
    switch (component_of(model)) {
    case Component::pa:
        return render_curve_svg(std::get<PaPowerModel>(model).pae_curve, "PA power-added efficiency", "PAE");
    case Component::osc:
        return render_curve_svg(std::get<OscPowerModel>(model).eff_curve, "Oscillator DC-to-RF efficiency",
                                "efficiency");
    case Component::mixer:
        return render_curve_svg(std::get<MixerPowerModel>(model).eta_curve, "Mixer gain per DC power",
                                "G_lin / P_DC [1/mW]");
    }
    return {};
}

} // namespace txpower
