// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "txpower/breakdown_io.hpp"
#include "txpower/correlation.hpp"

using namespace txpower;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string data(const char* name) { return std::string(TXPOWER_DATA_DIR) + "/" + name; }

Outcome unit_round_trip() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-60.0, 40.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = u(rng);
        worst = std::max(worst, std::abs(mw_to_dbm(dbm_to_mw(PowerDbm(x))).value() - x));
    }
    return {worst < 1e-9, "max |err| " + fmt("%.3g", worst)};
}

Outcome fom_formulas() {
    const double fom = osc_fom(-100, PowerMw(10), PowerDbm(0), FrequencyGhz(100), 1.0);
    const double cg = mixer_cg(PowerMw(1), PowerMw(0.1));
    const double pae = compute_pae(PowerMw(1), PowerMw(0.01), PowerMw(9.9));
    const bool ok = std::abs(fom + 190.0) <= 1e-9 && std::abs(cg - 10.0) <= 1e-9 && std::abs(pae - 0.1) <= 1e-12;
    return {ok, "FOM " + fmt("%.12g", fom) + ", CG " + fmt("%.12g", cg) + " dB, PAE " + fmt("%.15g", pae)};
}

Outcome fit_recovery() {
    std::mt19937_64 rng(20241018);
    std::uniform_real_distribution<double> ua(0.01, 10.0), ub(-0.05, 0.0);
    std::normal_distribution<double> noise(0.0, 0.05);
    double worst_clean = 0.0, worst_noisy = 0.0;
    for (int t = 0; t < 50; ++t) {
        const double a = ua(rng), b = ub(rng);
        std::vector<Point> clean, noisy;
        for (int i = 0; i < 100; ++i) {
            const double f = 10.0 + 310.0 * i / 99.0;
            const double y = a * std::exp(b * f);
            clean.push_back({f, y});
            noisy.push_back({f, y * (1.0 + noise(rng))});
        }
        const auto c = fit_exponential_loglinear(clean).curve;
        worst_clean = std::max({worst_clean, rel(c.a, a), rel(c.b, b)});
        const auto n = fit_exponential_loglinear(noisy).curve;
        worst_noisy = std::max({worst_noisy, rel(n.a, a), rel(n.b, b)});
    }
    return {worst_clean <= 1e-9 && worst_noisy <= 0.10,
            "noiseless max rel " + fmt("%.3g", worst_clean) + ", 5% noise max rel " + fmt("%.3g", worst_noisy)};
}

Outcome weighted_oracle() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(u(rng) * 60);
        std::vector<Point> pts;
        std::vector<WeightedPoint> wpts;
        for (int i = 0; i < n; ++i) {
            const double f = 5.0 + 300.0 * u(rng);
            const double y = std::exp(-4.0 + 6.0 * u(rng) - 0.01 * f);
            pts.push_back({f, y});
            wpts.push_back({f, y, 1.0});
        }
        if (n == 2 && pts[0].f == pts[1].f) continue;
        const auto w = fit_exponential_weighted(wpts).curve;
        const auto c = fit_exponential_loglinear(pts).curve;
        const auto o = oracle::normal_equations(pts);
        worst = std::max({worst, rel(w.a, c.a), rel(w.b, c.b), rel(std::log(w.a), o.ln_a), rel(w.b, o.b)});
    }
    return {worst <= 1e-9, "max rel " + fmt("%.3g", worst)};
}

// Gauss-Newton on y-space squared error, started from the log-linear fit.
double best_exponential_sse(const std::vector<Point>& pts) {
    auto c = fit_exponential_loglinear(pts).curve;
    double sse = residual_sum_of_squares(c, std::span<const Point>(pts));
    for (int it = 0; it < 200; ++it) {
        double jaa = 0, jab = 0, jbb = 0, ga = 0, gb = 0;
        for (const auto& p : pts) {
            const double e = std::exp(c.b * p.f);
            const double r = p.y - c.a * e;
            const double da = e, db = c.a * p.f * e;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        const double det = jaa * jbb - jab * jab;
        if (!(std::abs(det) > 0)) break;
        auto next = c;
        next.a += (jbb * ga - jab * gb) / det;
        next.b += (jaa * gb - jab * ga) / det;
        const double s = residual_sum_of_squares(next, std::span<const Point>(pts));
        if (!(s < sse)) break;
        c = next;
        sse = s;
    }
    return sse;
}

Outcome knot_recovery() {
    const auto ds = load_osc_csv(data("osc_survey.csv"));
    const auto m = build_osc_model(ds);
    std::vector<Point> pts;
    for (const auto& e : ds.entries) {
        pts.push_back({e.freq.value(), osc_dc_to_rf_eff(dbm_to_mw(e.pout), e.pdc)});
    }
    const auto best = select_best_points(pts, FitOptions{}.n_bins);
    const auto grid = knot_candidates(best);
    double step = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i - 1] <= 42.0 && 42.0 <= grid[i]) step = std::max(step, grid[i] - grid[i - 1]);
    }
    const double knot = m.eff_curve.knot;
    const double pw = residual_sum_of_squares(m.eff_curve, std::span<const Point>(best));
    const double ex = best_exponential_sse(best);
    const bool ok = step > 0.0 && std::abs(knot - 42.0) <= step && pw <= ex;
    return {ok, "knot " + fmt("%.6g", knot) + " GHz (grid step " + fmt("%.4g", step) + "), SSE piecewise " +
                    fmt("%.3g", pw) + " vs exponential " + fmt("%.3g", ex)};
}

Outcome best_points() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t mismatches = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(u(rng) * 80);
        const std::size_t bins = 1 + static_cast<std::size_t>(u(rng) * 12);
        std::vector<Point> pts;
        for (int i = 0; i < n; ++i) {
            // coarse grids force ties in both frequency and value
            const double f = t % 2 ? std::round(1 + 40 * u(rng)) * 7.5 : 10.0 * std::pow(30.0, u(rng));
            const double y = t % 3 ? std::round(u(rng) * 6) : u(rng);
            pts.push_back({f, y});
        }
        if (select_best_indices(pts, bins) != oracle::best_per_bin(pts, bins)) ++mismatches;
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches in 200 sets"};
}

Outcome correlation() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_oracle = 0.0, worst_scale = 0.0;
    bool shape = true;
    const auto feats = default_pa_features();
    for (int t = 0; t < 100; ++t) {
        const int n = 3 + static_cast<int>(u(rng) * 60);
        PaDataset ds, scaled;
        const double k[4] = {0.1 + 10 * u(rng), 0.1 + 10 * u(rng), 0.1 + 10 * u(rng), 0.1 + 10 * u(rng)};
        std::vector<std::vector<double>> cols(4);
        for (int i = 0; i < n; ++i) {
            const double v[4] = {-5 + 25 * u(rng), 1 + 60 * u(rng), 5 + 20 * u(rng), 0.05 + 2 * u(rng)};
            const double pae = v[1] + 0.3 * v[0];
            ds.entries.push_back({FrequencyGhz(60), PowerDbm(v[0]), pae, v[2], v[3], "", ""});
            scaled.entries.push_back({FrequencyGhz(60), PowerDbm(k[0] * v[0]), k[1] * pae, k[2] * v[2], k[3] * v[3], "", ""});
            cols[0].push_back(v[0]);
            cols[1].push_back(pae);
            cols[2].push_back(v[2]);
            cols[3].push_back(v[3]);
        }
        const auto m = correlation_matrix(ds, feats);
        const auto s = correlation_matrix(scaled, feats);
        for (std::size_t i = 0; i < 4; ++i) {
            shape = shape && m(i, i) == 1.0;
            for (std::size_t j = 0; j < 4; ++j) {
                shape = shape && m(i, j) == m(j, i) && std::abs(m(i, j)) <= 1.0;
                worst_oracle = std::max(worst_oracle, std::abs(m(i, j) - oracle::pearson_sums(cols[i], cols[j])));
                worst_scale = std::max(worst_scale, std::abs(m(i, j) - s(i, j)));
            }
        }
    }
    return {shape && worst_oracle <= 1e-12 && worst_scale <= 1e-12,
            std::string(shape ? "symmetric, unit diagonal, bounded" : "shape violated") + "; oracle max |diff| " +
                fmt("%.3g", worst_oracle) + ", scaling max |diff| " + fmt("%.3g", worst_scale)};
}

struct Bundled {
    PaPowerModel pa;
    MixerPowerModel mixer;
    OscPowerModel osc;
};

const Bundled& bundled() {
    static const Bundled b{build_pa_model(load_pa_csv(data("pa_survey.csv"))),
                           build_mixer_model(load_mixer_csv(data("mixer_survey.csv"))),
                           build_osc_model(load_osc_csv(data("osc_survey.csv")))};
    return b;
}

Outcome chain_decomposition() {
    const ChainConfig cfg;
    const auto& m = bundled();
    const auto cells = compose(cfg, m.pa, m.mixer, m.osc);
    std::size_t bad = 0, bypass = 0;
    double worst_share = 0.0;
    for (const auto& c : cells) {
        if (!c.ok()) {
            ++bad;
            continue;
        }
        const auto& b = *c.breakdown;
        if (b.total_pdc.value() != b.pa_pdc.value() + b.mixer_pdc.value() + b.osc_pdc.value()) ++bad;
        worst_share = std::max(worst_share, std::abs(b.pa_share + b.mixer_share + b.osc_share - 1.0));
        if (c.mixer_pout == cfg.pa_pout) {
            ++bypass;
            if (b.pa_pdc.value() != 0.0) ++bad;
        }
    }
    return {cells.size() == 16 && bad == 0 && bypass == 4 && worst_share <= 1e-9,
            std::to_string(cells.size()) + " rows, " + std::to_string(bad) + " violations, " + std::to_string(bypass) +
                " bypass rows, share sum max |err| " + fmt("%.3g", worst_share)};
}

Outcome extrapolation_flags() {
    const auto& m = bundled();
    ChainConfig cfg;
    cfg.frequencies = {FrequencyGhz(243)};
    const auto cells = compose(cfg, m.pa, m.mixer, m.osc);
    const bool covered = m.pa.covers(FrequencyGhz(243)) && m.osc.covers(FrequencyGhz(243));
    bool ok = m.mixer.domain().hi == 140.0 && covered && !cells.empty();
    for (const auto& c : cells) {
        ok = ok && c.ok() && c.breakdown->extrapolated.mixer && !c.breakdown->extrapolated.pa &&
             !c.breakdown->extrapolated.osc;
    }
    const auto q = mixer_pdc(m.mixer, FrequencyGhz(243), PowerDbm(-5));
    ok = ok && q.extrapolated;
    return {ok, "mixer domain hi " + fmt("%.6g", m.mixer.domain().hi) + " GHz, " + std::to_string(cells.size()) +
                    " cells at 243 GHz"};
}

Outcome monotonicity() {
    const auto& m = bundled();
    const auto d = m.pa.domain();
    bool increasing = true;
    double prev = -1.0;
    for (int i = 0; i < 50; ++i) {
        const double f = d.lo + (d.hi - d.lo) * i / 49.0;
        const double p = pa_pdc(m.pa, FrequencyGhz(f), PowerDbm(0), PowerDbm(-20)).pdc.value();
        increasing = increasing && p > prev;
        prev = p;
    }
    double worst = 0.0;
    for (double f : {10.0, 28.0, 60.0, 94.0, 140.0, 243.0}) {
        for (double p : {-20.0, -15.0, -10.0, -5.0}) {
            const double lo = mixer_pdc(m.mixer, FrequencyGhz(f), PowerDbm(p)).pdc.value();
            const double hi = mixer_pdc(m.mixer, FrequencyGhz(f), PowerDbm(p + 10)).pdc.value();
            worst = std::max(worst, rel(hi, 10.0 * lo));
        }
    }
    return {increasing && worst <= 1e-12, std::string(increasing ? "PA P_DC strictly increasing" : "PA P_DC not monotone") +
                                              "; mixer x10 max rel err " + fmt("%.3g", worst)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool pipeline(const fs::path& dir) {
    fs::create_directories(dir);
    const std::string cli = TXPOWER_CLI_PATH;
    auto sh = [&](const std::string& args) {
        return std::system(("\"" + cli + "\" " + args + " >/dev/null 2>&1").c_str()) == 0;
    };
    auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
    return sh("fit --component pa --input " + q(data("pa_survey.csv")) + " --output " + q(dir / "pa.json")) &&
           sh("fit --component mixer --input " + q(data("mixer_survey.csv")) + " --output " + q(dir / "mixer.json")) &&
           sh("fit --component osc --input " + q(data("osc_survey.csv")) + " --output " + q(dir / "osc.json")) &&
           sh("breakdown --pa " + q(dir / "pa.json") + " --mixer " + q(dir / "mixer.json") + " --osc " +
              q(dir / "osc.json") + " --output " + q(dir / "breakdown.csv")) &&
           sh("plot --breakdown " + q(dir / "breakdown.csv") + " --output " + q(dir / "breakdown.svg"));
}

Outcome cli_determinism() {
    const auto root = fs::temp_directory_path() / "txpower_acceptance";
    fs::remove_all(root);
    if (!pipeline(root / "run1") || !pipeline(root / "run2")) {
        return {false, "pipeline command failed"};
    }
    std::size_t same = 0, total = 0;
    for (const char* f : {"pa.json", "mixer.json", "osc.json", "breakdown.csv", "breakdown.svg"}) {
        const auto a = slurp(root / "run1" / f);
        ++total;
        if (!a.empty() && a == slurp(root / "run2" / f)) ++same;
    }
    fs::remove_all(root);
    return {same == total, std::to_string(same) + "/" + std::to_string(total) + " artifacts byte-identical"};
}

struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> check;
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {"unit round-trip", 1.0, unit_round_trip},
        {"figure-of-merit formulas", 0.0, fom_formulas},
        {"exponential fit recovery", 5.0, fit_recovery},
        {"weighted fit oracle equivalence", 0.0, weighted_oracle},
        {"piecewise knot recovery", 0.0, knot_recovery},
        {"best-point selection vs exhaustive scan", 0.0, best_points},
        {"correlation matrix vs oracle", 0.0, correlation},
        {"chain decomposition", 0.0, chain_decomposition},
        {"extrapolation flagging", 0.0, extrapolation_flags},
        {"monotonicity", 0.0, monotonicity},
        {"CLI determinism", 10.0, cli_determinism},
    };
    int failed = 0;
    int n = 0;
    for (const auto& c : criteria) {
        ++n;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0.0 && secs >= c.limit_s) {
            o.pass = false;
            o.detail += "; over time limit";
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s [%2d] %-40s %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", n, c.name, o.detail.c_str(), secs);
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
