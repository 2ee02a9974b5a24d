#!/usr/bin/env python3
"""Generate the bundled synthetic survey datasets.

The three CSV files under data/ are produced by this script with a fixed
seed. Each dataset mixes "frontier" designs that sit exactly on a known
envelope with ordinary designs that fall short of it by a random factor:

  PA        PAE(f)  = 45 % * exp(-0.008 f)                  10 .. 320 GHz
  oscillator eff(f) = 0.12 - 9.32e-5 (f - 42)^2   for f <= 42
                      0.12 * exp(-0.015 (f - 42))   for f >  42  12.7 .. 272 GHz
  mixer     eta(f)  = 20 * exp(-0.015 f)  [linear gain per mW] 10 .. 140 GHz

Usage: generate_synthetic.py [output_dir]
"""

import math
import os
import random
import sys

SEED = 20241018

PA_A, PA_B = 45.0, -0.008
OSC_PEAK_F, OSC_PEAK, OSC_Q, OSC_B = 42.0, 0.12, 9.32e-5, -0.015
MIX_A, MIX_B = 20.0, -0.015

TECHS = ["CMOS 28nm", "CMOS 40nm", "CMOS 65nm", "SiGe BiCMOS", "InP HBT", "GaAs pHEMT"]


def log_uniform(rng, lo, hi):
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def fmt(x, digits=6):
    return f"{x:.{digits}g}"


def pa_envelope(f):
    return PA_A * math.exp(PA_B * f)


def osc_envelope(f):
    if f <= OSC_PEAK_F:
        return OSC_PEAK - OSC_Q * (f - OSC_PEAK_F) ** 2
    return OSC_PEAK * math.exp(OSC_B * (f - OSC_PEAK_F))


def mixer_envelope(f):
    return MIX_A * math.exp(MIX_B * f)


def log_bins(freqs, n_bins):
    lo, hi = min(freqs), max(freqs)
    span = math.log(hi / lo)
    out = []
    for f in freqs:
        k = int(math.floor(math.log(f / lo) / span * n_bins))
        out.append(min(max(k, 0), n_bins - 1))
    return out


def check_frontier_wins(rows, n_bins=8):
    """Every non-empty log bin must be won by a frontier row."""
    freqs = [r["f"] for r in rows]
    bins = log_bins(freqs, n_bins)
    best = {}
    for r, k in zip(rows, bins):
        if k not in best or r["y"] > best[k]["y"]:
            best[k] = r
    for k, r in best.items():
        assert r["frontier"], f"bin {k} won by a non-frontier row at {r['f']} GHz"


def gen_pa(rng):
    rows = []
    for f in [10.0, 14.0, 20.0, 28.0, 40.0, 60.0, 94.0, 140.0, 215.0, 320.0]:
        rows.append({"f": f, "y": pa_envelope(f), "frontier": True})
    for _ in range(50):
        f = log_uniform(rng, 10.0, 320.0)
        rows.append({"f": f, "y": pa_envelope(f) * rng.uniform(0.2, 0.7), "frontier": False})
    check_frontier_wins(rows)
    out = []
    for r in rows:
        pae = float(fmt(r["y"], 5))
        psat = 4.0 + 0.35 * pae + rng.gauss(0.0, 2.5)
        gain = rng.uniform(10.0, 25.0)
        area = "" if rng.random() < 0.15 else fmt(rng.uniform(0.05, 2.0), 4)
        tech = rng.choice(TECHS)
        out.append([fmt(r["f"], 6), fmt(psat, 5), fmt(pae, 5), fmt(gain, 4), area, tech,
                    f"syn-pa-{len(out) + 1:03d}"])
    return ["freq_ghz", "psat_dbm", "pae_pct", "gain_db", "area_mm2", "technology", "source"], out


def gen_osc(rng):
    rows = []
    # frontier points sit near the low edge of decaying bins and the high
    # edge of rising bins so that each log bin is won by one of them
    for f in [12.7, 18.5, 27.2, 35.0, 42.0, 59.0, 87.0, 127.0, 186.0, 272.0]:
        rows.append({"f": f, "y": osc_envelope(f), "frontier": True})
    for _ in range(45):
        f = log_uniform(rng, 12.7, 272.0)
        rows.append({"f": f, "y": osc_envelope(f) * rng.uniform(0.25, 0.6), "frontier": False})
    check_frontier_wins(rows)
    out = []
    for r in rows:
        pout = rng.uniform(-12.0, 6.0)
        pdc = 10.0 ** (pout / 10.0) / r["y"]
        pn = rng.uniform(-112.0, -82.0)
        offset = rng.choice([1.0, 10.0])
        tech = rng.choice(TECHS[:4])
        out.append([fmt(r["f"], 6), fmt(pdc, 8), fmt(pout, 8), fmt(pn, 5), fmt(offset, 3), tech,
                    f"syn-osc-{len(out) + 1:03d}"])
    return ["freq_ghz", "pdc_mw", "pout_dbm", "pn_dbc_hz", "offset_mhz", "technology", "source"], out


def gen_mixer(rng):
    rows = []
    for f in [10.0, 14.0, 19.5, 27.1, 37.6, 52.3, 72.7, 101.5, 140.0]:
        rows.append({"f": f, "y": mixer_envelope(f), "frontier": True})
    for _ in range(32):
        f = log_uniform(rng, 10.0, 140.0)
        rows.append({"f": f, "y": mixer_envelope(f) * rng.uniform(0.2, 0.7), "frontier": False})
    check_frontier_wins(rows)
    out = []
    for r in rows:
        cg = rng.uniform(-8.0, 12.0)
        pdc = 10.0 ** (cg / 10.0) / r["y"]
        tech = rng.choice(TECHS[:4])
        out.append([fmt(r["f"], 6), fmt(pdc, 8), fmt(cg, 8), tech, f"syn-mix-{len(out) + 1:03d}"])
    return ["freq_ghz", "pdc_mw", "cg_db", "technology", "source"], out


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "data")
    os.makedirs(out_dir, exist_ok=True)
    rng = random.Random(SEED)
    write_csv(os.path.join(out_dir, "pa_survey.csv"), *gen_pa(rng))
    write_csv(os.path.join(out_dir, "osc_survey.csv"), *gen_osc(rng))
    write_csv(os.path.join(out_dir, "mixer_survey.csv"), *gen_mixer(rng))


if __name__ == "__main__":
    main()
