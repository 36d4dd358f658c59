// SPDX-License-Identifier: Apache-2.0

#include "intmit/bench/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "intmit/common.hpp"

namespace intmit::bench {

std::string fmt_num(double v) {
    require(std::isfinite(v), "refusing to export a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

std::string fmt_u64(uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::string fmt_i64(int64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return std::string(buf);
}

namespace {

void check_fields(const std::vector<std::string>& fields, const std::string& path) {
    for (const auto& f : fields) {
        require(!f.empty(), "empty CSV field in " + path);
        require(f.find_first_of(",\n\r\"") == std::string::npos,
                "CSV field contains a separator in " + path);
    }
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
    require(!table.header.empty(), "CSV header must be nonempty for " + path);
    require(!table.rows.empty(), "refusing to export an empty record list to " + path);
    check_fields(table.header, path);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot open CSV file for writing: " + path);
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        require(row.size() == table.header.size(),
                "CSV row width does not match the header in " + path);
        check_fields(row, path);
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    require(static_cast<bool>(out), "failed writing CSV file: " + path);
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records) {
    require(!records.empty(), "refusing to export an empty record list to " + path);
    CsvTable t;
    t.header = {"experiment_id", "config_hash", "seed",      "metric_name",
                "x_value",       "y_value",     "n_samples", "wall_clock_ms"};
    for (const auto& r : records) {
        t.rows.push_back({r.experiment_id, r.config_hash, fmt_u64(r.seed), r.metric_name,
                          fmt_num(r.x_value), fmt_num(r.y_value), fmt_i64(r.n_samples),
                          fmt_i64(r.wall_clock_ms)});
    }
    write_csv(path, t);
}

void write_plot_script(const std::string& dir) {
    static const char* kScript = R"PY(#!/usr/bin/env python3
"""Plots every exported results CSV found next to this script.

The script consumes only the CSV files; it never recomputes a metric. Files
that a particular run did not produce are skipped with a note.
"""

import csv
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required: pip install matplotlib")


def rows(name):
    path = os.path.join(HERE, name)
    if not os.path.exists(path):
        print(f"skip {name} (not exported by this run)")
        return None
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def save(fig, name):
    out = os.path.join(HERE, name)
    fig.savefig(out, dpi=150, bbox_inches="tight")
    plt.close(fig)
    print(f"wrote {out}")


def plot_eval_ul():
    # Per-antenna-config recovered vs raw estimate error, one group of bars
    # per receiver label.
    data = rows("eval_ul.csv")
    if not data:
        return
    fig, ax = plt.subplots(figsize=(7, 4))
    labels = [r["config"] for r in data]
    raw = [float(r["nmse_raw"]) for r in data]
    rec = [float(r["nmse_rec"]) for r in data]
    xs = range(len(labels))
    ax.bar([x - 0.2 for x in xs], raw, width=0.4, label="raw estimate")
    ax.bar([x + 0.2 for x in xs], rec, width=0.4, label="recovered")
    ax.set_xticks(list(xs), labels, rotation=30, ha="right")
    ax.set_yscale("log")
    ax.set_ylabel("NMSE")
    ax.legend()
    ax.set_title("Uplink estimate recovery")
    save(fig, "eval_ul.png")


def plot_learning_curve():
    data = rows("ul_learning_curve.csv")
    if not data:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    configs = sorted({r["config"] for r in data})
    for c in configs:
        pts = [(int(r["epoch"]), float(r["nmse"])) for r in data if r["config"] == c]
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=c)
    ax.set_xlabel("epoch")
    ax.set_ylabel("held-out NMSE")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("Uplink training curve")
    save(fig, "ul_learning_curve.png")


def plot_bler(name, png, title):
    data = rows(name)
    if not data:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    for rx in ("int-learner", "irc", "mrc"):
        pts = [(float(r["sinr_db"]), float(r["bler"])) for r in data if r["receiver"] == rx]
        pts.sort()
        ax.semilogy([p[0] for p in pts], [max(p[1], 1e-5) for p in pts], marker="o", label=rx)
    ax.axhline(1e-2, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("SINR (dB)")
    ax.set_ylabel("BLER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    ax.set_title(title)
    save(fig, png)


def plot_sf_sweep():
    data = rows("sf_sweep.csv")
    if not data:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    pts = sorted((float(r["sf"]), float(r["nmse_rec"])) for r in data)
    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="s")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("width scale factor")
    ax.set_ylabel("held-out NMSE")
    ax.set_yscale("log")
    ax.set_title("Network width sweep")
    save(fig, "sf_sweep.png")


def plot_timing():
    data = rows("timing.csv")
    if not data:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    batches = [int(r["batch_size"]) for r in data]
    mean = [float(r["mean_us_per_frame"]) for r in data]
    ax.plot(batches, mean, marker="o", label="measured mean")
    ax.axhline(float(data[0]["reference_target_us"]), color="gray", ls="--",
               label="reference implementation")
    ax.axhline(float(data[0]["frame_budget_us"]), color="red", ls=":", label="frame budget")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("batch size (frames)")
    ax.set_ylabel("latency per frame (us)")
    ax.legend()
    ax.set_title("Inference latency (report only)")
    save(fig, "timing.png")


def main():
    plot_eval_ul()
    plot_learning_curve()
    plot_bler("bler.csv", "bler.png", "Downlink BLER vs SINR")
    plot_bler("eval_dl.csv", "eval_dl.png", "Downlink BLER (evaluation run)")
    plot_sf_sweep()
    plot_timing()


if __name__ == "__main__":
    main()
)PY";
    std::ofstream out(dir + "/plot.py", std::ios::binary);
    require(static_cast<bool>(out), "cannot write plot script in " + dir);
    out << kScript;
    require(static_cast<bool>(out), "failed writing plot script in " + dir);
}

}  // namespace intmit::bench
