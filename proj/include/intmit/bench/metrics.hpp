// SPDX-License-Identifier: Apache-2.0
//
// Metric records and deterministic CSV export. Every results file is written
// through this layer with fixed column orders and a fixed number format, so
// repeating a run with the same config and seed reproduces each file byte
// for byte. Wall-clock fields stay zero outside the timing subcommand to
// keep that guarantee.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace intmit::bench {

// One scalar measurement in long form: metric_name names the quantity,
// x_value its sweep coordinate, y_value the measured value.
struct MetricsRecord {
    std::string experiment_id;
    std::string config_hash;
    uint64_t seed = 0;
    std::string metric_name;
    double x_value = 0.0;
    double y_value = 0.0;   // must be finite
    int64_t n_samples = 0;
    int64_t wall_clock_ms = 0;  // nonzero only in timing artifacts
};

// In-memory CSV: a header and rows of already-formatted fields.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Shortest-exact float formatting ("%.12g"); rejects non-finite values.
std::string fmt_num(double v);
std::string fmt_u64(uint64_t v);
std::string fmt_i64(int64_t v);

// Writes header + rows, LF line endings. Refuses an empty row list, a row
// whose width differs from the header, and fields containing separators.
void write_csv(const std::string& path, const CsvTable& table);

// Fixed column order: experiment_id, config_hash, seed, metric_name,
// x_value, y_value, n_samples, wall_clock_ms. Refuses an empty record list.
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records);

// Companion plotting script; reads only the exported CSV files.
void write_plot_script(const std::string& dir);

}  // namespace intmit::bench
