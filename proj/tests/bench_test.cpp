// SPDX-License-Identifier: Apache-2.0
//
// Benchmark layer: config round-trip and hashing, CSV export contracts,
// subcommand determinism, artifact handling, and exit-code mapping.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "intmit/bench/config.hpp"
#include "intmit/bench/metrics.hpp"
#include "intmit/bench/runner.hpp"

using namespace intmit;
using namespace intmit::bench;
namespace fs = std::filesystem;

namespace {

// Small enough that a full command chain runs in seconds.
ExperimentConfig tiny_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.experiment_id = "tiny";
    cfg.output_dir = out_dir;
    cfg.scenario = phy::CellScenario(2, 1, 16, 5.0, 15.0, 7);
    cfg.scenario.n_cells = 3;
    cfg.scenario.ues_per_cell = 4;
    cfg.train.epochs = 2;
    cfg.train.batch_frames = 8;
    cfg.train.lr = 1e-3;
    cfg.train.seed = 9;
    cfg.monolithic_epochs = 1;
    cfg.dataset = DatasetSpec{24, 8, true, 1.0};
    cfg.downlink = DownlinkSpec{4, 16, 12, 0.0, 10.0, 12, 2};
    cfg.sweep.sinr_grid_db = {5.0};
    cfg.sweep.sf_grid = {1.0, 0.5};
    cfg.sweep.antenna_configs = {{2, 1}};
    cfg.validate();
    return cfg;
}

std::string fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("bench_tmp") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

int column_of(const std::vector<std::string>& header, const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    REQUIRE(false);
    return -1;
}

}  // namespace

TEST_CASE("experiment config round-trips through json losslessly") {
    ExperimentConfig cfg = tiny_config("bench_tmp/na");
    cfg.sweep.antenna_configs = {{2, 1}, {4, 2}};
    const std::string text = dumps_config(cfg);
    ExperimentConfig back = loads_config(text);
    CHECK(dumps_config(back) == text);
    CHECK(back.scenario.seed == cfg.scenario.seed);
    CHECK(back.sweep.antenna_configs == cfg.sweep.antenna_configs);
    CHECK(back.downlink.n_code == cfg.downlink.n_code);
    CHECK(back.monolithic_epochs == cfg.monolithic_epochs);

    const std::string path = fresh_dir("cfg_rt") + "/cfg.json";
    save_config(path, cfg);
    CHECK(dumps_config(load_config(path)) == text);
}

TEST_CASE("config hash ignores key order and output location") {
    const char* a = R"({"format_version":1,"experiment_id":"x","output_dir":"here",
        "scenario":{"seed":3,"n_re":16,"bs_ant":2,"ue_ant":1,"n_cells":3},
        "downlink":{"n_code":16},
        "train":{"epochs":4,"lr":0.001}})";
    const char* b = R"({"train":{"lr":0.001,"epochs":4},
        "downlink":{"n_code":16},
        "scenario":{"n_cells":3,"ue_ant":1,"bs_ant":2,"n_re":16,"seed":3},
        "output_dir":"elsewhere","experiment_id":"x","format_version":1})";
    const auto ca = loads_config(a);
    const auto cb = loads_config(b);
    CHECK(config_hash(ca) == config_hash(cb));
    CHECK(ca.output_dir != cb.output_dir);

    ExperimentConfig cc = ca;
    cc.scenario.snr_db += 1.0;
    CHECK(config_hash(cc) != config_hash(ca));
    ExperimentConfig cd = ca;
    cd.train.seed += 1;
    CHECK(config_hash(cd) != config_hash(ca));
}

TEST_CASE("config loader reports field-level errors") {
    CHECK_THROWS_WITH_AS(loads_config(R"({"format_version":1,"train":{"epochs":"ten"}})"),
                         doctest::Contains("train.epochs"), config_error);
    CHECK_THROWS_WITH_AS(loads_config(R"({"format_version":1,"scenario":{"bs_antz":4}})"),
                         doctest::Contains("scenario.bs_antz"), config_error);
    CHECK_THROWS_WITH_AS(loads_config(R"({"experiment_id":"x"})"),
                         doctest::Contains("format_version"), config_error);
    CHECK_THROWS_WITH_AS(loads_config(R"({"format_version":2})"),
                         doctest::Contains("unsupported"), config_error);
    CHECK_THROWS_WITH_AS(loads_config(R"({"format_version":1,"dataset":{"n_frames":0}})"),
                         doctest::Contains("dataset.n_frames"), config_error);
    CHECK_THROWS_AS(loads_config("not json at all"), config_error);
    // geometry that cannot carry the configured code
    CHECK_THROWS_WITH_AS(
        loads_config(R"({"format_version":1,"scenario":{"n_re":16},"downlink":{"n_code":128}})"),
        doctest::Contains("downlink"), config_error);
}

TEST_CASE("csv writer refuses empty or malformed exports") {
    const std::string dir = fresh_dir("csv");
    CsvTable empty;
    empty.header = {"a", "b"};
    CHECK_THROWS_WITH_AS(write_csv(dir + "/x.csv", empty), doctest::Contains("empty record"),
                         config_error);
    CsvTable ragged;
    ragged.header = {"a", "b"};
    ragged.rows = {{"1"}};
    CHECK_THROWS_AS(write_csv(dir + "/x.csv", ragged), config_error);
    CsvTable comma;
    comma.header = {"a"};
    comma.rows = {{"1,2"}};
    CHECK_THROWS_AS(write_csv(dir + "/x.csv", comma), config_error);
    CHECK_THROWS_AS(fmt_num(std::nan("")), config_error);
    CHECK_THROWS_WITH_AS(write_metrics_csv(dir + "/m.csv", {}), doctest::Contains("empty record"),
                         config_error);

    CsvTable ok;
    ok.header = {"a", "b"};
    ok.rows = {{"1", "2.5"}};
    write_csv(dir + "/ok.csv", ok);
    CHECK(read_file(dir + "/ok.csv") == "a,b\n1,2.5\n");
}

TEST_CASE("metric records serialize with the documented column order") {
    const std::string dir = fresh_dir("metrics");
    MetricsRecord r{"exp", "00ff", 5, "nmse", 8.0, 0.25, 100, 0};
    write_metrics_csv(dir + "/m.csv", {r});
    const auto rows = read_csv(dir + "/m.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"experiment_id", "config_hash", "seed",
                                              "metric_name", "x_value", "y_value", "n_samples",
                                              "wall_clock_ms"});
    CHECK(rows[1] == std::vector<std::string>{"exp", "00ff", "5", "nmse", "8", "0.25", "100",
                                              "0"});
}

TEST_CASE("subcommand chain is deterministic byte for byte") {
    std::vector<std::string> dirs;
    for (const char* name : {"det_a", "det_b"}) {
        const std::string dir = fresh_dir(name);
        ExperimentConfig cfg = tiny_config(dir);
        REQUIRE(run_subcommand("gen-data", cfg, 9) == 0);
        REQUIRE(run_subcommand("train-ul", cfg, 9) == 0);
        REQUIRE(run_subcommand("eval-ul", cfg, 9) == 0);
        REQUIRE(run_subcommand("train-dl", cfg, 9) == 0);
        REQUIRE(run_subcommand("sweep-sinr", cfg, 9) == 0);
        dirs.push_back(dir);
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
        const fs::path twin = fs::path(dirs[1]) / entry.path().filename();
        REQUIRE(fs::exists(twin));
        CHECK(read_file(entry.path()) == read_file(twin));
        ++compared;
    }
    CHECK(compared >= 10);  // datasets, checkpoints, CSVs, plot script
}

TEST_CASE("changing the seed changes the results but not the file schema") {
    const std::string dir = fresh_dir("seed_a");
    ExperimentConfig cfg = tiny_config(dir);
    REQUIRE(run_subcommand("gen-data", cfg, 9) == 0);
    REQUIRE(run_subcommand("train-ul", cfg, 9) == 0);
    REQUIRE(run_subcommand("eval-ul", cfg, 9) == 0);
    const auto rows_a = read_csv(fs::path(dir) / "eval_ul.csv");

    const std::string dir2 = fresh_dir("seed_b");
    ExperimentConfig cfg2 = tiny_config(dir2);
    REQUIRE(run_subcommand("gen-data", cfg2, 10) == 0);
    REQUIRE(run_subcommand("train-ul", cfg2, 10) == 0);
    REQUIRE(run_subcommand("eval-ul", cfg2, 10) == 0);
    const auto rows_b = read_csv(fs::path(dir2) / "eval_ul.csv");

    REQUIRE(rows_a.size() == rows_b.size());
    CHECK(rows_a[0] == rows_b[0]);  // header
    const int rec = column_of(rows_a[0], "nmse_rec");
    CHECK(rows_a[1][rec] != rows_b[1][rec]);
}

TEST_CASE("single-point sinr sweep emits one row per receiver") {
    const std::string dir = fresh_dir("one_point");
    ExperimentConfig cfg = tiny_config(dir);
    REQUIRE(run_subcommand("train-dl", cfg, 9) == 0);
    REQUIRE(run_subcommand("sweep-sinr", cfg, 9) == 0);
    const auto rows = read_csv(fs::path(dir) / "bler.csv");
    REQUIRE(rows.size() == 4);  // header + one row per receiver
    CHECK(rows[0][0] == "receiver");
    CHECK(rows[1][0] == "int-learner");
    CHECK(rows[2][0] == "irc");
    CHECK(rows[3][0] == "mrc");
    const int bler_col = column_of(rows[0], "bler");
    for (size_t i = 1; i < rows.size(); ++i) {
        const double b = std::stod(rows[i][bler_col]);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
    }
}

TEST_CASE("unit scale factor in the width sweep reproduces the single-run result") {
    const std::string dir = fresh_dir("sf_repro");
    ExperimentConfig cfg = tiny_config(dir);
    REQUIRE(run_subcommand("gen-data", cfg, 9) == 0);
    REQUIRE(run_subcommand("train-ul", cfg, 9) == 0);
    REQUIRE(run_subcommand("eval-ul", cfg, 9) == 0);
    REQUIRE(run_subcommand("sweep-sf", cfg, 9) == 0);

    const auto eval_rows = read_csv(fs::path(dir) / "eval_ul.csv");
    const auto sf_rows = read_csv(fs::path(dir) / "sf_sweep.csv");
    const int eval_rec = column_of(eval_rows[0], "nmse_rec");
    const int sf_col = column_of(sf_rows[0], "sf");
    const int sf_rec = column_of(sf_rows[0], "nmse_rec");
    // modular row of eval_ul vs the sf = 1 row, as formatted strings
    std::string from_eval, from_sweep;
    for (size_t i = 1; i < eval_rows.size(); ++i)
        if (eval_rows[i][0].rfind("modular-", 0) == 0) from_eval = eval_rows[i][eval_rec];
    for (size_t i = 1; i < sf_rows.size(); ++i)
        if (sf_rows[i][sf_col] == "1") from_sweep = sf_rows[i][sf_rec];
    REQUIRE(!from_eval.empty());
    REQUIRE(!from_sweep.empty());
    CHECK(from_eval == from_sweep);
}

TEST_CASE("missing artifacts map to the artifact exit code") {
    const std::string dir = fresh_dir("missing");
    ExperimentConfig cfg = tiny_config(dir);
    CHECK(run_subcommand("train-ul", cfg, 9) == 3);   // no dataset yet
    CHECK(run_subcommand("eval-ul", cfg, 9) == 3);    // no dataset / checkpoints
    CHECK(run_subcommand("sweep-sinr", cfg, 9) == 3); // no dl checkpoint
    CHECK(run_subcommand("timing", cfg, 9) == 3);     // no ul checkpoint
}

TEST_CASE("config problems map to the config exit code") {
    const std::string dir = fresh_dir("cfg_err");
    ExperimentConfig cfg = tiny_config(dir);
    cfg.sweep.sinr_grid_db.clear();
    CHECK(run_subcommand("sweep-sinr", cfg, 9) == 2);
    CHECK(run_subcommand("eval-dl", cfg, 9) == 2);
    ExperimentConfig cfg2 = tiny_config(dir);
    cfg2.sweep.sf_grid.clear();
    CHECK(run_subcommand("sweep-sf", cfg2, 9) == 2);
    ExperimentConfig cfg3 = tiny_config(dir);
    cfg3.sweep.antenna_configs.clear();
    CHECK(run_subcommand("gen-data", cfg3, 9) == 2);
    CHECK(run_subcommand("unknown-op", cfg, 9) == 2);
}

TEST_CASE("gradient check subcommand passes and writes its report") {
    const std::string dir = fresh_dir("gradcheck");
    ExperimentConfig cfg = tiny_config(dir);
    REQUIRE(run_subcommand("grad-check", cfg, 9) == 0);
    const std::string report = read_file(fs::path(dir) / "gradcheck.txt");
    CHECK(report.find("dense-layer") != std::string::npos);
    CHECK(report.find("lstm-layer") != std::string::npos);
    CHECK(report.find("ul-modular-pipeline") != std::string::npos);
    CHECK(report.find("ul-monolithic-baseline") != std::string::npos);
    CHECK(report.find("dl-recovery-pipeline") != std::string::npos);
    CHECK(report.find("negative-control") != std::string::npos);
    CHECK(report.find("FAIL") == std::string::npos);
}

TEST_CASE("reference profiles validate and differ where intended") {
    const ExperimentConfig desk = desk_profile();
    const ExperimentConfig full = full_profile();
    CHECK(desk.experiment_id == "desk");
    CHECK(full.experiment_id == "full");
    CHECK(desk.dataset.n_frames < full.dataset.n_frames);
    CHECK(desk.scenario.bs_ant == 8);
    CHECK(desk.scenario.ue_ant == 2);
    CHECK(desk.scenario.n_re == 64);
    CHECK(full.sweep.antenna_configs.size() == 4);
    CHECK(config_hash(desk) != config_hash(full));
    // checked-in config files stay in step with the built-in profiles
    const fs::path src = fs::path(TEST_SOURCE_DIR);
    CHECK(dumps_config(load_config((src / "configs" / "desk.json").string())) ==
          dumps_config(desk));
    CHECK(dumps_config(load_config((src / "configs" / "full.json").string())) ==
          dumps_config(full));
}
