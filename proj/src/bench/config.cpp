// SPDX-License-Identifier: Apache-2.0

#include "intmit/bench/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

#include "intmit/dl/link.hpp"
#include "intmit/rng.hpp"

namespace intmit::bench {
namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& path, const std::string& what) {
    throw config_error("config field '" + path + "': " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail_field(path.empty() ? item.key() : path + "." + item.key(),
                               "unrecognized field");
    }
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

int get_int(const json& j, const std::string& path, const char* key, int def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_number_integer() && !v->is_number_unsigned())
        fail_field(path + "." + key, "expected an integer");
    return v->get<int>();
}

uint64_t get_u64(const json& j, const std::string& path, const char* key, uint64_t def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<int64_t>() >= 0))
        fail_field(path + "." + key, "expected a non-negative integer");
    return v->get<uint64_t>();
}

double get_double(const json& j, const std::string& path, const char* key, double def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_number()) fail_field(path + "." + key, "expected a number");
    return v->get<double>();
}

bool get_bool(const json& j, const std::string& path, const char* key, bool def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_boolean()) fail_field(path + "." + key, "expected true or false");
    return v->get<bool>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       const std::string& def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_string()) fail_field(path + "." + key, "expected a string");
    return v->get<std::string>();
}

std::vector<double> get_double_array(const json& j, const std::string& path, const char* key,
                                     std::vector<double> def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_array()) fail_field(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v->size());
    for (const auto& e : *v) {
        if (!e.is_number()) fail_field(path + "." + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw config_error("config root must be a JSON object");
    check_keys(j, "", {"format_version", "experiment_id", "output_dir", "scenario", "train",
                       "dataset", "downlink", "sweep"});
    ExperimentConfig cfg;
    if (!find(j, "format_version")) fail_field("format_version", "required field is missing");
    cfg.format_version = get_int(j, "", "format_version", 1);
    cfg.experiment_id = get_string(j, "", "experiment_id", cfg.experiment_id);
    cfg.output_dir = get_string(j, "", "output_dir", cfg.output_dir);

    if (const json* s = find(j, "scenario")) {
        if (!s->is_object()) fail_field("scenario", "expected an object");
        check_keys(*s, "scenario",
                   {"n_cells", "ues_per_cell", "bs_ant", "ue_ant", "n_re", "carrier_sir_db",
                    "snr_db", "reuse_factor", "seed"});
        auto& sc = cfg.scenario;
        sc.n_cells = get_int(*s, "scenario", "n_cells", sc.n_cells);
        sc.ues_per_cell = get_int(*s, "scenario", "ues_per_cell", sc.ues_per_cell);
        sc.bs_ant = get_int(*s, "scenario", "bs_ant", sc.bs_ant);
        sc.ue_ant = get_int(*s, "scenario", "ue_ant", sc.ue_ant);
        sc.n_re = get_int(*s, "scenario", "n_re", sc.n_re);
        sc.carrier_sir_db = get_double(*s, "scenario", "carrier_sir_db", sc.carrier_sir_db);
        sc.snr_db = get_double(*s, "scenario", "snr_db", sc.snr_db);
        sc.reuse_factor = get_int(*s, "scenario", "reuse_factor", sc.reuse_factor);
        sc.seed = get_u64(*s, "scenario", "seed", sc.seed);
    }
    if (const json* t = find(j, "train")) {
        if (!t->is_object()) fail_field("train", "expected an object");
        check_keys(*t, "train",
                   {"epochs", "batch_frames", "lr", "seed", "scale_factor", "monolithic_epochs"});
        cfg.train.epochs = get_int(*t, "train", "epochs", cfg.train.epochs);
        cfg.train.batch_frames = get_int(*t, "train", "batch_frames", cfg.train.batch_frames);
        cfg.train.lr = get_double(*t, "train", "lr", cfg.train.lr);
        cfg.train.seed = get_u64(*t, "train", "seed", cfg.train.seed);
        cfg.train.scale_factor = get_double(*t, "train", "scale_factor", cfg.train.scale_factor);
        cfg.monolithic_epochs = get_int(*t, "train", "monolithic_epochs", cfg.monolithic_epochs);
    }
    if (const json* d = find(j, "dataset")) {
        if (!d->is_object()) fail_field("dataset", "expected an object");
        check_keys(*d, "dataset", {"n_frames", "eval_frames", "interference_on", "staleness_rho"});
        cfg.dataset.n_frames = get_int(*d, "dataset", "n_frames", cfg.dataset.n_frames);
        cfg.dataset.eval_frames = get_int(*d, "dataset", "eval_frames", cfg.dataset.eval_frames);
        cfg.dataset.interference_on =
            get_bool(*d, "dataset", "interference_on", cfg.dataset.interference_on);
        cfg.dataset.staleness_rho =
            get_double(*d, "dataset", "staleness_rho", cfg.dataset.staleness_rho);
    }
    if (const json* d = find(j, "downlink")) {
        if (!d->is_object()) fail_field("downlink", "expected an object");
        check_keys(*d, "downlink",
                   {"qam_order", "n_code", "train_frames", "train_sinr_lo_db", "train_sinr_hi_db",
                    "bler_frames_per_point", "epochs"});
        auto& dl = cfg.downlink;
        dl.qam_order = get_int(*d, "downlink", "qam_order", dl.qam_order);
        dl.n_code = get_int(*d, "downlink", "n_code", dl.n_code);
        dl.train_frames = get_int(*d, "downlink", "train_frames", dl.train_frames);
        dl.train_sinr_lo_db = get_double(*d, "downlink", "train_sinr_lo_db", dl.train_sinr_lo_db);
        dl.train_sinr_hi_db = get_double(*d, "downlink", "train_sinr_hi_db", dl.train_sinr_hi_db);
        dl.bler_frames_per_point =
            get_int(*d, "downlink", "bler_frames_per_point", dl.bler_frames_per_point);
        dl.epochs = get_int(*d, "downlink", "epochs", dl.epochs);
    }
    if (const json* s = find(j, "sweep")) {
        if (!s->is_object()) fail_field("sweep", "expected an object");
        check_keys(*s, "sweep", {"sinr_grid_db", "sf_grid", "antenna_configs"});
        cfg.sweep.sinr_grid_db =
            get_double_array(*s, "sweep", "sinr_grid_db", cfg.sweep.sinr_grid_db);
        cfg.sweep.sf_grid = get_double_array(*s, "sweep", "sf_grid", cfg.sweep.sf_grid);
        if (const json* a = find(*s, "antenna_configs")) {
            if (!a->is_array()) fail_field("sweep.antenna_configs", "expected an array of pairs");
            cfg.sweep.antenna_configs.clear();
            for (const auto& e : *a) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                    !e[1].is_number_integer())
                    fail_field("sweep.antenna_configs",
                               "each entry must be a [bs_ant, ue_ant] integer pair");
                cfg.sweep.antenna_configs.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
        }
    }
    cfg.validate();
    return cfg;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["format_version"] = c.format_version;
    j["experiment_id"] = c.experiment_id;
    j["output_dir"] = c.output_dir;
    j["scenario"] = {{"n_cells", c.scenario.n_cells},
                     {"ues_per_cell", c.scenario.ues_per_cell},
                     {"bs_ant", c.scenario.bs_ant},
                     {"ue_ant", c.scenario.ue_ant},
                     {"n_re", c.scenario.n_re},
                     {"carrier_sir_db", c.scenario.carrier_sir_db},
                     {"snr_db", c.scenario.snr_db},
                     {"reuse_factor", c.scenario.reuse_factor},
                     {"seed", c.scenario.seed}};
    j["train"] = {{"epochs", c.train.epochs},
                  {"batch_frames", c.train.batch_frames},
                  {"lr", c.train.lr},
                  {"seed", c.train.seed},
                  {"scale_factor", c.train.scale_factor},
                  {"monolithic_epochs", c.monolithic_epochs}};
    j["dataset"] = {{"n_frames", c.dataset.n_frames},
                    {"eval_frames", c.dataset.eval_frames},
                    {"interference_on", c.dataset.interference_on},
                    {"staleness_rho", c.dataset.staleness_rho}};
    j["downlink"] = {{"qam_order", c.downlink.qam_order},
                     {"n_code", c.downlink.n_code},
                     {"train_frames", c.downlink.train_frames},
                     {"train_sinr_lo_db", c.downlink.train_sinr_lo_db},
                     {"train_sinr_hi_db", c.downlink.train_sinr_hi_db},
                     {"bler_frames_per_point", c.downlink.bler_frames_per_point},
                     {"epochs", c.downlink.epochs}};
    json ants = json::array();
    for (const auto& [m, n] : c.sweep.antenna_configs) ants.push_back({m, n});
    j["sweep"] = {{"sinr_grid_db", c.sweep.sinr_grid_db},
                  {"sf_grid", c.sweep.sf_grid},
                  {"antenna_configs", ants}};
    return j;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (format_version != 1) fail_field("format_version", "unsupported value (expected 1)");
    if (experiment_id.empty()) fail_field("experiment_id", "must be nonempty");
    if (experiment_id.find_first_of(",\n\r") != std::string::npos)
        fail_field("experiment_id", "must not contain commas or line breaks");
    if (output_dir.empty()) fail_field("output_dir", "must be nonempty");
    try {
        scenario.validate();
    } catch (const std::exception& e) {
        fail_field("scenario", e.what());
    }
    try {
        train.validate();
    } catch (const std::exception& e) {
        fail_field("train", e.what());
    }
    if (monolithic_epochs < 0) fail_field("train.monolithic_epochs", "must be >= 0");
    if (dataset.n_frames < 1) fail_field("dataset.n_frames", "must be >= 1");
    if (dataset.eval_frames < 1) fail_field("dataset.eval_frames", "must be >= 1");
    if (!(dataset.staleness_rho > 0.0 && dataset.staleness_rho <= 1.0))
        fail_field("dataset.staleness_rho", "must lie in (0, 1]");
    if (downlink.train_frames < 1) fail_field("downlink.train_frames", "must be >= 1");
    if (downlink.bler_frames_per_point < 1)
        fail_field("downlink.bler_frames_per_point", "must be >= 1");
    if (downlink.epochs < 0) fail_field("downlink.epochs", "must be >= 0");
    if (!(downlink.train_sinr_lo_db <= downlink.train_sinr_hi_db))
        fail_field("downlink.train_sinr_lo_db", "must not exceed train_sinr_hi_db");
    if (!std::isfinite(downlink.train_sinr_lo_db) || !std::isfinite(downlink.train_sinr_hi_db))
        fail_field("downlink.train_sinr_lo_db", "must be finite");
    try {
        dl::DlLinkConfig dcfg{scenario, downlink.qam_order, downlink.n_code};
        dcfg.validate();
    } catch (const std::exception& e) {
        fail_field("downlink", e.what());
    }
    for (double v : sweep.sinr_grid_db)
        if (!std::isfinite(v)) fail_field("sweep.sinr_grid_db", "entries must be finite");
    for (double v : sweep.sf_grid)
        if (!(std::isfinite(v) && v > 0.0))
            fail_field("sweep.sf_grid", "entries must be positive and finite");
    for (const auto& [m, n] : sweep.antenna_configs)
        if (m < 1 || n < 1)
            fail_field("sweep.antenna_configs", "antenna counts must be >= 1");
}

ExperimentConfig desk_profile() {
    ExperimentConfig cfg;
    cfg.experiment_id = "desk";
    cfg.output_dir = "out";
    cfg.scenario = phy::CellScenario{};  // 8x2, 64 tones, SIR 5 dB, SNR 15 dB
    cfg.scenario.seed = 1;
    cfg.train.epochs = 12;
    cfg.train.batch_frames = 32;
    cfg.train.lr = 1e-3;
    cfg.train.seed = 2026;
    cfg.train.scale_factor = 1.0;
    cfg.monolithic_epochs = 0;
    cfg.dataset = DatasetSpec{2000, 500, true, 1.0};
    cfg.downlink = DownlinkSpec{4, 128, 6000, 0.0, 12.0, 2000, 100};
    cfg.sweep.sinr_grid_db = {0.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0};
    cfg.sweep.sf_grid = {0.25, 0.5, 1.0, 2.0};
    cfg.sweep.antenna_configs = {{8, 2}};
    cfg.validate();
    return cfg;
}

ExperimentConfig full_profile() {
    ExperimentConfig cfg = desk_profile();
    cfg.experiment_id = "full";
    cfg.output_dir = "out-full";
    cfg.train.epochs = 60;
    cfg.monolithic_epochs = 10;
    cfg.dataset = DatasetSpec{20000, 2000, true, 1.0};
    cfg.downlink = DownlinkSpec{4, 128, 20000, 0.0, 12.0, 20000, 60};
    cfg.sweep.sinr_grid_db.clear();
    for (double v = -8.0; v <= 12.0 + 1e-9; v += 1.0) cfg.sweep.sinr_grid_db.push_back(v);
    cfg.sweep.antenna_configs = {{2, 2}, {4, 2}, {8, 2}, {16, 2}};
    cfg.validate();
    return cfg;
}

ExperimentConfig loads_config(const std::string& json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw config_error("config is not valid JSON");
    return config_from_json(j);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return loads_config(ss.str());
}

std::string dumps_config(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

void save_config(const std::string& path, const ExperimentConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot open config file for writing: " + path);
    out << dumps_config(cfg);
    require(static_cast<bool>(out), "failed writing config file: " + path);
}

std::string config_hash(const ExperimentConfig& cfg) {
    json j = config_to_json(cfg);
    j.erase("output_dir");
    const uint64_t h = fnv1a64(j.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace intmit::bench
