// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: one structured, versioned file drives every
// benchmark subcommand. Parsing is strict (unknown or mistyped fields fail
// with the offending field path), serialization is canonical so the config
// hash is independent of key order in the file, and the hash excludes the
// output location so moving results never changes an experiment's identity.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "intmit/phy/scenario.hpp"
#include "intmit/traincfg.hpp"

namespace intmit::bench {

// Grids for the sweep subcommands. A grid may be empty as long as no
// subcommand that consumes it runs.
struct SweepSpec {
    std::vector<double> sinr_grid_db;                 // BLER sweep x-axis
    std::vector<double> sf_grid;                      // width-multiplier grid
    std::vector<std::pair<int, int>> antenna_configs; // (bs_ant, ue_ant) pairs
};

// Channel-estimate dataset sizing: the first n_frames train, the last
// eval_frames are never seen by training.
struct DatasetSpec {
    int n_frames = 2000;
    int eval_frames = 500;
    bool interference_on = true;
    double staleness_rho = 1.0;  // < 1 ages the channel behind the clean label
};

// Downlink receiver settings: code/constellation geometry, training range,
// and the Monte-Carlo depth of BLER points.
struct DownlinkSpec {
    int qam_order = 4;
    int n_code = 128;
    int train_frames = 3000;
    double train_sinr_lo_db = -6.0;
    double train_sinr_hi_db = 14.0;
    int bler_frames_per_point = 2000;
    int epochs = 0;  // 0 inherits train.epochs
};

struct ExperimentConfig {
    int format_version = 1;
    std::string experiment_id = "desk";
    std::string output_dir = "out";
    phy::CellScenario scenario;
    TrainConfig train;
    int monolithic_epochs = 0;  // 0 picks a wall-clock-comparable budget
    DatasetSpec dataset;
    DownlinkSpec downlink;
    SweepSpec sweep;

    // Throws config_error naming the offending field.
    void validate() const;

    // The single-chain conv baseline costs roughly six times the modular
    // network per epoch at reference widths, so the default budget gives it
    // one epoch per six modular ones (at least one).
    int mono_epochs() const {
        return monolithic_epochs > 0 ? monolithic_epochs
                                     : std::max(1, train.epochs / 6);
    }
    int dl_epochs() const { return downlink.epochs > 0 ? downlink.epochs : train.epochs; }
};

// Reference profiles: "desk" finishes the full acceptance suite on one
// laptop core inside an hour; "full" matches the reference system scale.
ExperimentConfig desk_profile();
ExperimentConfig full_profile();

// Strict JSON round trip. load_config/loads throw config_error with a field
// path for unknown keys, wrong types, or invalid values.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig loads_config(const std::string& json_text);
std::string dumps_config(const ExperimentConfig& cfg);  // canonical, sorted keys
void save_config(const std::string& path, const ExperimentConfig& cfg);

// FNV-1a over the canonical serialization with output_dir removed, as 16
// hex digits. Equal configs hash equally regardless of file key order.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace intmit::bench
