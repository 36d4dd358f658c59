// SPDX-License-Identifier: Apache-2.0
//
// Paired clean/interfered channel-estimate datasets and their binary file
// format.

#pragma once

#include <string>
#include <vector>

#include "intmit/common.hpp"
#include "intmit/phy/channel.hpp"
#include "intmit/phy/link.hpp"
#include "intmit/phy/scenario.hpp"

namespace intmit::phy {

// One frame's worth of estimates, all shaped [m][n][k] flattened row-major.
struct EstimatePair {
    ChannelRealization h_true;
    std::vector<cplx> h_clean_est;  // ZF estimate without interference
    std::vector<cplx> h_int_est;    // ZF estimate with the dataset's interferers
    double sinr_db = 0.0;
    uint64_t seed = 0;
};

struct DatasetOptions {
    bool interference_on = true;
    // 1.0 pairs both estimates with the same physical channel; < 1.0 ages the
    // channel behind h_clean_est by a Gauss-Markov step with this correlation.
    double staleness_rho = 1.0;
};

// Generates n_frames estimate pairs. Interference sources (channels and
// symbols) are drawn once and held fixed across the whole dataset; channels,
// pilots, and noise are fresh per frame. Frame f's randomness depends only on
// (scenario.seed xor seed, f), so results do not depend on evaluation order.
std::vector<EstimatePair> make_dataset(const CellScenario& sc, int n_frames,
                                       const DatasetOptions& opt, uint64_t seed);

inline std::vector<EstimatePair> make_dataset(const CellScenario& sc, int n_frames,
                                              bool interference_on, uint64_t seed) {
    return make_dataset(sc, n_frames, DatasetOptions{interference_on, 1.0}, seed);
}

// Stable hash of the scenario fields that determine dataset content.
uint64_t scenario_hash(const CellScenario& sc);

// Binary dataset file, layout (all little-endian):
//   magic "IMDS", u32 format_version (1), u32 m, u32 n, u32 k, u64 scenario
//   hash, u64 frame count; then per frame: u64 seed, f64 sinr_db, then
//   h_true, h_clean_est, h_int_est as m*n*k (re, im) f64 pairs each.
// h_true delay taps are not stored; loading leaves them empty.
void save_dataset(const std::string& path, const CellScenario& sc,
                  const std::vector<EstimatePair>& frames);
std::vector<EstimatePair> load_dataset(const std::string& path, CellScenario* sc_out = nullptr);

}  // namespace intmit::phy
