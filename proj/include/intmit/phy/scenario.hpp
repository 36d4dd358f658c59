// SPDX-License-Identifier: Apache-2.0
//
// Multi-cell scenario description. One center cell of interest surrounded by
// neighbor cells acting as interference sources, all sharing the band (1:1
// frequency reuse).

#pragma once

#include <cstdint>

#include "intmit/common.hpp"

namespace intmit::phy {

struct CellScenario {
    int n_cells = 7;       // one center + six neighbors
    int ues_per_cell = 16;
    int bs_ant = 8;        // m
    int ue_ant = 2;        // n
    int n_re = 64;         // k
    double carrier_sir_db = 5.0;  // mean signal-to-interference ratio at center UEs
    double snr_db = 15.0;
    int reuse_factor = 1;  // only 1:1 reuse is supported
    uint64_t seed = 1;

    CellScenario() = default;
    CellScenario(int m, int n, int k, double sir_db, double snr, uint64_t sd)
        : bs_ant(m), ue_ant(n), n_re(k), carrier_sir_db(sir_db), snr_db(snr), seed(sd) {
        validate();
    }

    void validate() const;

    int n_interferers() const { return n_cells - 1; }
    double noise_var() const { return db_to_linear(-snr_db); }
    // total interference power relative to unit mean signal power
    double interference_power() const { return db_to_linear(-carrier_sir_db); }
};

}  // namespace intmit::phy
