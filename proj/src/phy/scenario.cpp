// SPDX-License-Identifier: Apache-2.0

#include "intmit/phy/scenario.hpp"

namespace intmit::phy {

void CellScenario::validate() const {
    require(bs_ant >= 1, "bs_ant must be >= 1");
    require(ue_ant >= 1, "ue_ant must be >= 1");
    require(n_re >= 2, "n_re must be >= 2");
    require(n_cells >= 1, "n_cells must be >= 1");
    require(ues_per_cell >= 1, "ues_per_cell must be >= 1");
    require(reuse_factor == 1, "only 1:1 frequency reuse is supported");
}

}  // namespace intmit::phy
