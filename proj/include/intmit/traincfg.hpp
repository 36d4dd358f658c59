// SPDX-License-Identifier: Apache-2.0
//
// Shared training hyperparameters.

#pragma once

#include <cstdint>

#include "intmit/common.hpp"

namespace intmit {

struct TrainConfig {
    int epochs = 60;
    int batch_frames = 32;
    double lr = 1e-3;
    uint64_t seed = 0;
    double scale_factor = 1.0;  // width multiplier, grid {0.25, 0.5, 1.0, 2.0}

    void validate() const {
        require(epochs >= 1, "epochs must be >= 1");
        require(batch_frames >= 1, "batch_frames must be >= 1");
        require(lr > 0.0, "learning rate must be positive");
        require(scale_factor > 0.0, "scale_factor must be positive");
    }
};

}  // namespace intmit
