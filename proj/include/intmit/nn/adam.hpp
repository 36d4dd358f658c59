// SPDX-License-Identifier: Apache-2.0
//
// Bias-corrected Adam over a parameter registry.

#pragma once

#include <cstdint>
#include <vector>

#include "intmit/nn/tensor.hpp"

namespace intmit::nn {

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int64_t step = 0;
    std::vector<std::vector<double>> m;  // first moments, one buffer per param
    std::vector<std::vector<double>> v;  // second moments

    explicit AdamState(double learn_rate = 1e-3) : lr(learn_rate) {}

    // allocates moment buffers matching the registry; call once
    void attach(const ParamList& params);
    // one update over all registered parameters using their grad buffers
    void update(const ParamList& params);
};

}  // namespace intmit::nn
