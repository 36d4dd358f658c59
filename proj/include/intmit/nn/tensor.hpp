// SPDX-License-Identifier: Apache-2.0
//
// Shape-tagged row-major tensor and the named-parameter registry shared by
// the optimizer, checkpointing, and gradient checks.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "intmit/common.hpp"

namespace intmit::nn {

struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) { data.resize(count(shape)); }

    static size_t count(const std::vector<int>& s) {
        size_t n = 1;
        for (int d : s) {
            require(d >= 0, "tensor dimensions must be nonnegative");
            n *= static_cast<size_t>(d);
        }
        return n;
    }
    size_t size() const { return data.size(); }
    int dim(int i) const { return shape[i]; }
};

// View of one parameter tensor and its gradient buffer. Layers hand these
// out; Adam, checkpoints, and grad_check iterate them in registration order.
struct ParamRef {
    std::string name;
    double* value = nullptr;
    double* grad = nullptr;
    std::vector<int> shape;

    size_t size() const { return Tensor::count(shape); }
};

using ParamList = std::vector<ParamRef>;

}  // namespace intmit::nn
