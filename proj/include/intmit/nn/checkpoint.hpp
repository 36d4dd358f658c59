// SPDX-License-Identifier: Apache-2.0
//
// Parameter checkpoint file, layout (little-endian):
//   magic "IMCK", u32 format_version (1), u32 parameter count; then per
//   parameter: u32 name length, name bytes, u32 ndim, u32 dims[ndim],
//   f64 values in row-major order.

#pragma once

#include <string>

#include "intmit/nn/tensor.hpp"

namespace intmit::nn {

void save_checkpoint(const std::string& path, const ParamList& params);

// Loads into an existing registry; every stored name must match a registered
// parameter with the same shape, and vice versa.
void load_checkpoint(const std::string& path, const ParamList& params);

}  // namespace intmit::nn
