// SPDX-License-Identifier: Apache-2.0
//
// Central finite-difference verification of analytic gradients.

#pragma once

#include <functional>

#include "intmit/nn/tensor.hpp"

namespace intmit::nn {

struct GradCheckReport {
    double max_rel_err = 0.0;
    double max_abs_err = 0.0;
    size_t n_checked = 0;
    bool pass = false;
};

// loss_fn re-runs the forward pass and returns the scalar loss at the current
// parameter values. The grad buffers must already hold the analytic gradient
// of that loss. Each parameter element is perturbed by +-eps; the relative
// error |fd - an| / (|fd| + |an|) must stay below tol wherever the magnitudes
// are resolvable, and |fd - an| below abs_tol where they are not.
GradCheckReport grad_check(const std::function<double()>& loss_fn, const ParamList& params,
                           double eps = 1e-5, double tol = 1e-4, double abs_tol = 1e-7);

}  // namespace intmit::nn
