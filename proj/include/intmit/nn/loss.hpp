// SPDX-License-Identifier: Apache-2.0
//
// Scalar losses with their input gradients.

#pragma once

#include <cstddef>
#include <vector>

namespace intmit::nn {

// mean((pred - target)^2) over all n elements; grad may be null.
double mse_loss(const double* pred, const double* target, size_t n, double* grad);

// Softmax cross-entropy, logits [n_items][n_classes] against integer labels,
// averaged over items; grad (same shape as logits) may be null.
double cross_entropy_loss(const double* logits, const int* labels, int n_items, int n_classes,
                          double* grad);

// Per-item softmax of logits [n_items][n_classes], written to probs.
void softmax(const double* logits, int n_items, int n_classes, double* probs);

}  // namespace intmit::nn
