// SPDX-License-Identifier: Apache-2.0

#include "intmit/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "intmit/common.hpp"

namespace intmit::nn {

double mse_loss(const double* pred, const double* target, size_t n, double* grad) {
    require(n > 0, "mse over empty input");
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
        if (grad) grad[i] = 2.0 * d / static_cast<double>(n);
    }
    return acc / static_cast<double>(n);
}

void softmax(const double* logits, int n_items, int n_classes, double* probs) {
    for (int i = 0; i < n_items; ++i) {
        const double* row = logits + static_cast<size_t>(i) * n_classes;
        double* out = probs + static_cast<size_t>(i) * n_classes;
        const double peak = *std::max_element(row, row + n_classes);
        double total = 0.0;
        for (int q = 0; q < n_classes; ++q) {
            out[q] = std::exp(row[q] - peak);
            total += out[q];
        }
        for (int q = 0; q < n_classes; ++q) out[q] /= total;
    }
}

double cross_entropy_loss(const double* logits, const int* labels, int n_items, int n_classes,
                          double* grad) {
    require(n_items > 0 && n_classes >= 2, "cross entropy needs items and >= 2 classes");
    double loss = 0.0;
    std::vector<double> probs(static_cast<size_t>(n_items) * n_classes);
    softmax(logits, n_items, n_classes, probs.data());
    const double inv_items = 1.0 / n_items;
    for (int i = 0; i < n_items; ++i) {
        const int y = labels[i];
        require(y >= 0 && y < n_classes, "label out of range");
        const double* p = probs.data() + static_cast<size_t>(i) * n_classes;
        loss -= std::log(std::max(p[y], 1e-300));
        if (grad) {
            double* g = grad + static_cast<size_t>(i) * n_classes;
            for (int q = 0; q < n_classes; ++q) g[q] = p[q] * inv_items;
            g[y] -= inv_items;
        }
    }
    return loss * inv_items;
}

}  // namespace intmit::nn
