// SPDX-License-Identifier: Apache-2.0

#include "intmit/nn/adam.hpp"

#include <cmath>

#include "intmit/common.hpp"

namespace intmit::nn {

void AdamState::attach(const ParamList& params) {
    m.clear();
    v.clear();
    for (const auto& p : params) {
        m.emplace_back(p.size(), 0.0);
        v.emplace_back(p.size(), 0.0);
    }
    step = 0;
}

void AdamState::update(const ParamList& params) {
    require(m.size() == params.size(), "optimizer not attached to this registry");
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (size_t i = 0; i < params.size(); ++i) {
        const ParamRef& p = params[i];
        double* mi = m[i].data();
        double* vi = v[i].data();
        const size_t n = p.size();
        require(m[i].size() == n, "parameter size changed after attach");
        for (size_t j = 0; j < n; ++j) {
            const double g = p.grad[j];
            mi[j] = beta1 * mi[j] + (1.0 - beta1) * g;
            vi[j] = beta2 * vi[j] + (1.0 - beta2) * g * g;
            const double mhat = mi[j] / bc1;
            const double vhat = vi[j] / bc2;
            p.value[j] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

}  // namespace intmit::nn
