// SPDX-License-Identifier: Apache-2.0

#include "intmit/nn/gradcheck.hpp"

#include <cmath>

namespace intmit::nn {

GradCheckReport grad_check(const std::function<double()>& loss_fn, const ParamList& params,
                           double eps, double tol, double abs_tol) {
    GradCheckReport report;
    report.pass = true;
    for (const auto& p : params) {
        for (size_t j = 0; j < p.size(); ++j) {
            const double saved = p.value[j];
            p.value[j] = saved + eps;
            const double up = loss_fn();
            p.value[j] = saved - eps;
            const double down = loss_fn();
            p.value[j] = saved;

            const double fd = (up - down) / (2.0 * eps);
            const double an = p.grad[j];
            const double abs_err = std::abs(fd - an);
            const double denom = std::abs(fd) + std::abs(an);
            report.max_abs_err = std::max(report.max_abs_err, abs_err);
            ++report.n_checked;
            if (denom > 1e-6) {
                const double rel = abs_err / denom;
                report.max_rel_err = std::max(report.max_rel_err, rel);
                if (rel > tol) report.pass = false;
            } else if (abs_err > abs_tol) {
                report.pass = false;
            }
        }
    }
    return report;
}

}  // namespace intmit::nn
