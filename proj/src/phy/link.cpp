// SPDX-License-Identifier: Apache-2.0

#include "intmit/phy/link.hpp"

#include <cmath>

namespace intmit::phy {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

std::vector<cplx> draw_pilots(Rng& rng, int n_re) {
    std::vector<cplx> x(n_re);
    for (auto& v : x) {
        double i = rng.uniform() < 0.5 ? kInvSqrt2 : -kInvSqrt2;
        double q = rng.uniform() < 0.5 ? kInvSqrt2 : -kInvSqrt2;
        v = cplx(i, q);
    }
    return x;
}

InterferenceSet draw_interferers(Rng& rng, const CellScenario& sc) {
    const int n_src = sc.n_interferers();
    InterferenceSet ints;
    if (n_src <= 0) return ints;
    ints.resize(n_src);

    // per-source power weights, log-uniform over +-3 dB before renormalizing
    std::vector<double> w(n_src);
    double total = 0.0;
    for (int s = 0; s < n_src; ++s) {
        w[s] = db_to_linear(rng.uniform(-3.0, 3.0));
        total += w[s];
    }
    const double p_total = sc.interference_power();

    for (int s = 0; s < n_src; ++s) {
        auto ch = draw_channel(rng, sc.bs_ant, 1, sc.n_re);
        ints[s].h_int = std::move(ch.h);
        ints[s].x_int = draw_pilots(rng, sc.n_re);
        ints[s].power_scale = std::sqrt(p_total * w[s] / total);
    }
    return ints;
}

std::vector<cplx> synth_received_pilot(const ChannelRealization& h, const std::vector<cplx>& x,
                                       const InterferenceSet& ints, double noise_var, Rng& rng) {
    require(x.size() == static_cast<size_t>(h.n_re), "pilot length must match n_re");
    require(noise_var >= 0.0, "noise variance must be nonnegative");
    for (const auto& src : ints) {
        require(src.h_int.size() == static_cast<size_t>(h.n_rx) * h.n_re,
                "interferer path shape mismatch");
        require(src.x_int.size() == static_cast<size_t>(h.n_re), "interferer symbol shape mismatch");
        require(src.power_scale >= 0.0, "power_scale must be nonnegative");
    }

    std::vector<cplx> y(static_cast<size_t>(h.n_rx) * h.n_tx * h.n_re);
    for (int a = 0; a < h.n_rx; ++a) {
        for (int b = 0; b < h.n_tx; ++b) {
            cplx* row = &y[(static_cast<size_t>(a) * h.n_tx + b) * h.n_re];
            for (int t = 0; t < h.n_re; ++t) {
                cplx v = h.at(a, b, t) * x[t];
                for (const auto& src : ints) {
                    v += src.power_scale * src.h_int[static_cast<size_t>(a) * h.n_re + t] *
                         src.x_int[t];
                }
                if (noise_var > 0.0) v += rng.cgaussian(noise_var);
                row[t] = v;
            }
        }
    }
    return y;
}

std::vector<cplx> zf_estimate(const std::vector<cplx>& y, const std::vector<cplx>& x, int m, int n,
                              int k) {
    require(y.size() == static_cast<size_t>(m) * n * k, "received grid shape mismatch");
    require(x.size() == static_cast<size_t>(k), "pilot length must match n_re");
    for (const auto& v : x) require(std::abs(v) > 0.0, "pilot symbols must be nonzero");

    std::vector<cplx> est(y.size());
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < n; ++b) {
            const size_t base = (static_cast<size_t>(a) * n + b) * k;
            for (int t = 0; t < k; ++t) est[base + t] = y[base + t] / x[t];
        }
    }
    return est;
}

double nmse(const std::vector<cplx>& est, const std::vector<cplx>& ref) {
    require(est.size() == ref.size(), "nmse shapes must match");
    double num = 0.0;
    double den = 0.0;
    for (size_t i = 0; i < est.size(); ++i) {
        num += std::norm(est[i] - ref[i]);
        den += std::norm(ref[i]);
    }
    require(den > 0.0, "nmse reference must have nonzero energy");
    return num / den;
}

}  // namespace intmit::phy
