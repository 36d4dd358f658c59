// SPDX-License-Identifier: Apache-2.0

#include "intmit/phy/channel.hpp"

#include <cmath>
#include <numbers>

namespace intmit::phy {

std::vector<double> tap_powers(int n_taps, double decay_db) {
    std::vector<double> p(n_taps);
    double total = 0.0;
    for (int l = 0; l < n_taps; ++l) {
        p[l] = db_to_linear(-decay_db * l);
        total += p[l];
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<cplx> draw_taps(Rng& rng, const std::vector<double>& powers) {
    std::vector<cplx> taps(powers.size());
    for (size_t l = 0; l < powers.size(); ++l) taps[l] = rng.cgaussian(powers[l]);
    return taps;
}

std::vector<cplx> taps_to_freq(const std::vector<cplx>& taps, int k) {
    std::vector<cplx> h(k);
    for (int t = 0; t < k; ++t) {
        cplx acc = 0.0;
        for (size_t l = 0; l < taps.size(); ++l) {
            double phase = -2.0 * std::numbers::pi * t * static_cast<double>(l) / k;
            acc += taps[l] * cplx(std::cos(phase), std::sin(phase));
        }
        h[t] = acc;
    }
    return h;
}

ChannelRealization draw_channel(Rng& rng, int n_rx, int n_tx, int n_re, int n_taps,
                                double decay_db) {
    ChannelRealization ch;
    ch.n_rx = n_rx;
    ch.n_tx = n_tx;
    ch.n_re = n_re;
    ch.n_taps = n_taps;
    ch.h.resize(static_cast<size_t>(n_rx) * n_tx * n_re);
    ch.taps.resize(static_cast<size_t>(n_rx) * n_tx * n_taps);
    const auto powers = tap_powers(n_taps, decay_db);
    for (int a = 0; a < n_rx; ++a) {
        for (int b = 0; b < n_tx; ++b) {
            auto taps = draw_taps(rng, powers);
            auto freq = taps_to_freq(taps, n_re);
            for (int l = 0; l < n_taps; ++l) ch.tap(a, b, l) = taps[l];
            for (int t = 0; t < n_re; ++t) ch.at(a, b, t) = freq[t];
        }
    }
    return ch;
}

ChannelRealization perturb_channel(Rng& rng, const ChannelRealization& ch, double rho) {
    require(rho >= 0.0 && rho <= 1.0, "correlation must lie in [0, 1]");
    ChannelRealization out = ch;
    const auto powers = tap_powers(ch.n_taps, kTapDecayDb);
    const double mix = std::sqrt(1.0 - rho * rho);
    for (int a = 0; a < ch.n_rx; ++a) {
        for (int b = 0; b < ch.n_tx; ++b) {
            std::vector<cplx> taps(ch.n_taps);
            for (int l = 0; l < ch.n_taps; ++l) {
                taps[l] = rho * ch.tap(a, b, l) + mix * rng.cgaussian(powers[l]);
                out.tap(a, b, l) = taps[l];
            }
            auto freq = taps_to_freq(taps, ch.n_re);
            for (int t = 0; t < ch.n_re; ++t) out.at(a, b, t) = freq[t];
        }
    }
    return out;
}

std::vector<cplx> delay_truncate(const std::vector<cplx>& h, int n_rx, int n_tx, int n_re,
                                 int l_keep) {
    require(l_keep >= 1 && l_keep <= n_re, "delay cutoff out of range");
    require(h.size() == static_cast<size_t>(n_rx) * n_tx * n_re, "shape mismatch");
    std::vector<cplx> out(h.size());
    const double inv_k = 1.0 / n_re;
    std::vector<cplx> delay(l_keep);
    for (int a = 0; a < n_rx; ++a) {
        for (int b = 0; b < n_tx; ++b) {
            const cplx* row = &h[(static_cast<size_t>(a) * n_tx + b) * n_re];
            cplx* dst = &out[(static_cast<size_t>(a) * n_tx + b) * n_re];
            // inverse DFT onto the first l_keep delay bins
            for (int l = 0; l < l_keep; ++l) {
                cplx acc = 0.0;
                for (int t = 0; t < n_re; ++t) {
                    double phase = 2.0 * std::numbers::pi * t * static_cast<double>(l) / n_re;
                    acc += row[t] * cplx(std::cos(phase), std::sin(phase));
                }
                delay[l] = acc * inv_k;
            }
            for (int t = 0; t < n_re; ++t) {
                cplx acc = 0.0;
                for (int l = 0; l < l_keep; ++l) {
                    double phase = -2.0 * std::numbers::pi * t * static_cast<double>(l) / n_re;
                    acc += delay[l] * cplx(std::cos(phase), std::sin(phase));
                }
                dst[t] = acc;
            }
        }
    }
    return out;
}

}  // namespace intmit::phy
