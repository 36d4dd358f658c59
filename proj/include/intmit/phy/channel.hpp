// SPDX-License-Identifier: Apache-2.0
//
// Tapped-delay-line Rayleigh fading and its frequency-domain response.

#pragma once

#include <vector>

#include "intmit/common.hpp"
#include "intmit/rng.hpp"

namespace intmit::phy {

inline constexpr int kNumTaps = 4;
inline constexpr double kTapDecayDb = 3.0;  // power rolloff per tap

// Power-delay profile: exponential decay, normalized so the tap powers sum
// to one (unit average channel power per antenna pair).
std::vector<double> tap_powers(int n_taps = kNumTaps, double decay_db = kTapDecayDb);

// One antenna pair's taps: independent circular complex Gaussians with the
// PDP variances.
std::vector<cplx> draw_taps(Rng& rng, const std::vector<double>& powers);

// Frequency response on k tones: H[t] = sum_l taps[l] * exp(-j*2*pi*t*l/k).
std::vector<cplx> taps_to_freq(const std::vector<cplx>& taps, int k);

// MIMO channel realization: per-antenna-pair delay taps plus the frequency
// response they generate. Layouts: h [rx][tx][tone], taps [rx][tx][tap].
struct ChannelRealization {
    int n_rx = 0;
    int n_tx = 0;
    int n_re = 0;
    int n_taps = 0;
    std::vector<cplx> h;
    std::vector<cplx> taps;

    cplx& at(int rx, int tx, int t) { return h[(static_cast<size_t>(rx) * n_tx + tx) * n_re + t]; }
    const cplx& at(int rx, int tx, int t) const {
        return h[(static_cast<size_t>(rx) * n_tx + tx) * n_re + t];
    }
    cplx& tap(int rx, int tx, int l) {
        return taps[(static_cast<size_t>(rx) * n_tx + tx) * n_taps + l];
    }
    const cplx& tap(int rx, int tx, int l) const {
        return taps[(static_cast<size_t>(rx) * n_tx + tx) * n_taps + l];
    }
};

// Draws an independent TDL channel per antenna pair and evaluates it on n_re
// tones.
ChannelRealization draw_channel(Rng& rng, int n_rx, int n_tx, int n_re,
                                int n_taps = kNumTaps, double decay_db = kTapDecayDb);

// Gauss-Markov perturbation of an existing realization: each tap becomes
// rho * tap + sqrt(1 - rho^2) * fresh, preserving the per-tap variance.
// Models channel aging between a stale clean estimate and the current frame.
ChannelRealization perturb_channel(Rng& rng, const ChannelRealization& ch, double rho);

// Retains only the first l_keep delay-domain coefficients of each antenna
// pair's per-tone response (values [rx][tx][tone], taps absent). Splits a
// per-tone estimate into a smooth channel part and a residual carrying
// interference plus noise.
std::vector<cplx> delay_truncate(const std::vector<cplx>& h, int n_rx, int n_tx, int n_re,
                                 int l_keep);

}  // namespace intmit::phy
