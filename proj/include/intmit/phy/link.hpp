// SPDX-License-Identifier: Apache-2.0
//
// Pilot symbols, interference mixing, received-signal synthesis, zero-forcing
// channel estimation, and estimate quality metrics.

#pragma once

#include <vector>

#include "intmit/common.hpp"
#include "intmit/phy/channel.hpp"
#include "intmit/phy/scenario.hpp"
#include "intmit/rng.hpp"

namespace intmit::phy {

// Unit-modulus QPSK pilot sequence, one symbol per tone. All own-cell tx
// antennas reuse the sequence in orthogonal time slots.
std::vector<cplx> draw_pilots(Rng& rng, int n_re);

// One co-channel interference source seen at the receive array.
struct Interferer {
    std::vector<cplx> h_int;  // [m][k] receive path response
    std::vector<cplx> x_int;  // [k] unit-power symbols
    double power_scale = 1.0; // linear amplitude applied to this source
};
using InterferenceSet = std::vector<Interferer>;

// Draws the scenario's interferers: each neighbor cell contributes one
// aggregate single-antenna transmitter with its own TDL channel and QPSK
// symbols. The per-source power split is drawn log-uniform over +-3 dB and
// renormalized so sum(power_scale^2) equals scenario.interference_power().
InterferenceSet draw_interferers(Rng& rng, const CellScenario& sc);

// Received pilot grid y[m][n][k]:
//   y[a][b][t] = h[a][b][t] * x[t] + sum_s scale_s * h_s[a][t] * x_s[t] + n_0,
// n_0 circular complex Gaussian of variance noise_var per element. Each tx
// antenna occupies its own slot, so the own-cell cross terms vanish; the
// interference waveform is common to all slots (slow-varying sources).
std::vector<cplx> synth_received_pilot(const ChannelRealization& h, const std::vector<cplx>& x,
                                       const InterferenceSet& ints, double noise_var, Rng& rng);

// Per-tone zero-forcing estimate over the [m][n][k] grid: y / x per RE.
// Pilots are unit modulus so the division is well conditioned.
std::vector<cplx> zf_estimate(const std::vector<cplx>& y, const std::vector<cplx>& x, int m, int n,
                              int k);

// Mean squared error of est against ref, normalized by ||ref||^2 (Frobenius).
double nmse(const std::vector<cplx>& est, const std::vector<cplx>& ref);

}  // namespace intmit::phy
