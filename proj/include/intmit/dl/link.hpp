// SPDX-License-Identifier: Apache-2.0
//
// Downlink link synthesis seen from one UE: the serving stream arrives on
// ue_ant receive antennas, neighbor-cell interference stays frozen across
// frames (slow-varying sources), and the data amplitude realizes a chosen
// per-antenna SINR. Produces paired channel estimates plus coded symbol
// frames for receiver comparisons.

#pragma once

#include <cstdint>
#include <vector>

#include "intmit/phy/dataset.hpp"
#include "intmit/phy/link.hpp"
#include "intmit/txrx/frame.hpp"
#include "intmit/txrx/ldpc.hpp"

namespace intmit::dl {

struct DlLinkConfig {
    phy::CellScenario scenario;  // ue_ant is the receive dimension here
    int qam_order = 4;
    int n_code = 128;

    void validate() const;
    int n_rx() const { return scenario.ue_ant; }
    int n_symbols() const;
};

// Everything held fixed for the lifetime of one dataset: interferer channels
// and their pilot-slot and data-slot waveforms, the cell's pilot sequence,
// and the code/interleaver pair. All of it derives from scenario.seed.
struct DlEnvironment {
    int n_rx = 0;
    int k = 0;
    int order = 4;
    int n_sym = 0;
    double p_int = 0.0;    // total interference power per receive antenna
    double noise_var = 0.0;
    phy::InterferenceSet ints;                   // pilot-slot sources, [n_rx][k] each
    std::vector<std::vector<cplx>> int_data;     // per source: [S] data-slot symbols
    std::vector<cplx> pilots;                    // [k]
    txrx::LdpcCode code;
    txrx::Interleaver il;
};

DlEnvironment make_environment(const DlLinkConfig& cfg);

// Data amplitude alpha with alpha^2 = 10^(sinr_db/10) * (p_int + noise_var),
// so sinr_db is the per-antenna ratio of signal power to everything else.
double data_amplitude(const DlEnvironment& env, double sinr_db);

// One synthesized downlink frame. The estimate grids use the receive view
// [n_rx][1][k]; h_smooth keeps the first k/8 delay bins of the interfered
// estimate and r_uu is the covariance of what smoothing removed.
struct DlSample {
    phy::EstimatePair est;       // h_true / h_clean_est / h_int_est, sinr_db, seed
    txrx::CodedFrame coded;      // bits, c_t, raw per-antenna c_i
    std::vector<cplx> h_smooth;  // [n_rx][1][k]
    std::vector<cplx> r_uu;      // [n_rx][n_rx]
    std::vector<cplx> c_comb;    // [S] MRC-combined, divided by alpha
    double alpha = 1.0;
};

DlSample synth_sample(const DlEnvironment& env, double sinr_db, uint64_t frame_seed);

// Interference-free pilot pass over a fresh channel; the reference material
// a UE collects while the band is quiet.
std::vector<cplx> synth_clean_estimate(const DlEnvironment& env, uint64_t seed);

// n_frames samples with per-frame SINR drawn uniformly over
// [sinr_lo_db, sinr_hi_db] and per-frame seeds derived from seed.
std::vector<DlSample> make_dl_dataset(const DlEnvironment& env, int n_frames, double sinr_lo_db,
                                      double sinr_hi_db, uint64_t seed);

// Classical receive paths from a sample's stored fields: per-tone combining
// with the smoothed estimate, max-log demodulation with the matching
// post-combining noise variance, deinterleaving, then BP decoding.
txrx::BlockResult decode_mrc(const DlSample& s, const DlEnvironment& env);
txrx::BlockResult decode_irc(const DlSample& s, const DlEnvironment& env);

// Decode from externally produced bit LLRs in transmitted symbol order.
txrx::BlockResult decode_llrs(const std::vector<double>& llrs, const DlSample& s,
                              const DlEnvironment& env);

}  // namespace intmit::dl
