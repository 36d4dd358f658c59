// SPDX-License-Identifier: Apache-2.0
//
// Uplink channel-estimate recovery: reshape preprocessing, a modular
// conv + LSTM + per-tone dense network, a monolithic conv-only baseline,
// training, and NMSE evaluation.

#pragma once

#include <cstdint>
#include <vector>

#include "intmit/nn/adam.hpp"
#include "intmit/nn/layers.hpp"
#include "intmit/phy/dataset.hpp"
#include "intmit/traincfg.hpp"

namespace intmit::ul {

using intmit::TrainConfig;

// [m][n][k] complex -> [m*n][k][2] real, antenna pairs as rows, channels
// (re, im) last. Exact inverse below.
std::vector<double> preprocess(const std::vector<cplx>& h, int m, int n, int k);
std::vector<cplx> postprocess(const std::vector<double>& x, int m, int n, int k);

// Conv stack (2 -> 16 -> 32 -> 32, kernel 2, same-pad, ReLU) feeding an LSTM
// over the tone axis (hidden 64), then a per-tone dense head
// (64 -> 32 -> 2). scale_factor multiplies every hidden width.
struct UlNetwork {
    int k = 0;
    double sf = 1.0;
    nn::Conv1d conv1, conv2, conv3;
    nn::Lstm lstm;
    nn::Dense fc1, fc2;

    static UlNetwork make(int k, double sf, uint64_t seed);
    // x, y: [rows][k][2]; rows may span several frames
    void forward(const double* x, int rows, double* y);
    void backward(const double* dy);
    void zero_grad();
    nn::ParamList params();

  private:
    nn::Relu r1_, r2_, r3_, r4_;
    std::vector<double> a1_, a2_, a3_, a4_, a5_;
    int rows_ = 0;
};

// Six same-pad conv layers (2 -> 16 -> 32 -> 64 -> 128 -> 256 -> 512, ReLU)
// with a per-tone linear head back to 2 channels.
struct MonolithicNetwork {
    int k = 0;
    std::vector<nn::Conv1d> convs;
    nn::Dense head;

    static MonolithicNetwork make(int k, uint64_t seed);
    void forward(const double* x, int rows, double* y);
    void backward(const double* dy);
    void zero_grad();
    nn::ParamList params();

  private:
    std::vector<nn::Relu> relus_;
    std::vector<std::vector<double>> acts_;
    int rows_ = 0;
};

// Applies a network to one estimate grid.
std::vector<cplx> ul_recover(UlNetwork& net, const std::vector<cplx>& h_i, int m, int n, int k);
std::vector<cplx> ul_recover(MonolithicNetwork& net, const std::vector<cplx>& h_i, int m, int n,
                             int k);

struct UlTrainResult {
    UlNetwork net;
    // held-out NMSE of the recovered estimate against the training labels,
    // one entry per epoch
    std::vector<double> learning_curve;
};

// Trains on h_int_est -> h_clean_est pairs (labels are what a receiver can
// actually collect). The last 20% of frames are held out for the curve.
// use_true_labels switches to h_true for oracle studies.
UlTrainResult train_ul(const std::vector<phy::EstimatePair>& dataset, const TrainConfig& cfg,
                       bool use_true_labels = false);

struct MonolithicTrainResult {
    MonolithicNetwork net;
    double held_out_nmse = 0.0;  // same metric as the modular learning curve
};

MonolithicTrainResult train_monolithic_baseline(const std::vector<phy::EstimatePair>& dataset,
                                                const TrainConfig& cfg);

struct UlEvalRecord {
    uint64_t frame_seed = 0;
    double nmse_raw = 0.0;  // input estimate vs true channel
    double nmse_rec = 0.0;  // recovered estimate vs true channel
};

struct UlEvalSummary {
    std::vector<UlEvalRecord> frames;
    double mean_raw = 0.0, mean_rec = 0.0;
    double std_raw = 0.0, std_rec = 0.0;
};

template <typename Net>
UlEvalSummary evaluate_ul(Net& net, const std::vector<phy::EstimatePair>& dataset, int m, int n,
                          int k) {
    require(!dataset.empty(), "evaluation dataset is empty");
    UlEvalSummary out;
    out.frames.reserve(dataset.size());
    for (const auto& pair : dataset) {
        auto rec = ul_recover(net, pair.h_int_est, m, n, k);
        out.frames.push_back({pair.seed, phy::nmse(pair.h_int_est, pair.h_true.h),
                              phy::nmse(rec, pair.h_true.h)});
    }
    double s_raw = 0.0, s_rec = 0.0, q_raw = 0.0, q_rec = 0.0;
    for (const auto& r : out.frames) {
        s_raw += r.nmse_raw;
        s_rec += r.nmse_rec;
    }
    const double inv = 1.0 / static_cast<double>(out.frames.size());
    out.mean_raw = s_raw * inv;
    out.mean_rec = s_rec * inv;
    for (const auto& r : out.frames) {
        q_raw += (r.nmse_raw - out.mean_raw) * (r.nmse_raw - out.mean_raw);
        q_rec += (r.nmse_rec - out.mean_rec) * (r.nmse_rec - out.mean_rec);
    }
    out.std_raw = std::sqrt(q_raw * inv);
    out.std_rec = std::sqrt(q_rec * inv);
    return out;
}

}  // namespace intmit::ul
