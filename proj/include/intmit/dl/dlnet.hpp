// SPDX-License-Identifier: Apache-2.0
//
// Downlink constellation recovery: dual feature extractors subtract a clean
// reference from the interfered channel estimate in feature space, the
// resulting interference feature is removed from an embedded symbol
// sequence, an LSTM corrects the sequence, and a classifier scores each
// symbol against the constellation. Trained with cross-entropy against the
// transmitted constellation indices; evaluated as coded BLER against MRC
// and IRC receivers.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intmit/dl/link.hpp"
#include "intmit/nn/layers.hpp"
#include "intmit/traincfg.hpp"

namespace intmit::dl {

// Pre-collected clean channel estimates serving as the subtraction
// reference at inference time.
struct ReferenceStore {
    enum class Policy { most_recent, mean };

    std::vector<std::vector<cplx>> clean_estimates;  // each [n_rx][1][k]
    Policy policy = Policy::most_recent;

    // Reference grid under the active policy; requires a nonempty store.
    std::vector<cplx> selected() const;
};

// Feature-space interference estimate, one vector per frame, broadcast over
// the frame's symbol sequence.
struct InterferenceFeature {
    std::vector<double> i_est;
};

// [n_rx][1][k] complex grid -> [n_rx][k][2] real features (re, im last).
std::vector<double> rx_grid_features(const std::vector<cplx>& h, int n_rx, int k);

struct DlNetwork {
    int k = 0;
    int n_rx = 0;
    int order = 4;
    int feat = 32;    // extractor/fusion/embed width
    int hidden = 64;  // LSTM width

    nn::Conv1d ext_int1, ext_int2;  // interfered-estimate extractor, 2 -> feat/2 -> feat
    nn::Conv1d ext_cln1, ext_cln2;  // clean-reference extractor, same shape
    nn::Dense fusion;               // feat -> feat on the pooled feature difference
    nn::Dense embed;                // per-symbol (re, im) -> feat
    nn::Lstm corrector;             // feat -> hidden over the symbol sequence
    nn::Dense classifier;           // hidden -> order logits

    static DlNetwork make(int k, int n_rx, int order, uint64_t seed);

    // Batched full pipeline over B frames. x_int, x_cln: [B*n_rx][k][2];
    // c: [B*S][2] combined symbols; logits out: [B*S][order].
    void forward(const double* x_int, const double* x_cln, const double* c, int b_frames,
                 int n_sym, double* logits);
    // Gradients for the last forward; dlogits shaped like logits.
    void backward(const double* dlogits);
    void zero_grad();
    nn::ParamList params();

  private:
    nn::Relu ri1_, rc1_, re_;
    std::vector<double> bi1_, fi_, bc1_, fc_, diff_, pooled_, iest_, e_, frec_, lstm_out_;
    std::vector<double> d_lstm_, d_frec_, d_iest_, d_pooled_, d_diff_, d_b1_;
    int b_ = 0, s_ = 0;
};

// Feature-space interference estimate fusion(ext_int(h_i) - ext_cln(ref))
// with the extractor outputs averaged over tones and antenna rows.
InterferenceFeature estimate_interference(DlNetwork& net, const std::vector<cplx>& h_i,
                                          const ReferenceStore& ref);

// Embeds the combined symbols, removes i_est (broadcast over the sequence),
// and runs the LSTM correction. Returns [S][hidden] features.
std::vector<double> mitigate_symbols(DlNetwork& net, const std::vector<cplx>& c_i,
                                     const InterferenceFeature& i_est);

struct ClassifyResult {
    std::vector<double> logits;  // [S][order]
    std::vector<double> llrs;    // [S * bits_per_symbol], positive means bit 0
};

// Per-symbol constellation logits and max-log bit LLRs from corrected
// features [S][hidden].
ClassifyResult classify_constellation(DlNetwork& net, const std::vector<double>& features,
                                      int n_sym);

struct DlTrainResult {
    DlNetwork net;
    std::vector<double> loss_curve;      // per-epoch mean cross-entropy
    std::vector<double> sym_dist_curve;  // per-epoch mean |c_hat - c_t| diagnostic
};

// Cross-entropy training against transmitted constellation indices. Each
// frame's subtraction reference is the mean of the preceding 32 frames'
// clean estimates (cyclic), matching the mean reference-store policy used
// by evaluate_bler.
DlTrainResult train_dl(const std::vector<DlSample>& dataset, const TrainConfig& cfg);

struct BlerRecord {
    std::string receiver;  // "int-learner", "irc", or "mrc"
    double sinr_db = 0.0;
    int n_frames = 0;
    int n_block_errors = 0;
    double bler = 0.0;
};

// Clean estimates collected while the band is quiet, for inference-time use.
ReferenceStore build_reference_store(const DlEnvironment& env, int n_ref, uint64_t seed);

// Monte-Carlo BLER of the learned receiver against MRC and IRC over the
// SINR grid, n_frames fresh frames per point, all receivers sharing each
// frame. Frame seeds derive from (cfg.scenario.seed, seed, point, frame).
std::vector<BlerRecord> evaluate_bler(DlNetwork& net, const DlLinkConfig& cfg,
                                      const std::vector<double>& sinr_grid_db, int n_frames,
                                      uint64_t seed);

}  // namespace intmit::dl
