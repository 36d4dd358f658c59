// SPDX-License-Identifier: Apache-2.0
//
// Dense, width-2 1D convolution, LSTM, and ReLU with exact reverse-mode
// gradients. Layers cache what their backward pass needs; call order is
// forward then backward, once each per step.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intmit/nn/tensor.hpp"
#include "intmit/rng.hpp"

namespace intmit::nn {

// y[rows][out] = x[rows][in] * w^T + b
struct Dense {
    int in = 0;
    int out = 0;
    std::vector<double> w, b, gw, gb;  // w [out][in]

    void init(int in_dim, int out_dim, Rng& rng);  // Glorot-uniform
    void forward(const double* x, int rows, double* y);
    // dx may be null when the input gradient is not needed
    void backward(const double* dy, double* dx);
    void zero_grad();
    void collect(const std::string& prefix, ParamList& out_list);

  private:
    std::vector<double> x_cache_;
    int rows_ = 0;
};

// Width-2 stride-1 convolution along the sequence axis, layout [rows][T][ch].
// Same-pad: y[t] = k0 * x[t-1] + k1 * x[t] with x[-1] = 0, length T.
// Valid:    y[t] = k0 * x[t]   + k1 * x[t+1],            length T - 1.
struct Conv1d {
    int in_ch = 0;
    int out_ch = 0;
    bool same_pad = true;
    std::vector<double> w, b, gw, gb;  // w [2][out_ch][in_ch], tap-major

    void init(int in_channels, int out_channels, bool same, Rng& rng);
    int out_len(int t) const { return same_pad ? t : t - 1; }
    void forward(const double* x, int rows, int t, double* y);
    void backward(const double* dy, double* dx);
    void zero_grad();
    void collect(const std::string& prefix, ParamList& out_list);

  private:
    std::vector<double> tap0_, tap1_;  // gathered inputs per tap, [rows*out_t][in_ch]
    int rows_ = 0, t_ = 0;
};

// Standard LSTM over [rows][T][in] -> [rows][T][hidden], gate order
// (input, forget, cell, output), forget bias 1.
struct Lstm {
    int in = 0;
    int hidden = 0;
    std::vector<double> wx, wh, b, gwx, gwh, gb;  // wx [4H][in], wh [4H][H], b [4H]

    void init(int in_dim, int hidden_dim, Rng& rng);
    void forward(const double* x, int rows, int t, double* y);
    void backward(const double* dy, double* dx);
    void zero_grad();
    void collect(const std::string& prefix, ParamList& out_list);

  private:
    std::vector<double> x_cache_;     // [rows][T][in]
    std::vector<double> gates_;       // [T][rows][4H] post-activation
    std::vector<double> c_;           // [T][rows][H]
    std::vector<double> tanh_c_;      // [T][rows][H]
    std::vector<double> h_;           // [T][rows][H]
    int rows_ = 0, t_ = 0;
};

// In-place ReLU; the mask from forward drives backward.
struct Relu {
    void forward(double* x, size_t n);
    void backward(double* dx) const;

  private:
    std::vector<uint8_t> mask_;
};

}  // namespace intmit::nn
