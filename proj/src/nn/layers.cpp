// SPDX-License-Identifier: Apache-2.0

#include "intmit/nn/layers.hpp"

#include <cmath>
#include <cstring>

#include "intmit/nn/gemm.hpp"

namespace intmit::nn {

namespace {

double glorot_limit(int fan_in, int fan_out) { return std::sqrt(6.0 / (fan_in + fan_out)); }

void fill_uniform(Rng& rng, std::vector<double>& v, double limit) {
    for (double& x : v) x = rng.uniform(-limit, limit);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

// ---------------------------------------------------------------- Dense

void Dense::init(int in_dim, int out_dim, Rng& rng) {
    require(in_dim >= 1 && out_dim >= 1, "dense dims must be positive");
    in = in_dim;
    out = out_dim;
    w.resize(static_cast<size_t>(out) * in);
    b.assign(out, 0.0);
    gw.assign(w.size(), 0.0);
    gb.assign(out, 0.0);
    fill_uniform(rng, w, glorot_limit(in, out));
}

void Dense::forward(const double* x, int rows, double* y) {
    rows_ = rows;
    x_cache_.assign(x, x + static_cast<size_t>(rows) * in);
    gemm(false, true, rows, out, in, 1.0, x, in, w.data(), in, 0.0, y, out);
    for (int r = 0; r < rows; ++r)
        for (int j = 0; j < out; ++j) y[static_cast<size_t>(r) * out + j] += b[j];
}

void Dense::backward(const double* dy, double* dx) {
    require(rows_ > 0, "backward before forward");
    gemm(true, false, out, in, rows_, 1.0, dy, out, x_cache_.data(), in, 1.0, gw.data(), in);
    for (int r = 0; r < rows_; ++r)
        for (int j = 0; j < out; ++j) gb[j] += dy[static_cast<size_t>(r) * out + j];
    if (dx) gemm(false, false, rows_, in, out, 1.0, dy, out, w.data(), in, 0.0, dx, in);
}

void Dense::zero_grad() {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
}

void Dense::collect(const std::string& prefix, ParamList& out_list) {
    out_list.push_back({prefix + ".w", w.data(), gw.data(), {out, in}});
    out_list.push_back({prefix + ".b", b.data(), gb.data(), {out}});
}

// ---------------------------------------------------------------- Conv1d

void Conv1d::init(int in_channels, int out_channels, bool same, Rng& rng) {
    require(in_channels >= 1 && out_channels >= 1, "conv dims must be positive");
    in_ch = in_channels;
    out_ch = out_channels;
    same_pad = same;
    w.resize(2 * static_cast<size_t>(out_ch) * in_ch);
    b.assign(out_ch, 0.0);
    gw.assign(w.size(), 0.0);
    gb.assign(out_ch, 0.0);
    fill_uniform(rng, w, glorot_limit(in_ch * 2, out_ch * 2));
}

void Conv1d::forward(const double* x, int rows, int t, double* y) {
    require(t >= 2, "sequence too short for a width-2 kernel");
    rows_ = rows;
    t_ = t;
    const int ot = out_len(t);
    const size_t big = static_cast<size_t>(rows) * ot * in_ch;
    tap0_.resize(big);
    tap1_.resize(big);
    for (int r = 0; r < rows; ++r) {
        const double* xr = x + static_cast<size_t>(r) * t * in_ch;
        double* t0 = tap0_.data() + static_cast<size_t>(r) * ot * in_ch;
        double* t1 = tap1_.data() + static_cast<size_t>(r) * ot * in_ch;
        if (same_pad) {
            std::memset(t0, 0, sizeof(double) * in_ch);
            std::memcpy(t0 + in_ch, xr, sizeof(double) * static_cast<size_t>(ot - 1) * in_ch);
            std::memcpy(t1, xr, sizeof(double) * static_cast<size_t>(ot) * in_ch);
        } else {
            std::memcpy(t0, xr, sizeof(double) * static_cast<size_t>(ot) * in_ch);
            std::memcpy(t1, xr + in_ch, sizeof(double) * static_cast<size_t>(ot) * in_ch);
        }
    }
    const int big_rows = rows * ot;
    const double* w0 = w.data();
    const double* w1 = w.data() + static_cast<size_t>(out_ch) * in_ch;
    gemm(false, true, big_rows, out_ch, in_ch, 1.0, tap0_.data(), in_ch, w0, in_ch, 0.0, y, out_ch);
    gemm(false, true, big_rows, out_ch, in_ch, 1.0, tap1_.data(), in_ch, w1, in_ch, 1.0, y, out_ch);
    for (int r = 0; r < big_rows; ++r)
        for (int j = 0; j < out_ch; ++j) y[static_cast<size_t>(r) * out_ch + j] += b[j];
}

void Conv1d::backward(const double* dy, double* dx) {
    require(rows_ > 0, "backward before forward");
    const int ot = out_len(t_);
    const int big_rows = rows_ * ot;
    double* gw0 = gw.data();
    double* gw1 = gw.data() + static_cast<size_t>(out_ch) * in_ch;
    gemm(true, false, out_ch, in_ch, big_rows, 1.0, dy, out_ch, tap0_.data(), in_ch, 1.0, gw0,
         in_ch);
    gemm(true, false, out_ch, in_ch, big_rows, 1.0, dy, out_ch, tap1_.data(), in_ch, 1.0, gw1,
         in_ch);
    for (int r = 0; r < big_rows; ++r)
        for (int j = 0; j < out_ch; ++j) gb[j] += dy[static_cast<size_t>(r) * out_ch + j];
    if (!dx) return;

    const double* w0 = w.data();
    const double* w1 = w.data() + static_cast<size_t>(out_ch) * in_ch;
    std::vector<double> dt0(static_cast<size_t>(big_rows) * in_ch);
    std::vector<double> dt1(dt0.size());
    gemm(false, false, big_rows, in_ch, out_ch, 1.0, dy, out_ch, w0, in_ch, 0.0, dt0.data(), in_ch);
    gemm(false, false, big_rows, in_ch, out_ch, 1.0, dy, out_ch, w1, in_ch, 0.0, dt1.data(), in_ch);
    std::memset(dx, 0, sizeof(double) * static_cast<size_t>(rows_) * t_ * in_ch);
    for (int r = 0; r < rows_; ++r) {
        double* dxr = dx + static_cast<size_t>(r) * t_ * in_ch;
        const double* d0 = dt0.data() + static_cast<size_t>(r) * ot * in_ch;
        const double* d1 = dt1.data() + static_cast<size_t>(r) * ot * in_ch;
        for (int p = 0; p < ot; ++p) {
            const int src0 = same_pad ? p - 1 : p;
            const int src1 = same_pad ? p : p + 1;
            if (src0 >= 0)
                for (int c = 0; c < in_ch; ++c)
                    dxr[static_cast<size_t>(src0) * in_ch + c] += d0[static_cast<size_t>(p) * in_ch + c];
            for (int c = 0; c < in_ch; ++c)
                dxr[static_cast<size_t>(src1) * in_ch + c] += d1[static_cast<size_t>(p) * in_ch + c];
        }
    }
}

void Conv1d::zero_grad() {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
}

void Conv1d::collect(const std::string& prefix, ParamList& out_list) {
    out_list.push_back({prefix + ".w", w.data(), gw.data(), {2, out_ch, in_ch}});
    out_list.push_back({prefix + ".b", b.data(), gb.data(), {out_ch}});
}

// ---------------------------------------------------------------- Lstm

void Lstm::init(int in_dim, int hidden_dim, Rng& rng) {
    require(in_dim >= 1 && hidden_dim >= 1, "lstm dims must be positive");
    in = in_dim;
    hidden = hidden_dim;
    wx.resize(4 * static_cast<size_t>(hidden) * in);
    wh.resize(4 * static_cast<size_t>(hidden) * hidden);
    b.assign(4 * static_cast<size_t>(hidden), 0.0);
    gwx.assign(wx.size(), 0.0);
    gwh.assign(wh.size(), 0.0);
    gb.assign(b.size(), 0.0);
    fill_uniform(rng, wx, 1.0 / std::sqrt(static_cast<double>(in)));
    fill_uniform(rng, wh, 1.0 / std::sqrt(static_cast<double>(hidden)));
    for (int j = hidden; j < 2 * hidden; ++j) b[j] = 1.0;  // forget gate open at start
}

void Lstm::forward(const double* x, int rows, int t, double* y) {
    rows_ = rows;
    t_ = t;
    const int h4 = 4 * hidden;
    x_cache_.assign(x, x + static_cast<size_t>(rows) * t * in);
    gates_.resize(static_cast<size_t>(t) * rows * h4);
    c_.resize(static_cast<size_t>(t) * rows * hidden);
    tanh_c_.resize(c_.size());
    h_.resize(c_.size());

    std::vector<double> a(static_cast<size_t>(rows) * h4);
    const std::vector<double> zeros(static_cast<size_t>(rows) * hidden, 0.0);
    for (int s = 0; s < t; ++s) {
        for (int r = 0; r < rows; ++r)
            std::memcpy(a.data() + static_cast<size_t>(r) * h4, b.data(), sizeof(double) * h4);
        gemm(false, true, rows, h4, in, 1.0, x + static_cast<size_t>(s) * in, t * in, wx.data(), in,
             1.0, a.data(), h4);
        const double* h_prev = s == 0 ? zeros.data() : &h_[static_cast<size_t>(s - 1) * rows * hidden];
        gemm(false, true, rows, h4, hidden, 1.0, h_prev, hidden, wh.data(), hidden, 1.0, a.data(),
             h4);

        double* gate = &gates_[static_cast<size_t>(s) * rows * h4];
        double* c_now = &c_[static_cast<size_t>(s) * rows * hidden];
        double* tc_now = &tanh_c_[static_cast<size_t>(s) * rows * hidden];
        double* h_now = &h_[static_cast<size_t>(s) * rows * hidden];
        const double* c_prev = s == 0 ? zeros.data() : &c_[static_cast<size_t>(s - 1) * rows * hidden];
        for (int r = 0; r < rows; ++r) {
            const double* ar = a.data() + static_cast<size_t>(r) * h4;
            double* gr = gate + static_cast<size_t>(r) * h4;
            for (int j = 0; j < hidden; ++j) {
                const double gi = sigmoid(ar[j]);
                const double gf = sigmoid(ar[hidden + j]);
                const double gg = std::tanh(ar[2 * hidden + j]);
                const double go = sigmoid(ar[3 * hidden + j]);
                gr[j] = gi;
                gr[hidden + j] = gf;
                gr[2 * hidden + j] = gg;
                gr[3 * hidden + j] = go;
                const size_t idx = static_cast<size_t>(r) * hidden + j;
                const double c_val = gf * c_prev[idx] + gi * gg;
                c_now[idx] = c_val;
                const double tc = std::tanh(c_val);
                tc_now[idx] = tc;
                h_now[idx] = go * tc;
                y[(static_cast<size_t>(r) * t + s) * hidden + j] = h_now[idx];
            }
        }
    }
}

void Lstm::backward(const double* dy, double* dx) {
    require(rows_ > 0, "backward before forward");
    const int h4 = 4 * hidden;
    const size_t plane = static_cast<size_t>(rows_) * hidden;
    std::vector<double> dh(plane, 0.0), dc(plane, 0.0);
    std::vector<double> da(static_cast<size_t>(rows_) * h4);
    const std::vector<double> zeros(plane, 0.0);

    for (int s = t_ - 1; s >= 0; --s) {
        const double* gate = &gates_[static_cast<size_t>(s) * rows_ * h4];
        const double* tc_now = &tanh_c_[static_cast<size_t>(s) * plane];
        const double* c_prev = s == 0 ? zeros.data() : &c_[static_cast<size_t>(s - 1) * plane];

        for (int r = 0; r < rows_; ++r) {
            const double* gr = gate + static_cast<size_t>(r) * h4;
            double* dar = da.data() + static_cast<size_t>(r) * h4;
            for (int j = 0; j < hidden; ++j) {
                const size_t idx = static_cast<size_t>(r) * hidden + j;
                const double dh_total =
                    dy[(static_cast<size_t>(r) * t_ + s) * hidden + j] + dh[idx];
                const double gi = gr[j];
                const double gf = gr[hidden + j];
                const double gg = gr[2 * hidden + j];
                const double go = gr[3 * hidden + j];
                const double tc = tc_now[idx];
                const double dc_total = dh_total * go * (1.0 - tc * tc) + dc[idx];
                dar[j] = dc_total * gg * gi * (1.0 - gi);
                dar[hidden + j] = dc_total * c_prev[idx] * gf * (1.0 - gf);
                dar[2 * hidden + j] = dc_total * gi * (1.0 - gg * gg);
                dar[3 * hidden + j] = dh_total * tc * go * (1.0 - go);
                dc[idx] = dc_total * gf;
            }
        }

        gemm(true, false, h4, in, rows_, 1.0, da.data(), h4,
             x_cache_.data() + static_cast<size_t>(s) * in, t_ * in, 1.0, gwx.data(), in);
        const double* h_prev = s == 0 ? zeros.data() : &h_[static_cast<size_t>(s - 1) * plane];
        gemm(true, false, h4, hidden, rows_, 1.0, da.data(), h4, h_prev, hidden, 1.0, gwh.data(),
             hidden);
        for (int r = 0; r < rows_; ++r)
            for (int j = 0; j < h4; ++j) gb[j] += da[static_cast<size_t>(r) * h4 + j];
        if (dx)
            gemm(false, false, rows_, in, h4, 1.0, da.data(), h4, wx.data(), in, 0.0,
                 dx + static_cast<size_t>(s) * in, t_ * in);
        gemm(false, false, rows_, hidden, h4, 1.0, da.data(), h4, wh.data(), hidden, 0.0, dh.data(),
             hidden);
    }
}

void Lstm::zero_grad() {
    std::fill(gwx.begin(), gwx.end(), 0.0);
    std::fill(gwh.begin(), gwh.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
}

void Lstm::collect(const std::string& prefix, ParamList& out_list) {
    out_list.push_back({prefix + ".wx", wx.data(), gwx.data(), {4 * hidden, in}});
    out_list.push_back({prefix + ".wh", wh.data(), gwh.data(), {4 * hidden, hidden}});
    out_list.push_back({prefix + ".b", b.data(), gb.data(), {4 * hidden}});
}

// ---------------------------------------------------------------- Relu

void Relu::forward(double* x, size_t n) {
    mask_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        if (x[i] > 0.0) {
            mask_[i] = 1;
        } else {
            mask_[i] = 0;
            x[i] = 0.0;
        }
    }
}

void Relu::backward(double* dx) const {
    for (size_t i = 0; i < mask_.size(); ++i)
        if (!mask_[i]) dx[i] = 0.0;
}

}  // namespace intmit::nn
