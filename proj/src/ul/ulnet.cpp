// SPDX-License-Identifier: Apache-2.0

#include "intmit/ul/ulnet.hpp"

#include <algorithm>
#include <cmath>

#include "intmit/nn/loss.hpp"
#include "intmit/rng.hpp"

namespace intmit::ul {

namespace {

int scaled(int width, double sf) {
    return std::max(1, static_cast<int>(std::lround(width * sf)));
}

void preprocess_into(const std::vector<cplx>& h, size_t count, double* out) {
    for (size_t i = 0; i < count; ++i) {
        out[2 * i] = h[i].real();
        out[2 * i + 1] = h[i].imag();
    }
}

struct Split {
    int n_train = 0;
    int n_hold = 0;
};

Split split_dataset(size_t n_frames) {
    Split s;
    s.n_hold = std::max(1, static_cast<int>(n_frames / 5));
    s.n_train = static_cast<int>(n_frames) - s.n_hold;
    require(s.n_train >= 1, "dataset too small to split for training");
    return s;
}

const std::vector<cplx>& label_of(const phy::EstimatePair& pair, bool use_true) {
    return use_true ? pair.h_true.h : pair.h_clean_est;
}

template <typename Net>
double held_out_nmse(Net& net, const std::vector<phy::EstimatePair>& dataset, int first, int count,
                     int rows, int k, bool use_true) {
    std::vector<double> x(static_cast<size_t>(rows) * k * 2), y(x.size());
    double acc = 0.0;
    for (int f = first; f < first + count; ++f) {
        const auto& pair = dataset[f];
        preprocess_into(pair.h_int_est, pair.h_int_est.size(), x.data());
        net.forward(x.data(), rows, y.data());
        const auto& label = label_of(pair, use_true);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < label.size(); ++i) {
            const double dr = y[2 * i] - label[i].real();
            const double di = y[2 * i + 1] - label[i].imag();
            num += dr * dr + di * di;
            den += std::norm(label[i]);
        }
        acc += num / den;
    }
    return acc / count;
}

template <typename Net>
std::vector<double> run_training(Net& net, const std::vector<phy::EstimatePair>& dataset,
                                 const TrainConfig& cfg, bool use_true, bool curve_per_epoch) {
    const int m = dataset[0].h_true.n_rx;
    const int n = dataset[0].h_true.n_tx;
    const int k = dataset[0].h_true.n_re;
    const int frame_rows = m * n;
    const Split split = split_dataset(dataset.size());

    nn::ParamList params = net.params();
    nn::AdamState opt(cfg.lr);
    opt.attach(params);

    std::vector<int> order(split.n_train);
    for (int i = 0; i < split.n_train; ++i) order[i] = i;

    const size_t frame_elems = static_cast<size_t>(frame_rows) * k * 2;
    std::vector<double> x(frame_elems * cfg.batch_frames), label(x.size()), y(x.size()),
        dy(x.size());
    std::vector<double> curve;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, "ul.epoch", epoch));
        for (int i = split.n_train - 1; i > 0; --i)
            std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);

        for (int start = 0; start < split.n_train; start += cfg.batch_frames) {
            const int nb = std::min(cfg.batch_frames, split.n_train - start);
            const int rows = nb * frame_rows;
            for (int b = 0; b < nb; ++b) {
                const auto& pair = dataset[order[start + b]];
                preprocess_into(pair.h_int_est, pair.h_int_est.size(), x.data() + b * frame_elems);
                preprocess_into(label_of(pair, use_true), pair.h_int_est.size(),
                                label.data() + b * frame_elems);
            }
            net.forward(x.data(), rows, y.data());
            const size_t count = static_cast<size_t>(rows) * k * 2;
            nn::mse_loss(y.data(), label.data(), count, dy.data());
            net.zero_grad();
            net.backward(dy.data());
            opt.update(params);
        }

        if (curve_per_epoch || epoch + 1 == cfg.epochs)
            curve.push_back(held_out_nmse(net, dataset, split.n_train, split.n_hold, frame_rows, k,
                                          use_true));
    }
    return curve;
}

}  // namespace

std::vector<double> preprocess(const std::vector<cplx>& h, int m, int n, int k) {
    require(h.size() == static_cast<size_t>(m) * n * k, "grid shape mismatch");
    std::vector<double> out(h.size() * 2);
    preprocess_into(h, h.size(), out.data());
    return out;
}

std::vector<cplx> postprocess(const std::vector<double>& x, int m, int n, int k) {
    require(x.size() == static_cast<size_t>(m) * n * k * 2, "tensor shape mismatch");
    std::vector<cplx> h(x.size() / 2);
    for (size_t i = 0; i < h.size(); ++i) h[i] = cplx(x[2 * i], x[2 * i + 1]);
    return h;
}

UlNetwork UlNetwork::make(int k, double sf, uint64_t seed) {
    require(k >= 2, "tone count must be >= 2");
    UlNetwork net;
    net.k = k;
    net.sf = sf;
    Rng rng(derive_seed(seed, "ul.init", 0));
    const int c1 = scaled(16, sf), c2 = scaled(32, sf), c3 = scaled(32, sf);
    const int hidden = scaled(64, sf), f1 = scaled(32, sf);
    net.conv1.init(2, c1, true, rng);
    net.conv2.init(c1, c2, true, rng);
    net.conv3.init(c2, c3, true, rng);
    net.lstm.init(c3, hidden, rng);
    net.fc1.init(hidden, f1, rng);
    net.fc2.init(f1, 2, rng);
    return net;
}

void UlNetwork::forward(const double* x, int rows, double* y) {
    rows_ = rows;
    const size_t positions = static_cast<size_t>(rows) * k;
    a1_.resize(positions * conv1.out_ch);
    a2_.resize(positions * conv2.out_ch);
    a3_.resize(positions * conv3.out_ch);
    a4_.resize(positions * lstm.hidden);
    a5_.resize(positions * fc1.out);

    conv1.forward(x, rows, k, a1_.data());
    r1_.forward(a1_.data(), a1_.size());
    conv2.forward(a1_.data(), rows, k, a2_.data());
    r2_.forward(a2_.data(), a2_.size());
    conv3.forward(a2_.data(), rows, k, a3_.data());
    r3_.forward(a3_.data(), a3_.size());
    lstm.forward(a3_.data(), rows, k, a4_.data());
    fc1.forward(a4_.data(), static_cast<int>(positions), a5_.data());
    r4_.forward(a5_.data(), a5_.size());
    fc2.forward(a5_.data(), static_cast<int>(positions), y);
}

void UlNetwork::backward(const double* dy) {
    require(rows_ > 0, "backward before forward");
    std::vector<double> d5(a5_.size()), d4(a4_.size()), d3(a3_.size()), d2(a2_.size()),
        d1(a1_.size());
    const int positions = rows_ * k;
    fc2.backward(dy, d5.data());
    r4_.backward(d5.data());
    fc1.backward(d5.data(), d4.data());
    lstm.backward(d4.data(), d3.data());
    r3_.backward(d3.data());
    conv3.backward(d3.data(), d2.data());
    r2_.backward(d2.data());
    conv2.backward(d2.data(), d1.data());
    r1_.backward(d1.data());
    conv1.backward(d1.data(), nullptr);
    (void)positions;
}

void UlNetwork::zero_grad() {
    conv1.zero_grad();
    conv2.zero_grad();
    conv3.zero_grad();
    lstm.zero_grad();
    fc1.zero_grad();
    fc2.zero_grad();
}

nn::ParamList UlNetwork::params() {
    nn::ParamList list;
    conv1.collect("conv1", list);
    conv2.collect("conv2", list);
    conv3.collect("conv3", list);
    lstm.collect("lstm", list);
    fc1.collect("fc1", list);
    fc2.collect("fc2", list);
    return list;
}

MonolithicNetwork MonolithicNetwork::make(int k, uint64_t seed) {
    require(k >= 2, "tone count must be >= 2");
    MonolithicNetwork net;
    net.k = k;
    Rng rng(derive_seed(seed, "ul.mono.init", 0));
    const int widths[] = {2, 16, 32, 64, 128, 256, 512};
    net.convs.resize(6);
    net.relus_.resize(6);
    for (int i = 0; i < 6; ++i) net.convs[i].init(widths[i], widths[i + 1], true, rng);
    net.head.init(512, 2, rng);
    return net;
}

void MonolithicNetwork::forward(const double* x, int rows, double* y) {
    rows_ = rows;
    const size_t positions = static_cast<size_t>(rows) * k;
    acts_.resize(6);
    const double* cur = x;
    for (int i = 0; i < 6; ++i) {
        acts_[i].resize(positions * convs[i].out_ch);
        convs[i].forward(cur, rows, k, acts_[i].data());
        relus_[i].forward(acts_[i].data(), acts_[i].size());
        cur = acts_[i].data();
    }
    head.forward(cur, static_cast<int>(positions), y);
}

void MonolithicNetwork::backward(const double* dy) {
    require(rows_ > 0, "backward before forward");
    std::vector<double> grad(acts_[5].size());
    head.backward(dy, grad.data());
    for (int i = 5; i >= 0; --i) {
        relus_[i].backward(grad.data());
        if (i == 0) {
            convs[i].backward(grad.data(), nullptr);
        } else {
            std::vector<double> next(acts_[i - 1].size());
            convs[i].backward(grad.data(), next.data());
            grad = std::move(next);
        }
    }
}

void MonolithicNetwork::zero_grad() {
    for (auto& c : convs) c.zero_grad();
    head.zero_grad();
}

nn::ParamList MonolithicNetwork::params() {
    nn::ParamList list;
    for (size_t i = 0; i < convs.size(); ++i) convs[i].collect("conv" + std::to_string(i + 1), list);
    head.collect("head", list);
    return list;
}

std::vector<cplx> ul_recover(UlNetwork& net, const std::vector<cplx>& h_i, int m, int n, int k) {
    auto x = preprocess(h_i, m, n, k);
    std::vector<double> y(x.size());
    net.forward(x.data(), m * n, y.data());
    return postprocess(y, m, n, k);
}

std::vector<cplx> ul_recover(MonolithicNetwork& net, const std::vector<cplx>& h_i, int m, int n,
                             int k) {
    auto x = preprocess(h_i, m, n, k);
    std::vector<double> y(x.size());
    net.forward(x.data(), m * n, y.data());
    return postprocess(y, m, n, k);
}

UlTrainResult train_ul(const std::vector<phy::EstimatePair>& dataset, const TrainConfig& cfg,
                       bool use_true_labels) {
    cfg.validate();
    require(!dataset.empty(), "training dataset is empty");
    UlTrainResult result{UlNetwork::make(dataset[0].h_true.n_re, cfg.scale_factor, cfg.seed), {}};
    result.learning_curve = run_training(result.net, dataset, cfg, use_true_labels, true);
    return result;
}

MonolithicTrainResult train_monolithic_baseline(const std::vector<phy::EstimatePair>& dataset,
                                                const TrainConfig& cfg) {
    cfg.validate();
    require(!dataset.empty(), "training dataset is empty");
    MonolithicTrainResult result{MonolithicNetwork::make(dataset[0].h_true.n_re, cfg.seed), 0.0};
    auto curve = run_training(result.net, dataset, cfg, false, false);
    result.held_out_nmse = curve.back();
    return result;
}

}  // namespace intmit::ul
