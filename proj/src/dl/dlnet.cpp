// SPDX-License-Identifier: Apache-2.0

#include "intmit/dl/dlnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "intmit/nn/adam.hpp"
#include "intmit/nn/loss.hpp"
#include "intmit/rng.hpp"
#include "intmit/txrx/qam.hpp"

namespace intmit::dl {

std::vector<cplx> ReferenceStore::selected() const {
    require(!clean_estimates.empty(), "reference store is empty");
    if (policy == Policy::most_recent) return clean_estimates.back();
    std::vector<cplx> mean(clean_estimates.front().size(), cplx(0.0));
    for (const auto& e : clean_estimates) {
        require(e.size() == mean.size(), "reference shape mismatch");
        for (size_t i = 0; i < mean.size(); ++i) mean[i] += e[i];
    }
    const double inv = 1.0 / static_cast<double>(clean_estimates.size());
    for (auto& v : mean) v *= inv;
    return mean;
}

std::vector<double> rx_grid_features(const std::vector<cplx>& h, int n_rx, int k) {
    require(h.size() == static_cast<size_t>(n_rx) * k, "estimate shape mismatch");
    std::vector<double> out(static_cast<size_t>(n_rx) * k * 2);
    for (int a = 0; a < n_rx; ++a)
        for (int t = 0; t < k; ++t) {
            const cplx v = h[static_cast<size_t>(a) * k + t];
            out[(static_cast<size_t>(a) * k + t) * 2 + 0] = v.real();
            out[(static_cast<size_t>(a) * k + t) * 2 + 1] = v.imag();
        }
    return out;
}

DlNetwork DlNetwork::make(int k, int n_rx, int order, uint64_t seed) {
    require(k >= 2 && n_rx >= 1, "network needs k >= 2 tones and a receive antenna");
    txrx::qam_bits_per_symbol(order);  // validates the order
    DlNetwork net;
    net.k = k;
    net.n_rx = n_rx;
    net.order = order;
    Rng rng(seed);
    const int mid = net.feat / 2;
    net.ext_int1.init(2, mid, true, rng);
    net.ext_int2.init(mid, net.feat, true, rng);
    net.ext_cln1.init(2, mid, true, rng);
    net.ext_cln2.init(mid, net.feat, true, rng);
    net.fusion.init(net.feat, net.feat, rng);
    net.embed.init(2, net.feat, rng);
    net.corrector.init(net.feat, net.hidden, rng);
    net.classifier.init(net.hidden, order, rng);
    return net;
}

void DlNetwork::forward(const double* x_int, const double* x_cln, const double* c, int b_frames,
                        int n_sym, double* logits) {
    b_ = b_frames;
    s_ = n_sym;
    const int rows = b_frames * n_rx;
    const int hidden_ch = ext_int1.out_ch;
    require(ext_cln1.out_ch == hidden_ch && ext_int2.out_ch == feat && ext_cln2.out_ch == feat,
            "extractor widths out of step");
    const size_t plane16 = static_cast<size_t>(rows) * k * hidden_ch;
    const size_t plane = static_cast<size_t>(rows) * k * feat;
    const size_t syms = static_cast<size_t>(b_frames) * n_sym;

    bi1_.resize(plane16);
    fi_.resize(plane);
    bc1_.resize(plane16);
    fc_.resize(plane);
    diff_.resize(plane);
    pooled_.assign(static_cast<size_t>(b_frames) * feat, 0.0);
    iest_.resize(static_cast<size_t>(b_frames) * feat);
    e_.resize(syms * feat);
    frec_.resize(syms * feat);
    lstm_out_.resize(syms * hidden);

    ext_int1.forward(x_int, rows, k, bi1_.data());
    ri1_.forward(bi1_.data(), plane16);
    ext_int2.forward(bi1_.data(), rows, k, fi_.data());
    ext_cln1.forward(x_cln, rows, k, bc1_.data());
    rc1_.forward(bc1_.data(), plane16);
    ext_cln2.forward(bc1_.data(), rows, k, fc_.data());
    for (size_t i = 0; i < plane; ++i) diff_[i] = fi_[i] - fc_[i];

    const double inv_pool = 1.0 / (static_cast<double>(n_rx) * k);
    for (int b = 0; b < b_frames; ++b)
        for (int j = 0; j < feat; ++j) {
            double acc = 0.0;
            for (int r = 0; r < n_rx; ++r)
                for (int t = 0; t < k; ++t)
                    acc += diff_[(static_cast<size_t>(b * n_rx + r) * k + t) * feat + j];
            pooled_[static_cast<size_t>(b) * feat + j] = acc * inv_pool;
        }
    fusion.forward(pooled_.data(), b_frames, iest_.data());

    embed.forward(c, static_cast<int>(syms), e_.data());
    re_.forward(e_.data(), syms * feat);
    for (int b = 0; b < b_frames; ++b)
        for (int s = 0; s < n_sym; ++s)
            for (int j = 0; j < feat; ++j) {
                const size_t idx = (static_cast<size_t>(b) * n_sym + s) * feat + j;
                frec_[idx] = e_[idx] - iest_[static_cast<size_t>(b) * feat + j];
            }
    corrector.forward(frec_.data(), b_frames, n_sym, lstm_out_.data());
    classifier.forward(lstm_out_.data(), static_cast<int>(syms), logits);
}

void DlNetwork::backward(const double* dlogits) {
    const int rows = b_ * n_rx;
    const size_t syms = static_cast<size_t>(b_) * s_;
    d_lstm_.resize(syms * hidden);
    d_frec_.resize(syms * feat);
    d_iest_.assign(static_cast<size_t>(b_) * feat, 0.0);
    d_pooled_.resize(static_cast<size_t>(b_) * feat);
    d_diff_.resize(static_cast<size_t>(rows) * k * feat);
    d_b1_.resize(static_cast<size_t>(rows) * k * ext_int1.out_ch);

    classifier.backward(dlogits, d_lstm_.data());
    corrector.backward(d_lstm_.data(), d_frec_.data());

    for (int b = 0; b < b_; ++b)
        for (int s = 0; s < s_; ++s)
            for (int j = 0; j < feat; ++j)
                d_iest_[static_cast<size_t>(b) * feat + j] -=
                    d_frec_[(static_cast<size_t>(b) * s_ + s) * feat + j];
    re_.backward(d_frec_.data());
    embed.backward(d_frec_.data(), nullptr);

    fusion.backward(d_iest_.data(), d_pooled_.data());
    const double inv_pool = 1.0 / (static_cast<double>(n_rx) * k);
    for (int b = 0; b < b_; ++b)
        for (int r = 0; r < n_rx; ++r)
            for (int t = 0; t < k; ++t)
                for (int j = 0; j < feat; ++j)
                    d_diff_[(static_cast<size_t>(b * n_rx + r) * k + t) * feat + j] =
                        d_pooled_[static_cast<size_t>(b) * feat + j] * inv_pool;

    ext_int2.backward(d_diff_.data(), d_b1_.data());
    ri1_.backward(d_b1_.data());
    ext_int1.backward(d_b1_.data(), nullptr);

    for (auto& v : d_diff_) v = -v;
    ext_cln2.backward(d_diff_.data(), d_b1_.data());
    rc1_.backward(d_b1_.data());
    ext_cln1.backward(d_b1_.data(), nullptr);
}

void DlNetwork::zero_grad() {
    ext_int1.zero_grad();
    ext_int2.zero_grad();
    ext_cln1.zero_grad();
    ext_cln2.zero_grad();
    fusion.zero_grad();
    embed.zero_grad();
    corrector.zero_grad();
    classifier.zero_grad();
}

nn::ParamList DlNetwork::params() {
    nn::ParamList list;
    ext_int1.collect("ext_int1", list);
    ext_int2.collect("ext_int2", list);
    ext_cln1.collect("ext_cln1", list);
    ext_cln2.collect("ext_cln2", list);
    fusion.collect("fusion", list);
    embed.collect("embed", list);
    corrector.collect("corrector", list);
    classifier.collect("classifier", list);
    return list;
}

namespace {

void relu_inplace(std::vector<double>& x) {
    for (auto& v : x) v = v > 0.0 ? v : 0.0;
}

}  // namespace

InterferenceFeature estimate_interference(DlNetwork& net, const std::vector<cplx>& h_i,
                                          const ReferenceStore& ref) {
    const auto x_int = rx_grid_features(h_i, net.n_rx, net.k);
    const auto x_cln = rx_grid_features(ref.selected(), net.n_rx, net.k);

    require(net.ext_cln1.out_ch == net.ext_int1.out_ch && net.ext_int2.out_ch == net.feat &&
                net.ext_cln2.out_ch == net.feat,
            "extractor widths out of step");
    const int rows = net.n_rx;
    std::vector<double> b1(static_cast<size_t>(rows) * net.k * net.ext_int1.out_ch);
    std::vector<double> fi(static_cast<size_t>(rows) * net.k * net.feat);
    std::vector<double> fc(fi.size());

    net.ext_int1.forward(x_int.data(), rows, net.k, b1.data());
    relu_inplace(b1);
    net.ext_int2.forward(b1.data(), rows, net.k, fi.data());
    net.ext_cln1.forward(x_cln.data(), rows, net.k, b1.data());
    relu_inplace(b1);
    net.ext_cln2.forward(b1.data(), rows, net.k, fc.data());
    for (size_t i = 0; i < fi.size(); ++i) fi[i] -= fc[i];

    const double inv_pool = 1.0 / (static_cast<double>(net.n_rx) * net.k);
    std::vector<double> pooled(net.feat);
    for (int j = 0; j < net.feat; ++j) {
        double acc = 0.0;
        for (int r = 0; r < rows; ++r)
            for (int t = 0; t < net.k; ++t)
                acc += fi[(static_cast<size_t>(r) * net.k + t) * net.feat + j];
        pooled[j] = acc * inv_pool;
    }

    InterferenceFeature out;
    out.i_est.resize(net.feat);
    net.fusion.forward(pooled.data(), 1, out.i_est.data());
    for (double v : out.i_est) require(std::isfinite(v), "i_est must be finite");
    return out;
}

std::vector<double> mitigate_symbols(DlNetwork& net, const std::vector<cplx>& c_i,
                                     const InterferenceFeature& i_est) {
    require(i_est.i_est.size() == static_cast<size_t>(net.feat),
            "interference feature width mismatch");
    const int n_sym = static_cast<int>(c_i.size());
    require(n_sym >= 1, "symbol sequence is empty");

    std::vector<double> c(static_cast<size_t>(n_sym) * 2);
    for (int s = 0; s < n_sym; ++s) {
        c[static_cast<size_t>(s) * 2 + 0] = c_i[s].real();
        c[static_cast<size_t>(s) * 2 + 1] = c_i[s].imag();
    }
    std::vector<double> f(static_cast<size_t>(n_sym) * net.feat);
    net.embed.forward(c.data(), n_sym, f.data());
    relu_inplace(f);
    for (int s = 0; s < n_sym; ++s)
        for (int j = 0; j < net.feat; ++j)
            f[static_cast<size_t>(s) * net.feat + j] -= i_est.i_est[j];

    std::vector<double> out(static_cast<size_t>(n_sym) * net.hidden);
    net.corrector.forward(f.data(), 1, n_sym, out.data());
    return out;
}

ClassifyResult classify_constellation(DlNetwork& net, const std::vector<double>& features,
                                      int n_sym) {
    require(features.size() == static_cast<size_t>(n_sym) * net.hidden,
            "feature shape mismatch");
    ClassifyResult out;
    out.logits.resize(static_cast<size_t>(n_sym) * net.order);
    net.classifier.forward(features.data(), n_sym, out.logits.data());
    out.llrs = txrx::logits_to_llrs(out.logits, n_sym, net.order);
    return out;
}

namespace {

struct BatchBuffers {
    std::vector<double> x_int, x_cln, c;
    std::vector<int> labels;
};

// Gathers one batch of frames; ref_features[i] is the reference grid paired
// with dataset index order[i].
void gather_batch(const std::vector<DlSample>& dataset, const std::vector<int>& order,
                  const std::vector<std::vector<cplx>>& ref_grids, size_t begin, size_t end,
                  int n_rx, int k, int n_sym, BatchBuffers& buf) {
    const size_t b = end - begin;
    buf.x_int.resize(b * n_rx * k * 2);
    buf.x_cln.resize(b * n_rx * k * 2);
    buf.c.resize(b * n_sym * 2);
    buf.labels.resize(b * n_sym);
    const size_t grid = static_cast<size_t>(n_rx) * k * 2;
    for (size_t i = begin; i < end; ++i) {
        const DlSample& s = dataset[order[i]];
        const auto xi = rx_grid_features(s.est.h_int_est, n_rx, k);
        const auto xc = rx_grid_features(ref_grids[order[i]], n_rx, k);
        std::copy(xi.begin(), xi.end(), buf.x_int.begin() + (i - begin) * grid);
        std::copy(xc.begin(), xc.end(), buf.x_cln.begin() + (i - begin) * grid);
        for (int t = 0; t < n_sym; ++t) {
            buf.c[((i - begin) * n_sym + t) * 2 + 0] = s.c_comb[t].real();
            buf.c[((i - begin) * n_sym + t) * 2 + 1] = s.c_comb[t].imag();
            buf.labels[(i - begin) * n_sym + t] = s.coded.tx_indices[t];
        }
    }
}

}  // namespace

DlTrainResult train_dl(const std::vector<DlSample>& dataset, const TrainConfig& cfg) {
    require(!dataset.empty(), "training dataset is empty");
    cfg.validate();
    const int n_rx = dataset[0].est.h_true.n_rx;
    const int k = dataset[0].est.h_true.n_re;
    const int n_sym = dataset[0].coded.n_symbols();
    const int order = dataset[0].coded.qam_order;
    const int n = static_cast<int>(dataset.size());

    DlTrainResult result;
    result.net = DlNetwork::make(k, n_rx, order, derive_seed(cfg.seed, "dl.init", 0));
    DlNetwork& net = result.net;
    auto params = net.params();
    nn::AdamState adam;
    adam.lr = cfg.lr;
    adam.attach(params);

    // Mean of the previous (up to) 32 frames' clean estimates as the
    // subtraction reference, wrapping cyclically — the same statistic the
    // mean reference-store policy provides at evaluation time.
    const int window = std::min(32, n);
    const size_t grid_len = static_cast<size_t>(n_rx) * k;
    std::vector<std::vector<cplx>> ref_grids(n);
    for (int i = 0; i < n; ++i) {
        std::vector<cplx> mean(grid_len, cplx{0.0, 0.0});
        for (int d = 1; d <= window; ++d) {
            const auto& est = dataset[(i - d + n) % n].est.h_clean_est;
            for (size_t g = 0; g < grid_len; ++g) mean[g] += est[g];
        }
        for (auto& v : mean) v /= static_cast<double>(window);
        ref_grids[i] = std::move(mean);
    }

    const auto& constellation = txrx::qam_constellation(order);
    std::vector<int> order_idx(n);
    std::iota(order_idx.begin(), order_idx.end(), 0);
    BatchBuffers buf;
    std::vector<double> logits, dlogits;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // step schedule: halve the rate at 60% and quarter it at 85% of the
        // budget — the sequence model's block-error performance depends on
        // settled, calibrated logits, not just the last loss value
        double lr_scale = 1.0;
        if (epoch >= (cfg.epochs * 17) / 20) lr_scale = 0.25;
        else if (epoch >= (cfg.epochs * 3) / 5) lr_scale = 0.5;
        adam.lr = cfg.lr * lr_scale;

        Rng shuffle_rng(derive_seed(cfg.seed, "dl.epoch", epoch));
        for (int i = n - 1; i > 0; --i)
            std::swap(order_idx[i], order_idx[shuffle_rng.uniform_int(i + 1)]);

        double loss_sum = 0.0;
        double dist_sum = 0.0;
        size_t item_count = 0;
        for (size_t begin = 0; begin < static_cast<size_t>(n); begin += cfg.batch_frames) {
            const size_t end = std::min(static_cast<size_t>(n), begin + cfg.batch_frames);
            gather_batch(dataset, order_idx, ref_grids, begin, end, n_rx, k, n_sym, buf);
            const int b = static_cast<int>(end - begin);
            const size_t items = static_cast<size_t>(b) * n_sym;
            logits.resize(items * order);
            dlogits.resize(items * order);

            net.zero_grad();
            net.forward(buf.x_int.data(), buf.x_cln.data(), buf.c.data(), b, n_sym,
                        logits.data());
            const double loss = nn::cross_entropy_loss(logits.data(), buf.labels.data(),
                                                       static_cast<int>(items), order,
                                                       dlogits.data());
            net.backward(dlogits.data());
            adam.update(params);

            loss_sum += loss * static_cast<double>(items);
            for (size_t i = 0; i < items; ++i) {
                const double* row = logits.data() + i * order;
                const int hat = static_cast<int>(std::max_element(row, row + order) - row);
                dist_sum += std::abs(constellation[hat] - constellation[buf.labels[i]]);
            }
            item_count += items;
        }
        result.loss_curve.push_back(loss_sum / static_cast<double>(item_count));
        result.sym_dist_curve.push_back(dist_sum / static_cast<double>(item_count));
    }
    return result;
}

ReferenceStore build_reference_store(const DlEnvironment& env, int n_ref, uint64_t seed) {
    require(n_ref >= 1, "reference store needs at least one entry");
    ReferenceStore store;
    store.clean_estimates.reserve(n_ref);
    for (int i = 0; i < n_ref; ++i)
        store.clean_estimates.push_back(synth_clean_estimate(env, derive_seed(seed, "dl.ref", i)));
    return store;
}

std::vector<BlerRecord> evaluate_bler(DlNetwork& net, const DlLinkConfig& cfg,
                                      const std::vector<double>& sinr_grid_db, int n_frames,
                                      uint64_t seed) {
    require(!sinr_grid_db.empty(), "SINR grid is empty");
    require(n_frames >= 1, "need at least one frame per point");
    const DlEnvironment env = make_environment(cfg);
    require(net.k == env.k && net.n_rx == env.n_rx && net.order == env.order,
            "network shape does not match the scenario");

    const uint64_t master = derive_seed(seed, "dl.eval", cfg.scenario.seed);
    ReferenceStore store = build_reference_store(env, 32, derive_seed(master, "dl.refstore", 0));
    store.policy = ReferenceStore::Policy::mean;
    const auto ref_features = rx_grid_features(store.selected(), env.n_rx, env.k);

    constexpr int kChunk = 64;
    const size_t grid = static_cast<size_t>(env.n_rx) * env.k * 2;
    std::vector<double> x_int, x_cln, c, logits;
    std::vector<BlerRecord> records;

    for (size_t p = 0; p < sinr_grid_db.size(); ++p) {
        int err_nn = 0, err_irc = 0, err_mrc = 0;
        for (int base = 0; base < n_frames; base += kChunk) {
            const int b = std::min(kChunk, n_frames - base);
            std::vector<DlSample> chunk;
            chunk.reserve(b);
            for (int f = 0; f < b; ++f) {
                const uint64_t idx =
                    (static_cast<uint64_t>(p) << 32) | static_cast<uint64_t>(base + f);
                chunk.push_back(
                    synth_sample(env, sinr_grid_db[p], derive_seed(master, "dl.frame", idx)));
            }

            x_int.resize(static_cast<size_t>(b) * grid);
            x_cln.resize(static_cast<size_t>(b) * grid);
            c.resize(static_cast<size_t>(b) * env.n_sym * 2);
            logits.resize(static_cast<size_t>(b) * env.n_sym * env.order);
            for (int f = 0; f < b; ++f) {
                const auto xi = rx_grid_features(chunk[f].est.h_int_est, env.n_rx, env.k);
                std::copy(xi.begin(), xi.end(), x_int.begin() + static_cast<size_t>(f) * grid);
                std::copy(ref_features.begin(), ref_features.end(),
                          x_cln.begin() + static_cast<size_t>(f) * grid);
                for (int t = 0; t < env.n_sym; ++t) {
                    c[(static_cast<size_t>(f) * env.n_sym + t) * 2 + 0] = chunk[f].c_comb[t].real();
                    c[(static_cast<size_t>(f) * env.n_sym + t) * 2 + 1] = chunk[f].c_comb[t].imag();
                }
            }
            net.forward(x_int.data(), x_cln.data(), c.data(), b, env.n_sym, logits.data());

            for (int f = 0; f < b; ++f) {
                const std::vector<double> frame_logits(
                    logits.begin() + static_cast<size_t>(f) * env.n_sym * env.order,
                    logits.begin() + static_cast<size_t>(f + 1) * env.n_sym * env.order);
                const auto llrs = txrx::logits_to_llrs(frame_logits, env.n_sym, env.order);
                const auto nn_block = decode_llrs(llrs, chunk[f], env);
                const auto irc_block = decode_irc(chunk[f], env);
                const auto mrc_block = decode_mrc(chunk[f], env);
                err_nn += !nn_block.converged || nn_block.decoded != nn_block.truth;
                err_irc += !irc_block.converged || irc_block.decoded != irc_block.truth;
                err_mrc += !mrc_block.converged || mrc_block.decoded != mrc_block.truth;
            }
        }
        const double inv = 1.0 / static_cast<double>(n_frames);
        records.push_back({"int-learner", sinr_grid_db[p], n_frames, err_nn, err_nn * inv});
        records.push_back({"irc", sinr_grid_db[p], n_frames, err_irc, err_irc * inv});
        records.push_back({"mrc", sinr_grid_db[p], n_frames, err_mrc, err_mrc * inv});
    }
    return records;
}

}  // namespace intmit::dl
