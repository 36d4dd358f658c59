// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "intmit/nn/adam.hpp"
#include "intmit/nn/checkpoint.hpp"
#include "intmit/nn/gemm.hpp"
#include "intmit/nn/gradcheck.hpp"
#include "intmit/nn/layers.hpp"
#include "intmit/nn/loss.hpp"

using namespace intmit;
using namespace intmit::nn;

namespace {

// brute-force reference for the GEMM wrapper
void gemm_ref(bool ta, bool tb, int m, int n, int k, double alpha, const std::vector<double>& a,
              int lda, const std::vector<double>& b, int ldb, double beta, std::vector<double>& c,
              int ldc) {
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int p = 0; p < k; ++p) {
                double av = ta ? a[p * lda + i] : a[i * lda + p];
                double bv = tb ? b[j * ldb + p] : b[p * ldb + j];
                acc += av * bv;
            }
            c[i * ldc + j] = alpha * acc + beta * c[i * ldc + j];
        }
}

std::vector<double> random_vec(Rng& rng, size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-scale, scale);
    return v;
}

}  // namespace

TEST_CASE("gemm matches a brute-force reference") {
    Rng rng(5);
    for (bool ta : {false, true}) {
        for (bool tb : {false, true}) {
            const int m = 4, n = 3, k = 5;
            const int lda = ta ? m + 2 : k + 2;
            const int ldb = tb ? k + 1 : n + 1;
            const int ldc = n + 3;
            auto a = random_vec(rng, static_cast<size_t>((ta ? k : m)) * lda);
            auto b = random_vec(rng, static_cast<size_t>((tb ? n : k)) * ldb);
            auto c0 = random_vec(rng, static_cast<size_t>(m) * ldc);
            auto c1 = c0;
            gemm_ref(ta, tb, m, n, k, 1.7, a, lda, b, ldb, 0.3, c0, ldc);
            gemm(ta, tb, m, n, k, 1.7, a.data(), lda, b.data(), ldb, 0.3, c1.data(), ldc);
            for (size_t i = 0; i < c0.size(); ++i) CHECK(c1[i] == doctest::Approx(c0[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("dense with identity weights passes input through") {
    Rng rng(1);
    Dense d;
    d.init(3, 3, rng);
    std::fill(d.w.begin(), d.w.end(), 0.0);
    for (int i = 0; i < 3; ++i) d.w[i * 3 + i] = 1.0;
    std::fill(d.b.begin(), d.b.end(), 0.0);
    std::vector<double> x{1.0, -2.0, 3.0, 0.5, 0.0, -1.0};
    std::vector<double> y(6);
    d.forward(x.data(), 2, y.data());
    for (int i = 0; i < 6; ++i) CHECK(y[i] == doctest::Approx(x[i]));
}

TEST_CASE("conv kernel (1, 0) shifts the sequence right") {
    Rng rng(2);
    Conv1d c;
    c.init(1, 1, true, rng);
    c.w[0] = 1.0;  // tap on x[t-1]
    c.w[1] = 0.0;  // tap on x[t]
    c.b[0] = 0.0;
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    std::vector<double> y(4);
    c.forward(x.data(), 1, 4, y.data());
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(1.0));
    CHECK(y[2] == doctest::Approx(2.0));
    CHECK(y[3] == doctest::Approx(3.0));
}

TEST_CASE("conv output lengths follow the padding mode") {
    Rng rng(3);
    Conv1d same, valid;
    same.init(2, 3, true, rng);
    valid.init(2, 3, false, rng);
    CHECK(same.out_len(64) == 64);
    CHECK(valid.out_len(64) == 63);
    std::vector<double> x = random_vec(rng, 2 * 5 * 2);
    std::vector<double> ys(2 * 5 * 3), yv(2 * 4 * 3);
    same.forward(x.data(), 2, 5, ys.data());
    valid.forward(x.data(), 2, 5, yv.data());
    for (double v : ys) CHECK(std::isfinite(v));
    for (double v : yv) CHECK(std::isfinite(v));
}

TEST_CASE("valid conv matches a direct two-tap sum") {
    Rng rng(4);
    Conv1d c;
    c.init(2, 2, false, rng);
    std::vector<double> x = random_vec(rng, 1 * 4 * 2);
    std::vector<double> y(1 * 3 * 2);
    c.forward(x.data(), 1, 4, y.data());
    for (int t = 0; t < 3; ++t) {
        for (int o = 0; o < 2; ++o) {
            double want = c.b[o];
            for (int i = 0; i < 2; ++i) {
                want += c.w[o * 2 + i] * x[t * 2 + i];          // tap 0 on x[t]
                want += c.w[4 + o * 2 + i] * x[(t + 1) * 2 + i];  // tap 1 on x[t+1]
            }
            CHECK(y[t * 2 + o] == doctest::Approx(want));
        }
    }
}

TEST_CASE("all-zero lstm emits zeros") {
    Rng rng(5);
    Lstm l;
    l.init(3, 4, rng);
    std::fill(l.wx.begin(), l.wx.end(), 0.0);
    std::fill(l.wh.begin(), l.wh.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
    std::vector<double> x = random_vec(rng, 2 * 6 * 3);
    std::vector<double> y(2 * 6 * 4, 1.0);
    l.forward(x.data(), 2, 6, y.data());
    for (double v : y) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("mse reference values and zero self-gradient") {
    std::vector<double> x{1.0, 1.0};
    std::vector<double> zero{0.0, 0.0};
    std::vector<double> g(2);
    CHECK(mse_loss(x.data(), x.data(), 2, g.data()) == doctest::Approx(0.0));
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(mse_loss(x.data(), zero.data(), 2, nullptr) == doctest::Approx(1.0));
}

TEST_CASE("uniform logits cost ln(Q) with symmetric gradient") {
    const int q = 16;
    std::vector<double> logits(q, 0.7);
    std::vector<double> g(q);
    int label = 3;
    double loss = cross_entropy_loss(logits.data(), &label, 1, q, g.data());
    CHECK(loss == doctest::Approx(std::log(static_cast<double>(q))));
    // gradient sums to zero and singles out the label
    double total = 0.0;
    for (double v : g) total += v;
    CHECK(total == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g[label] < 0.0);
}

TEST_CASE("dense bias gradient matches the closed form") {
    // loss = mse(y, 0) with y = W x + b gives dL/db_j = 2 y_j / N
    Rng rng(6);
    Dense d;
    d.init(3, 4, rng);
    std::vector<double> x = random_vec(rng, 3);
    std::vector<double> y(4), zero(4, 0.0), dy(4);
    d.forward(x.data(), 1, y.data());
    mse_loss(y.data(), zero.data(), 4, dy.data());
    d.zero_grad();
    d.backward(dy.data(), nullptr);
    for (int j = 0; j < 4; ++j) CHECK(d.gb[j] == doctest::Approx(2.0 * y[j] / 4.0));
}

TEST_CASE("dense and relu gradients match finite differences") {
    Rng rng(7);
    Dense d1, d2;
    Relu relu;
    d1.init(3, 5, rng);
    d2.init(5, 2, rng);
    const int rows = 4;
    std::vector<double> x = random_vec(rng, rows * 3);
    std::vector<double> target = random_vec(rng, rows * 2);
    std::vector<double> h(rows * 5), y(rows * 2);

    auto forward = [&] {
        d1.forward(x.data(), rows, h.data());
        relu.forward(h.data(), h.size());
        d2.forward(h.data(), rows, y.data());
        return mse_loss(y.data(), target.data(), y.size(), nullptr);
    };
    forward();
    std::vector<double> dy(y.size()), dh(h.size());
    mse_loss(y.data(), target.data(), y.size(), dy.data());
    d1.zero_grad();
    d2.zero_grad();
    d2.backward(dy.data(), dh.data());
    relu.backward(dh.data());
    d1.backward(dh.data(), nullptr);

    ParamList params;
    d1.collect("d1", params);
    d2.collect("d2", params);
    auto report = grad_check(forward, params);
    CHECK(report.pass);
    CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("conv gradients match finite differences in both modes") {
    for (bool same : {true, false}) {
        Rng rng(same ? 8 : 9);
        Conv1d c1, c2;
        Relu relu;
        c1.init(2, 3, same, rng);
        c2.init(3, 2, same, rng);
        const int rows = 2, t = 6;
        const int t1 = c1.out_len(t), t2 = c2.out_len(t1);
        std::vector<double> x = random_vec(rng, rows * t * 2);
        std::vector<double> target = random_vec(rng, rows * t2 * 2);
        std::vector<double> h(rows * t1 * 3), y(rows * t2 * 2);

        auto forward = [&] {
            c1.forward(x.data(), rows, t, h.data());
            relu.forward(h.data(), h.size());
            c2.forward(h.data(), rows, t1, y.data());
            return mse_loss(y.data(), target.data(), y.size(), nullptr);
        };
        forward();
        std::vector<double> dy(y.size()), dh(h.size());
        mse_loss(y.data(), target.data(), y.size(), dy.data());
        c1.zero_grad();
        c2.zero_grad();
        c2.backward(dy.data(), dh.data());
        relu.backward(dh.data());
        c1.backward(dh.data(), nullptr);

        ParamList params;
        c1.collect("c1", params);
        c2.collect("c2", params);
        auto report = grad_check(forward, params);
        CHECK(report.pass);
        CHECK(report.max_rel_err < 1e-4);
    }
}

TEST_CASE("lstm gradients match finite differences") {
    Rng rng(10);
    Lstm l;
    l.init(3, 4, rng);
    const int rows = 2, t = 5;
    std::vector<double> x = random_vec(rng, rows * t * 3);
    std::vector<double> target = random_vec(rng, rows * t * 4);
    std::vector<double> y(rows * t * 4);

    auto forward = [&] {
        l.forward(x.data(), rows, t, y.data());
        return mse_loss(y.data(), target.data(), y.size(), nullptr);
    };
    forward();
    std::vector<double> dy(y.size());
    mse_loss(y.data(), target.data(), y.size(), dy.data());
    l.zero_grad();
    l.backward(dy.data(), nullptr);

    ParamList params;
    l.collect("lstm", params);
    auto report = grad_check(forward, params);
    CHECK(report.pass);
    CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("lstm input gradients match finite differences") {
    Rng rng(11);
    Lstm l;
    l.init(2, 3, rng);
    const int rows = 2, t = 4;
    std::vector<double> x = random_vec(rng, rows * t * 2);
    std::vector<double> target = random_vec(rng, rows * t * 3);
    std::vector<double> y(rows * t * 3);

    auto forward = [&] {
        l.forward(x.data(), rows, t, y.data());
        return mse_loss(y.data(), target.data(), y.size(), nullptr);
    };
    forward();
    std::vector<double> dy(y.size()), dx(x.size());
    mse_loss(y.data(), target.data(), y.size(), dy.data());
    l.zero_grad();
    l.backward(dy.data(), dx.data());

    // treat the input as a parameter for the finite-difference oracle
    ParamList params;
    params.push_back({"x", x.data(), dx.data(), {rows, t, 2}});
    auto report = grad_check(forward, params);
    CHECK(report.pass);
}

TEST_CASE("grad_check rejects a corrupted gradient") {
    Rng rng(12);
    Dense d;
    d.init(2, 2, rng);
    std::vector<double> x = random_vec(rng, 2);
    std::vector<double> target = random_vec(rng, 2);
    std::vector<double> y(2);
    auto forward = [&] {
        d.forward(x.data(), 1, y.data());
        return mse_loss(y.data(), target.data(), 2, nullptr);
    };
    forward();
    std::vector<double> dy(2);
    mse_loss(y.data(), target.data(), 2, dy.data());
    d.zero_grad();
    d.backward(dy.data(), nullptr);
    d.gw[0] += 0.5;
    ParamList params;
    d.collect("d", params);
    CHECK_FALSE(grad_check(forward, params).pass);
}

TEST_CASE("adam leaves parameters alone under zero gradient") {
    Rng rng(13);
    Dense d;
    d.init(2, 2, rng);
    ParamList params;
    d.collect("d", params);
    AdamState opt(1e-3);
    opt.attach(params);
    auto w0 = d.w;
    d.zero_grad();
    opt.update(params);
    CHECK(opt.step == 1);
    CHECK(d.w == w0);
}

TEST_CASE("adam first step moves by the learning rate") {
    Rng rng(14);
    Dense d;
    d.init(2, 2, rng);
    ParamList params;
    d.collect("d", params);
    AdamState opt(0.01);
    opt.attach(params);
    auto w0 = d.w;
    d.zero_grad();
    for (auto& g : d.gw) g = 3.7;  // constant gradient
    opt.update(params);
    for (size_t i = 0; i < d.w.size(); ++i)
        CHECK(std::abs(d.w[i] - w0[i]) == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("adam runs are deterministic") {
    auto run = [] {
        Rng rng(15);
        Dense d;
        d.init(3, 3, rng);
        ParamList params;
        d.collect("d", params);
        AdamState opt(1e-2);
        opt.attach(params);
        std::vector<double> x{0.3, -0.2, 0.9}, y(3), dy(3), zero(3, 0.0);
        for (int it = 0; it < 20; ++it) {
            d.forward(x.data(), 1, y.data());
            mse_loss(y.data(), zero.data(), 3, dy.data());
            d.zero_grad();
            d.backward(dy.data(), nullptr);
            opt.update(params);
        }
        return d.w;
    };
    CHECK(run() == run());
}

TEST_CASE("seeded initialization is reproducible") {
    Rng a(16), b(16);
    Dense da, db;
    da.init(4, 4, a);
    db.init(4, 4, b);
    CHECK(da.w == db.w);
    Lstm la, lb;
    la.init(4, 4, a);
    lb.init(4, 4, b);
    CHECK(la.wx == lb.wx);
    CHECK(la.wh == lb.wh);
    CHECK(la.b == lb.b);
}

TEST_CASE("checkpoints round-trip parameters by name") {
    Rng rng(17);
    Dense d;
    Lstm l;
    d.init(3, 2, rng);
    l.init(2, 2, rng);
    ParamList params;
    d.collect("head", params);
    l.collect("core", params);
    auto path = (std::filesystem::temp_directory_path() / "intmit_ck_test.bin").string();
    save_checkpoint(path, params);

    auto w_saved = d.w;
    auto wx_saved = l.wx;
    for (auto& v : d.w) v = 0.0;
    for (auto& v : l.wx) v = 0.0;
    load_checkpoint(path, params);
    std::filesystem::remove(path);
    CHECK(d.w == w_saved);
    CHECK(l.wx == wx_saved);
}

TEST_CASE("checkpoint load rejects mismatched networks") {
    Rng rng(18);
    Dense d;
    d.init(3, 2, rng);
    ParamList params;
    d.collect("head", params);
    auto path = (std::filesystem::temp_directory_path() / "intmit_ck_bad.bin").string();
    save_checkpoint(path, params);

    Dense other;
    other.init(4, 2, rng);  // different shape
    ParamList wrong;
    other.collect("head", wrong);
    CHECK_THROWS(load_checkpoint(path, wrong));
    std::filesystem::remove(path);
}
