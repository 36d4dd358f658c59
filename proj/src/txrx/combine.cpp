// SPDX-License-Identifier: Apache-2.0

#include "intmit/txrx/combine.hpp"

#include <Eigen/Dense>

namespace intmit::txrx {

cplx mrc_combine(const std::vector<cplx>& y, const std::vector<cplx>& h) {
    require(y.size() == h.size() && !h.empty(), "combiner shape mismatch");
    cplx num = 0.0;
    double den = 0.0;
    for (size_t i = 0; i < h.size(); ++i) {
        num += std::conj(h[i]) * y[i];
        den += std::norm(h[i]);
    }
    require(den > 0.0, "mrc needs a nonzero channel");
    return num / den;
}

cplx irc_combine(const std::vector<cplx>& y, const std::vector<cplx>& h,
                 const std::vector<cplx>& r_uu) {
    const int m = static_cast<int>(h.size());
    require(y.size() == h.size() && !h.empty(), "combiner shape mismatch");
    require(r_uu.size() == static_cast<size_t>(m) * m, "covariance shape mismatch");

    Eigen::MatrixXcd r(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r(i, j) = r_uu[static_cast<size_t>(i) * m + j];
    Eigen::VectorXcd hv(m), yv(m);
    for (int i = 0; i < m; ++i) {
        hv(i) = h[i];
        yv(i) = y[i];
    }

    const double base_load = 1e-6 * r.real().trace() / m;
    Eigen::VectorXcd w;
    double load = 0.0;
    for (int tries = 0; tries < 8; ++tries) {
        Eigen::LLT<Eigen::MatrixXcd> llt(r + load * Eigen::MatrixXcd::Identity(m, m));
        if (llt.info() == Eigen::Success) {
            w = llt.solve(hv);
            const cplx den = w.dot(hv);  // w^H h
            if (std::abs(den) > 0.0) return w.dot(yv) / den;
        }
        load = load == 0.0 ? std::max(base_load, 1e-300) : load * 1e3;
    }
    // covariance carried no usable structure; degrade to MRC
    return mrc_combine(y, h);
}

double irc_post_gain(const std::vector<cplx>& h, const std::vector<cplx>& r_uu) {
    const int m = static_cast<int>(h.size());
    require(!h.empty(), "combiner shape mismatch");
    require(r_uu.size() == static_cast<size_t>(m) * m, "covariance shape mismatch");

    Eigen::MatrixXcd r(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r(i, j) = r_uu[static_cast<size_t>(i) * m + j];
    Eigen::VectorXcd hv(m);
    for (int i = 0; i < m; ++i) hv(i) = h[i];

    const double base_load = 1e-6 * r.real().trace() / m;
    double load = 0.0;
    for (int tries = 0; tries < 8; ++tries) {
        Eigen::LLT<Eigen::MatrixXcd> llt(r + load * Eigen::MatrixXcd::Identity(m, m));
        if (llt.info() == Eigen::Success) {
            const Eigen::VectorXcd w = llt.solve(hv);
            const double gain = w.dot(hv).real();  // h^H r^{-1} h, real for Hermitian r
            if (gain > 0.0) return gain;
        }
        load = load == 0.0 ? std::max(base_load, 1e-300) : load * 1e3;
    }
    const double avg = std::max(r.real().trace() / m, 1e-300);
    return hv.squaredNorm() / avg;
}

std::vector<cplx> sample_covariance(const std::vector<std::vector<cplx>>& residuals, int m) {
    require(!residuals.empty(), "covariance needs at least one residual");
    std::vector<cplx> r(static_cast<size_t>(m) * m, cplx(0.0));
    for (const auto& u : residuals) {
        require(static_cast<int>(u.size()) == m, "residual length mismatch");
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                r[static_cast<size_t>(i) * m + j] += u[i] * std::conj(u[j]);
    }
    const double inv = 1.0 / static_cast<double>(residuals.size());
    for (auto& v : r) v *= inv;
    return r;
}

}  // namespace intmit::txrx
