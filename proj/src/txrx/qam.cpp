// SPDX-License-Identifier: Apache-2.0

#include "intmit/txrx/qam.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>

namespace intmit::txrx {

namespace {

int log2_order(int order) {
    switch (order) {
        case 4: return 2;
        case 16: return 4;
        case 64: return 6;
        default: break;
    }
    throw config_error("unsupported QAM order");
}

// Gray-coded pulse amplitude per axis, unit-average-energy normalization
// applied at the constellation level.
double pam_level(const std::vector<uint8_t>& bits) {
    // bits MSB-first along one axis: 1 bit -> {+1,-1}; 2 -> {+1,+3,-1,-3}
    // via (1-2b0)(2-(1-2b1)); 3 bits analogous with span 4.
    const double s0 = 1.0 - 2.0 * bits[0];
    if (bits.size() == 1) return s0;
    const double s1 = 1.0 - 2.0 * bits[1];
    if (bits.size() == 2) return s0 * (2.0 - s1);
    const double s2 = 1.0 - 2.0 * bits[2];
    return s0 * (4.0 - s1 * (2.0 - s2));
}

std::vector<cplx> build_constellation(int order) {
    const int bps = log2_order(order);
    const int half = bps / 2;
    const double scale = order == 4 ? std::sqrt(2.0) : (order == 16 ? std::sqrt(10.0) : std::sqrt(42.0));
    std::vector<cplx> points(order);
    for (int idx = 0; idx < order; ++idx) {
        std::vector<uint8_t> ib(half), qb(half);
        // interleaved labels: even bit positions drive I, odd drive Q
        for (int j = 0; j < half; ++j) {
            ib[j] = (idx >> (bps - 1 - 2 * j)) & 1;
            qb[j] = (idx >> (bps - 1 - (2 * j + 1))) & 1;
        }
        points[idx] = cplx(pam_level(ib) / scale, pam_level(qb) / scale);
    }
    return points;
}

}  // namespace

int qam_bits_per_symbol(int order) { return log2_order(order); }

const std::vector<cplx>& qam_constellation(int order) {
    static const std::map<int, std::vector<cplx>> tables = {
        {4, build_constellation(4)}, {16, build_constellation(16)}, {64, build_constellation(64)}};
    auto it = tables.find(order);
    if (it == tables.end()) throw config_error("unsupported QAM order");
    return it->second;
}

std::vector<cplx> qam_modulate(const std::vector<uint8_t>& bits, int order) {
    const int bps = log2_order(order);
    require(bits.size() % bps == 0, "bit count must divide into whole symbols");
    const auto& points = qam_constellation(order);
    std::vector<cplx> symbols(bits.size() / bps);
    for (size_t s = 0; s < symbols.size(); ++s) {
        int idx = 0;
        for (int j = 0; j < bps; ++j) idx = (idx << 1) | bits[s * bps + j];
        symbols[s] = points[idx];
    }
    return symbols;
}

std::vector<double> qam_soft_demod(const std::vector<cplx>& symbols, int order, double noise_var) {
    const int bps = log2_order(order);
    require(noise_var > 0.0, "noise variance must be positive");
    const auto& points = qam_constellation(order);
    std::vector<double> llrs(symbols.size() * bps);
    for (size_t s = 0; s < symbols.size(); ++s) {
        for (int j = 0; j < bps; ++j) {
            double best0 = std::numeric_limits<double>::max();
            double best1 = best0;
            for (int idx = 0; idx < order; ++idx) {
                const double d = std::norm(symbols[s] - points[idx]);
                if ((idx >> (bps - 1 - j)) & 1) {
                    best1 = std::min(best1, d);
                } else {
                    best0 = std::min(best0, d);
                }
            }
            llrs[s * bps + j] = (best1 - best0) / noise_var;
        }
    }
    return llrs;
}

std::vector<int> qam_hard_indices(const std::vector<cplx>& symbols, int order) {
    const auto& points = qam_constellation(order);
    std::vector<int> out(symbols.size());
    for (size_t s = 0; s < symbols.size(); ++s) {
        double best = std::numeric_limits<double>::max();
        for (int idx = 0; idx < order; ++idx) {
            const double d = std::norm(symbols[s] - points[idx]);
            if (d < best) {
                best = d;
                out[s] = idx;
            }
        }
    }
    return out;
}

std::vector<uint8_t> qam_index_bits(int index, int order) {
    const int bps = log2_order(order);
    require(index >= 0 && index < order, "constellation index out of range");
    std::vector<uint8_t> bits(bps);
    for (int j = 0; j < bps; ++j) bits[j] = (index >> (bps - 1 - j)) & 1;
    return bits;
}

std::vector<double> logits_to_llrs(const std::vector<double>& logits, int n_symbols, int order) {
    const int bps = log2_order(order);
    require(logits.size() == static_cast<size_t>(n_symbols) * order, "logit shape mismatch");
    std::vector<double> llrs(static_cast<size_t>(n_symbols) * bps);
    for (int s = 0; s < n_symbols; ++s) {
        const double* row = logits.data() + static_cast<size_t>(s) * order;
        for (int j = 0; j < bps; ++j) {
            double best0 = -std::numeric_limits<double>::max();
            double best1 = best0;
            for (int idx = 0; idx < order; ++idx) {
                if ((idx >> (bps - 1 - j)) & 1) {
                    best1 = std::max(best1, row[idx]);
                } else {
                    best0 = std::max(best0, row[idx]);
                }
            }
            llrs[static_cast<size_t>(s) * bps + j] = best0 - best1;
        }
    }
    return llrs;
}

}  // namespace intmit::txrx
