// SPDX-License-Identifier: Apache-2.0
//
// Gray-mapped unit-energy QAM and max-log soft demodulation.

#pragma once

#include <vector>

#include "intmit/common.hpp"

namespace intmit::txrx {

// supported orders: 4 (QPSK), 16, 64
int qam_bits_per_symbol(int order);

// All `order` constellation points indexed by their bit label read MSB-first
// (b0 b1 ... b_{log2(order)-1}).
const std::vector<cplx>& qam_constellation(int order);

// bits -> symbols; bit count must divide evenly into symbols.
std::vector<cplx> qam_modulate(const std::vector<uint8_t>& bits, int order);

// Per-bit max-log LLRs under circular Gaussian noise of the given variance;
// positive means bit 0. Output length = symbols * bits_per_symbol.
std::vector<double> qam_soft_demod(const std::vector<cplx>& symbols, int order, double noise_var);

// Nearest-point hard decision per symbol, returned as the constellation index.
std::vector<int> qam_hard_indices(const std::vector<cplx>& symbols, int order);

// Bit label of one constellation index.
std::vector<uint8_t> qam_index_bits(int index, int order);

// Max-log bit LLRs from per-symbol class logits [s][order] (softmax scores),
// marginalizing over the constellation bit labels; positive means bit 0.
std::vector<double> logits_to_llrs(const std::vector<double>& logits, int n_symbols, int order);

}  // namespace intmit::txrx
