// SPDX-License-Identifier: Apache-2.0
//
// One coded transmission: bits through codeword to constellation symbols.

#pragma once

#include <cstdint>
#include <vector>

#include "intmit/common.hpp"

namespace intmit::txrx {

struct CodedFrame {
    std::vector<uint8_t> info_bits;  // [k_info]
    std::vector<uint8_t> codeword;   // [n_code]
    std::vector<cplx> c_t;           // [S] transmitted constellation sequence
    std::vector<cplx> c_i;           // [n_rx][S] received sequence per antenna
    std::vector<int> tx_indices;     // [S] constellation index of each c_t entry
    int qam_order = 4;

    int n_symbols() const { return static_cast<int>(c_t.size()); }
};

}  // namespace intmit::txrx
