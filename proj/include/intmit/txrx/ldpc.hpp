// SPDX-License-Identifier: Apache-2.0
//
// Regular (3,6) rate-1/2 LDPC code: seeded progressive-edge-growth style
// construction, systematic encoding, scaled min-sum decoding.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intmit/common.hpp"

namespace intmit::txrx {

struct LdpcCode {
    int n_code = 0;
    int k_info = 0;
    uint64_t seed = 0;
    std::vector<std::vector<int>> check_cols;  // per check: sorted variable indices
    std::vector<std::vector<int>> var_checks;  // per variable: check indices
    std::vector<std::vector<uint8_t>> gen;     // generator [k_info][n_code]
    std::vector<int> info_pos;                 // systematic bit positions in the codeword
};

// Builds a (3,6)-regular code with n_code/2 checks. Edge placement greedily
// balances check degrees and avoids 4-cycles where the graph still allows
// it; the construction retries derived seeds until the parity matrix has
// full rank so exactly n_code/2 info bits are supported.
LdpcCode build_ldpc(int n_code, uint64_t seed);

// Systematic encode; output satisfies every parity check.
std::vector<uint8_t> ldpc_encode(const std::vector<uint8_t>& info_bits, const LdpcCode& code);

// True when parity_check * c = 0 over GF(2).
bool ldpc_parity_ok(const std::vector<uint8_t>& codeword, const LdpcCode& code);

std::vector<uint8_t> extract_info(const std::vector<uint8_t>& codeword, const LdpcCode& code);

struct DecodeResult {
    std::vector<uint8_t> codeword;
    std::vector<uint8_t> info;
    bool converged = false;
    int iters = 0;
};

// Scaled min-sum belief propagation (factor 0.75). LLR convention: positive
// means bit 0. Stops when parity holds or after max_iter sweeps; converged
// additionally requires every posterior to carry a sign, so an all-zero
// input reports failure instead of the trivially parity-consistent all-zero
// word.
DecodeResult bp_decode(const std::vector<double>& llrs, const LdpcCode& code, int max_iter = 25);

// Text file: "n_code k_info seed" header line, then one line of column
// indices per check row. The generator is rebuilt on load.
void save_code(const std::string& path, const LdpcCode& code);
LdpcCode load_code(const std::string& path);

// Seeded uniform random permutation of [0, n) with its inverse application.
struct Interleaver {
    std::vector<int> perm;

    static Interleaver make(int n, uint64_t seed);
    template <typename T>
    std::vector<T> apply(const std::vector<T>& in) const {
        require(in.size() == perm.size(), "interleaver length mismatch");
        std::vector<T> out(in.size());
        for (size_t i = 0; i < perm.size(); ++i) out[perm[i]] = in[i];
        return out;
    }
    template <typename T>
    std::vector<T> invert(const std::vector<T>& in) const {
        require(in.size() == perm.size(), "interleaver length mismatch");
        std::vector<T> out(in.size());
        for (size_t i = 0; i < perm.size(); ++i) out[i] = in[perm[i]];
        return out;
    }
};

// Fraction of blocks with a decoder failure or any mismatched info bit.
struct BlockResult {
    std::vector<uint8_t> decoded;
    std::vector<uint8_t> truth;
    bool converged = true;
};
double bler(const std::vector<BlockResult>& frames);

}  // namespace intmit::txrx
