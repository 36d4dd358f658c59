// SPDX-License-Identifier: Apache-2.0
//
// Self-contained deterministic random number generation. Every random draw in
// the library goes through this generator so results are reproducible across
// compilers and standard libraries. Seeds for independent purposes (channel,
// noise, init, shuffle, ...) are derived from one master seed with
// derive_seed(), so toggling one randomized component never perturbs another.

#pragma once

#include <cstdint>
#include <string_view>

#include "intmit/common.hpp"

namespace intmit {

uint64_t splitmix64(uint64_t& state);

// FNV-1a over the tag bytes; used to give each purpose its own seed stream.
uint64_t fnv1a64(std::string_view s);

// Subseed for (master, purpose, index). Documented contract:
//   h0 = master XOR fnv1a64(purpose)
//   h1 = splitmix64(h0), h2 = splitmix64(h1 XOR index)  ->  h2
uint64_t derive_seed(uint64_t master, std::string_view purpose, uint64_t index);

// xoshiro256++ with splitmix64 seeding.
class Rng {
  public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();

    // uniform in [0, 1) with 53 random mantissa bits
    double uniform();
    // uniform in [lo, hi)
    double uniform(double lo, double hi);
    // uniform integer in [0, n)
    uint64_t uniform_int(uint64_t n);

    // standard normal via Box-Muller (second value cached)
    double gaussian();
    // circularly symmetric complex Gaussian with E|z|^2 = var
    cplx cgaussian(double var);

  private:
    uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace intmit
