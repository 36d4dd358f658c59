// SPDX-License-Identifier: Apache-2.0
//
// Shared aliases and small helpers used across the library.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace intmit {

using cplx = std::complex<double>;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Thrown when an input violates an operation's shape/parameter contract.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw config_error(msg);
}

}  // namespace intmit
