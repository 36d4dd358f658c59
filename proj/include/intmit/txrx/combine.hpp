// SPDX-License-Identifier: Apache-2.0
//
// Classical receive combining across antennas.

#pragma once

#include <vector>

#include "intmit/common.hpp"

namespace intmit::txrx {

// Maximum-ratio combining: (h^H y) / (h^H h).
cplx mrc_combine(const std::vector<cplx>& y, const std::vector<cplx>& h);

// Interference-rejection combining with w = r_uu^{-1} h, output
// (w^H y) / (w^H h). r_uu is the interference-plus-noise covariance,
// row-major [m][m], Hermitian. A non-positive-definite estimate falls back
// to diagonal loading with 1e-6 * trace / m (repeated with growing loads
// until the factorization succeeds).
cplx irc_combine(const std::vector<cplx>& y, const std::vector<cplx>& h,
                 const std::vector<cplx>& r_uu);

// Post-combining interference-plus-noise gain Re(h^H r_uu^{-1} h) of the IRC
// output above; the unit-signal error variance after combining is its
// reciprocal. Falls back to ||h||^2 / (trace(r_uu) / m), the white
// equivalent, when the factorization never succeeds.
double irc_post_gain(const std::vector<cplx>& h, const std::vector<cplx>& r_uu);

// Sample covariance (1/n) sum u u^H of residual vectors u[i] (each length m),
// row-major output [m][m].
std::vector<cplx> sample_covariance(const std::vector<std::vector<cplx>>& residuals, int m);

}  // namespace intmit::txrx
