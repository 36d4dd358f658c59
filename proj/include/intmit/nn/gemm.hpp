// SPDX-License-Identifier: Apache-2.0
//
// Row-major GEMM used by every layer. Delegates to CBLAS when the build
// found one, with a portable fallback.

#pragma once

namespace intmit::nn {

// C[m][n] = alpha * op(A) * op(B) + beta * C, all row-major with explicit
// leading dimensions. op transposes when the flag is set; lda/ldb describe
// the physical rows of the untransposed storage.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
          const double* b, int ldb, double beta, double* c, int ldc);

// true when the CBLAS path is compiled in
bool gemm_uses_blas();

}  // namespace intmit::nn
