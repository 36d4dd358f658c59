// SPDX-License-Identifier: Apache-2.0

#include "intmit/nn/gemm.hpp"

#include <cstdlib>

#if INTMIT_HAVE_CBLAS
#if __has_include(<cblas.h>)
#include <cblas.h>
#else
#include <x86_64-linux-gnu/cblas.h>
#endif

// keep results bit-stable regardless of the host's thread defaults
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace {
struct BlasSingleThread {
    BlasSingleThread() {
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        if (openblas_set_num_threads) openblas_set_num_threads(1);
    }
};
const BlasSingleThread kBlasInit;
}  // namespace
#endif

namespace intmit::nn {

#if !INTMIT_HAVE_CBLAS
namespace {

void gemm_fallback(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a,
                   int lda, const double* b, int ldb, double beta, double* c, int ldc) {
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int p = 0; p < k; ++p) {
                double av = trans_a ? a[static_cast<long>(p) * lda + i]
                                    : a[static_cast<long>(i) * lda + p];
                double bv = trans_b ? b[static_cast<long>(j) * ldb + p]
                                    : b[static_cast<long>(p) * ldb + j];
                acc += av * bv;
            }
            double& out = c[static_cast<long>(i) * ldc + j];
            out = alpha * acc + (beta == 0.0 ? 0.0 : beta * out);
        }
    }
}

}  // namespace
#endif

void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
          const double* b, int ldb, double beta, double* c, int ldc) {
    if (m <= 0 || n <= 0) return;
#if INTMIT_HAVE_CBLAS
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
#else
    gemm_fallback(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc);
#endif
}

bool gemm_uses_blas() {
#if INTMIT_HAVE_CBLAS
    return true;
#else
    return false;
#endif
}

}  // namespace intmit::nn
