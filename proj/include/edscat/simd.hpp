#pragma once
// Runtime-dispatched arithmetic kernels for the hot inner loops (dense
// complex elimination, oscillatory Fourier sums, reductions).
//
// The scalar table defines the reference semantics; vector backends must
// reproduce it to rounding and are checked against it in tests/test_simd.cpp.
// Backend selection happens once, at first use: AVX2+FMA when the CPU has it,
// scalar otherwise. EDSCAT_SIMD=scalar|avx2 in the environment forces a
// backend (an unsupported request falls back to scalar).

#include <complex>
#include <cstddef>

namespace edscat::simd {

using cxd = std::complex<double>;

// phase_sum resynchronizes its rotation recurrence from sin/cos every
// kPhaseBlock terms; both backends use the same block structure so the
// accumulated rounding stays equivalent.
inline constexpr std::size_t kPhaseBlock = 128;

struct Kernels {
  const char* name;
  // y[i] += a * x[i], i = 0..n-1
  void (*caxpy)(cxd* y, const cxd* x, cxd a, std::size_t n);
  // sum_i x[i] * y[i]
  cxd (*cdotu)(const cxd* x, const cxd* y, std::size_t n);
  // sum_i conj(x[i]) * y[i]
  cxd (*cdotc)(const cxd* x, const cxd* y, std::size_t n);
  // sum_j g[j] * exp(i*(theta0 + j*dtheta))
  cxd (*phase_sum)(const cxd* g, double theta0, double dtheta, std::size_t n);
  // max_i |x[i]|
  double (*max_abs)(const cxd* x, std::size_t n);
  // C -= A * B with C: m x n (row stride ldc), A: m x k (lda), B: k x n
  // (ldb); the dense-elimination trailing update
  void (*gemm_sub)(cxd* c, std::size_t ldc, const cxd* a, std::size_t lda,
                   const cxd* b, std::size_t ldb, std::size_t m,
                   std::size_t n, std::size_t k);
};

const Kernels& scalar_kernels();
const Kernels* avx2_kernels();  // nullptr when unsupported
const Kernels& active();

}  // namespace edscat::simd
