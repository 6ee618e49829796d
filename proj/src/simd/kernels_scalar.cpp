// Reference kernels. Plain loops, no intrinsics; these define the semantics
// the vector backends are tested against.

#include <algorithm>
#include <cmath>

#include "edscat/simd.hpp"

namespace edscat::simd {
namespace {

void caxpy_scalar(cxd* y, const cxd* x, cxd a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cxd cdotu_scalar(const cxd* x, const cxd* y, std::size_t n) {
  cxd s{};
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

cxd cdotc_scalar(const cxd* x, const cxd* y, std::size_t n) {
  cxd s{};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

cxd phase_sum_scalar(const cxd* g, double theta0, double dtheta,
                     std::size_t n) {
  cxd acc{};
  const cxd step = std::polar(1.0, dtheta);
  for (std::size_t b = 0; b < n; b += kPhaseBlock) {
    cxd rot = std::polar(1.0, theta0 + static_cast<double>(b) * dtheta);
    const std::size_t end = std::min(n, b + kPhaseBlock);
    for (std::size_t j = b; j < end; ++j) {
      acc += g[j] * rot;
      rot *= step;
    }
  }
  return acc;
}

double max_abs_scalar(const cxd* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return std::sqrt(m);
}

void gemm_sub_scalar(cxd* c, std::size_t ldc, const cxd* a, std::size_t lda,
                     const cxd* b, std::size_t ldb, std::size_t m,
                     std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    cxd* crow = c + i * ldc;
    for (std::size_t p = 0; p < k; ++p) {
      const cxd aip = a[i * lda + p];
      const cxd* brow = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] -= aip * brow[j];
    }
  }
}

const Kernels kScalar = {"scalar",          caxpy_scalar, cdotu_scalar,
                         cdotc_scalar,      phase_sum_scalar,
                         max_abs_scalar,    gemm_sub_scalar};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace edscat::simd
