// AVX2+FMA kernels. complex<double> is interleaved [re, im], two complexes
// per 256-bit vector. Compiled with -mavx2 -mfma; nothing here runs unless
// the runtime check in avx2_kernels() passes.

#include "edscat/simd.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace edscat::simd {
namespace {

inline __m256d swap_ri(__m256d v) { return _mm256_shuffle_pd(v, v, 0x5); }
inline __m256d dup_re(__m256d v) { return _mm256_shuffle_pd(v, v, 0x0); }
inline __m256d dup_im(__m256d v) { return _mm256_shuffle_pd(v, v, 0xF); }

// (a.re + i a.im) * (b.re + i b.im) for two complex pairs at once
inline __m256d cmul(__m256d a, __m256d b) {
  return _mm256_fmaddsub_pd(a, dup_re(b),
                            _mm256_mul_pd(swap_ri(a), dup_im(b)));
}

inline cxd reduce_c(__m256d acc) {
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  return {buf[0] + buf[2], buf[1] + buf[3]};
}

void caxpy_avx2(cxd* y, const cxd* x, cxd a, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double* xp = reinterpret_cast<const double*>(x + i);
    double* yp = reinterpret_cast<double*>(y + i);
    __m256d xv = _mm256_loadu_pd(xp);
    __m256d t =
        _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(swap_ri(xv), ai));
    _mm256_storeu_pd(yp, _mm256_add_pd(_mm256_loadu_pd(yp), t));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

cxd cdotu_avx2(const cxd* x, const cxd* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m256d yv = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    acc = _mm256_add_pd(acc, cmul(xv, yv));
  }
  cxd s = reduce_c(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

cxd cdotc_avx2(const cxd* x, const cxd* y, std::size_t n) {
  // fmsubadd gives (xr*yr + xi*yi, xi*yr - xr*yi): the conjugate of what we
  // want, so conjugate once after reduction.
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m256d yv = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    acc = _mm256_add_pd(
        acc, _mm256_fmsubadd_pd(xv, dup_re(yv),
                                _mm256_mul_pd(swap_ri(xv), dup_im(yv))));
  }
  cxd s = std::conj(reduce_c(acc));
  for (; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

cxd phase_sum_avx2(const cxd* g, double theta0, double dtheta,
                   std::size_t n) {
  const __m256d sr = _mm256_set1_pd(std::cos(2.0 * dtheta));
  const __m256d si = _mm256_set1_pd(std::sin(2.0 * dtheta));
  __m256d acc = _mm256_setzero_pd();
  cxd tail{};
  for (std::size_t b = 0; b < n; b += kPhaseBlock) {
    const std::size_t end = std::min(n, b + kPhaseBlock);
    const double thb = theta0 + static_cast<double>(b) * dtheta;
    __m256d rv = _mm256_setr_pd(std::cos(thb), std::sin(thb),
                                std::cos(thb + dtheta),
                                std::sin(thb + dtheta));
    std::size_t j = b;
    for (; j + 2 <= end; j += 2) {
      __m256d gv = _mm256_loadu_pd(reinterpret_cast<const double*>(g + j));
      acc = _mm256_add_pd(acc, cmul(gv, rv));
      rv = _mm256_fmaddsub_pd(rv, sr, _mm256_mul_pd(swap_ri(rv), si));
    }
    if (j < end) {
      // odd remainder (only possible in the final block)
      cxd rot = std::polar(1.0, theta0 + static_cast<double>(j) * dtheta);
      for (; j < end; ++j) {
        tail += g[j] * rot;
        rot *= std::polar(1.0, dtheta);
      }
    }
  }
  return reduce_c(acc) + tail;
}

double max_abs_avx2(const cxd* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m256d sq = _mm256_mul_pd(xv, xv);
    m = _mm256_max_pd(m, _mm256_add_pd(sq, swap_ri(sq)));
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, m);
  double best = std::max(buf[0], buf[2]);
  for (; i < n; ++i)
    best = std::max(best,
                    x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return std::sqrt(best);
}

// rank-k trailing update, register-tiled 2 rows x 8 columns; B column tiles
// stay in L1 across the row sweep
void gemm_sub_avx2(cxd* c, std::size_t ldc, const cxd* a, std::size_t lda,
                   const cxd* b, std::size_t ldb, std::size_t m,
                   std::size_t n, std::size_t k) {
  constexpr std::size_t kJ = 8;
  std::size_t jj = 0;
  for (; jj + kJ <= n; jj += kJ) {
    std::size_t i = 0;
    for (; i + 2 <= m; i += 2) {
      double* c0 = reinterpret_cast<double*>(c + i * ldc + jj);
      double* c1 = reinterpret_cast<double*>(c + (i + 1) * ldc + jj);
      __m256d a00 = _mm256_loadu_pd(c0), a01 = _mm256_loadu_pd(c0 + 4),
              a02 = _mm256_loadu_pd(c0 + 8), a03 = _mm256_loadu_pd(c0 + 12);
      __m256d a10 = _mm256_loadu_pd(c1), a11 = _mm256_loadu_pd(c1 + 4),
              a12 = _mm256_loadu_pd(c1 + 8), a13 = _mm256_loadu_pd(c1 + 12);
      for (std::size_t p = 0; p < k; ++p) {
        const double* br = reinterpret_cast<const double*>(b + p * ldb + jj);
        const __m256d b0 = _mm256_loadu_pd(br);
        const __m256d b1 = _mm256_loadu_pd(br + 4);
        const __m256d b2 = _mm256_loadu_pd(br + 8);
        const __m256d b3 = _mm256_loadu_pd(br + 12);
        const cxd av0 = a[i * lda + p];
        __m256d re = _mm256_set1_pd(av0.real());
        __m256d im = _mm256_set1_pd(av0.imag());
        a00 = _mm256_sub_pd(
            a00, _mm256_fmaddsub_pd(b0, re, _mm256_mul_pd(swap_ri(b0), im)));
        a01 = _mm256_sub_pd(
            a01, _mm256_fmaddsub_pd(b1, re, _mm256_mul_pd(swap_ri(b1), im)));
        a02 = _mm256_sub_pd(
            a02, _mm256_fmaddsub_pd(b2, re, _mm256_mul_pd(swap_ri(b2), im)));
        a03 = _mm256_sub_pd(
            a03, _mm256_fmaddsub_pd(b3, re, _mm256_mul_pd(swap_ri(b3), im)));
        const cxd av1 = a[(i + 1) * lda + p];
        re = _mm256_set1_pd(av1.real());
        im = _mm256_set1_pd(av1.imag());
        a10 = _mm256_sub_pd(
            a10, _mm256_fmaddsub_pd(b0, re, _mm256_mul_pd(swap_ri(b0), im)));
        a11 = _mm256_sub_pd(
            a11, _mm256_fmaddsub_pd(b1, re, _mm256_mul_pd(swap_ri(b1), im)));
        a12 = _mm256_sub_pd(
            a12, _mm256_fmaddsub_pd(b2, re, _mm256_mul_pd(swap_ri(b2), im)));
        a13 = _mm256_sub_pd(
            a13, _mm256_fmaddsub_pd(b3, re, _mm256_mul_pd(swap_ri(b3), im)));
      }
      _mm256_storeu_pd(c0, a00);
      _mm256_storeu_pd(c0 + 4, a01);
      _mm256_storeu_pd(c0 + 8, a02);
      _mm256_storeu_pd(c0 + 12, a03);
      _mm256_storeu_pd(c1, a10);
      _mm256_storeu_pd(c1 + 4, a11);
      _mm256_storeu_pd(c1 + 8, a12);
      _mm256_storeu_pd(c1 + 12, a13);
    }
    if (i < m) {
      double* c0 = reinterpret_cast<double*>(c + i * ldc + jj);
      __m256d a00 = _mm256_loadu_pd(c0), a01 = _mm256_loadu_pd(c0 + 4),
              a02 = _mm256_loadu_pd(c0 + 8), a03 = _mm256_loadu_pd(c0 + 12);
      for (std::size_t p = 0; p < k; ++p) {
        const double* br = reinterpret_cast<const double*>(b + p * ldb + jj);
        const cxd av = a[i * lda + p];
        const __m256d re = _mm256_set1_pd(av.real());
        const __m256d im = _mm256_set1_pd(av.imag());
        const __m256d b0 = _mm256_loadu_pd(br);
        const __m256d b1 = _mm256_loadu_pd(br + 4);
        const __m256d b2 = _mm256_loadu_pd(br + 8);
        const __m256d b3 = _mm256_loadu_pd(br + 12);
        a00 = _mm256_sub_pd(
            a00, _mm256_fmaddsub_pd(b0, re, _mm256_mul_pd(swap_ri(b0), im)));
        a01 = _mm256_sub_pd(
            a01, _mm256_fmaddsub_pd(b1, re, _mm256_mul_pd(swap_ri(b1), im)));
        a02 = _mm256_sub_pd(
            a02, _mm256_fmaddsub_pd(b2, re, _mm256_mul_pd(swap_ri(b2), im)));
        a03 = _mm256_sub_pd(
            a03, _mm256_fmaddsub_pd(b3, re, _mm256_mul_pd(swap_ri(b3), im)));
      }
      _mm256_storeu_pd(c0, a00);
      _mm256_storeu_pd(c0 + 4, a01);
      _mm256_storeu_pd(c0 + 8, a02);
      _mm256_storeu_pd(c0 + 12, a03);
    }
  }
  if (jj < n) {
    for (std::size_t i = 0; i < m; ++i) {
      cxd* crow = c + i * ldc;
      for (std::size_t p = 0; p < k; ++p) {
        const cxd aip = a[i * lda + p];
        const cxd* brow = b + p * ldb;
        for (std::size_t j = jj; j < n; ++j) crow[j] -= aip * brow[j];
      }
    }
  }
}

const Kernels kAvx2 = {"avx2",        caxpy_avx2,     cdotu_avx2,
                       cdotc_avx2,    phase_sum_avx2, max_abs_avx2,
                       gemm_sub_avx2};

}  // namespace

const Kernels* avx2_kernels() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &kAvx2;
  return nullptr;
}

}  // namespace edscat::simd

#else

namespace edscat::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace edscat::simd

#endif
