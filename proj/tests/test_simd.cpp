// Kernel correctness against naive per-term evaluation (long double
// accumulators, std::polar per term) and scalar/AVX2 equivalence.

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "edscat/simd.hpp"
#include "test_util.hpp"

using namespace edscat;
using edscat::test::Rng;

namespace {

const std::vector<std::size_t> kSizes = {0, 1, 2, 3, 7, 16, 127, 128,
                                         129, 255, 1000};

std::vector<cxd> random_vec(Rng& rng, std::size_t n) {
  std::vector<cxd> v(n);
  for (auto& z : v) z = rng.c();
  return v;
}

cxd naive_dotu(const std::vector<cxd>& x, const std::vector<cxd>& y) {
  std::complex<long double> s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += std::complex<long double>(x[i]) * std::complex<long double>(y[i]);
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

cxd naive_phase_sum(const std::vector<cxd>& g, double th0, double dth) {
  std::complex<long double> s = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double a = th0 + static_cast<double>(j) * dth;
    s += std::complex<long double>(g[j]) *
         std::complex<long double>(std::cos(a), std::sin(a));
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

}  // namespace

TEST_CASE("scalar kernels match naive evaluation") {
  const auto& k = simd::scalar_kernels();
  Rng rng(7);
  for (std::size_t n : kSizes) {
    auto x = random_vec(rng, n), y = random_vec(rng, n);
    const cxd a = rng.c();

    auto want = y;
    for (std::size_t i = 0; i < n; ++i) want[i] += a * x[i];
    auto got = y;
    k.caxpy(got.data(), x.data(), a, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(got[i] - want[i]) < 1e-14);

    CHECK(std::abs(k.cdotu(x.data(), y.data(), n) - naive_dotu(x, y)) <
          1e-12 * (n + 1.0));
    auto xc = x;
    for (auto& z : xc) z = std::conj(z);
    CHECK(std::abs(k.cdotc(x.data(), y.data(), n) - naive_dotu(xc, y)) <
          1e-12 * (n + 1.0));

    const double th0 = 0.37, dth = -0.81;
    CHECK(std::abs(k.phase_sum(x.data(), th0, dth, n) -
                   naive_phase_sum(x, th0, dth)) < 1e-12 * (n + 1.0));

    double m = 0;
    for (auto& z : x) m = std::max(m, std::abs(z));
    CHECK(k.max_abs(x.data(), n) == doctest::Approx(m).epsilon(1e-14));
  }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const auto* avx = simd::avx2_kernels();
  if (!avx) return;  // nothing to check on this machine
  const auto& ref = simd::scalar_kernels();
  Rng rng(11);
  for (std::size_t n : kSizes) {
    auto x = random_vec(rng, n), y = random_vec(rng, n);
    const cxd a = rng.c();

    auto y1 = y, y2 = y;
    ref.caxpy(y1.data(), x.data(), a, n);
    avx->caxpy(y2.data(), x.data(), a, n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(y1[i] - y2[i]) < 1e-14);

    CHECK(std::abs(ref.cdotu(x.data(), y.data(), n) -
                   avx->cdotu(x.data(), y.data(), n)) < 1e-12 * (n + 1.0));
    CHECK(std::abs(ref.cdotc(x.data(), y.data(), n) -
                   avx->cdotc(x.data(), y.data(), n)) < 1e-12 * (n + 1.0));
    CHECK(std::abs(ref.phase_sum(x.data(), 1.1, 0.013, n) -
                   avx->phase_sum(x.data(), 1.1, 0.013, n)) <
          1e-12 * (n + 1.0));
    CHECK(ref.max_abs(x.data(), n) ==
          doctest::Approx(avx->max_abs(x.data(), n)).epsilon(1e-14));
  }
}

TEST_CASE("gemm_sub: scalar matches naive triple loop, avx2 matches scalar") {
  Rng rng(23);
  const auto& ref = simd::scalar_kernels();
  const auto* avx = simd::avx2_kernels();
  for (auto [m, n, k] : {std::array<std::size_t, 3>{1, 1, 1},
                         {2, 8, 4},
                         {3, 7, 5},
                         {5, 17, 3},
                         {7, 16, 32},
                         {33, 40, 32},
                         {20, 9, 13}}) {
    const std::size_t ldc = n + 3, lda = k + 1, ldb = n + 2;
    std::vector<cxd> c0(m * ldc), a(m * lda), b(k * ldb);
    for (auto& z : c0) z = rng.c();
    for (auto& z : a) z = rng.c();
    for (auto& z : b) z = rng.c();

    auto want = c0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::complex<long double> acc = want[i * ldc + j];
        for (std::size_t p = 0; p < k; ++p)
          acc -= std::complex<long double>(a[i * lda + p]) *
                 std::complex<long double>(b[p * ldb + j]);
        want[i * ldc + j] = {static_cast<double>(acc.real()),
                             static_cast<double>(acc.imag())};
      }

    auto got = c0;
    ref.gemm_sub(got.data(), ldc, a.data(), lda, b.data(), ldb, m, n, k);
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(std::abs(got[i] - want[i]) < 1e-12 * (k + 1.0));

    if (avx) {
      auto got2 = c0;
      avx->gemm_sub(got2.data(), ldc, a.data(), lda, b.data(), ldb, m, n, k);
      for (std::size_t i = 0; i < got2.size(); ++i)
        CHECK(std::abs(got2[i] - got[i]) < 1e-12 * (k + 1.0));
    }
  }
}

TEST_CASE("dispatch picks a working table") {
  const auto& k = simd::active();
  CHECK(k.name != nullptr);
  std::vector<cxd> x = {cxd(1, 2), cxd(-3, 0.5)};
  CHECK(std::abs(k.cdotu(x.data(), x.data(), 2) -
                 (x[0] * x[0] + x[1] * x[1])) < 1e-14);
}
