#include "edscat/marchenko.hpp"

#include <algorithm>
#include <cmath>

#include "edscat/simd.hpp"

namespace edscat {

MarchenkoKernel::MarchenkoKernel(CplxSampled f, double support_rel_tol)
    : f_(std::move(f)) {
  const int n = f_.grid.n;
  double peak = 0;
  for (int j = 0; j < n; ++j) peak = std::max(peak, std::abs(f_[j]));
  const double cut = support_rel_tol * peak;
  last_ = -1;
  for (int j = n - 1; j >= 0; --j) {
    if (std::abs(f_[j]) > cut) {
      last_ = j;
      break;
    }
  }
  const double h = f_.grid.h();
  for (int j = last_ + 1; j + 1 < n; ++j)
    discarded_tail_ += 0.5 * h * (std::abs(f_[j]) + std::abs(f_[j + 1]));
  support_end_ = last_ < 0 ? 0.0
                           : std::min(f_.grid.x_max, f_.grid.node(last_) + h);
}

cxd MarchenkoKernel::F_at(double s) const {
  if (last_ < 0 || s < 0 || s >= support_end_) return cxd(0, 0);
  const double h = f_.grid.h();
  const int j = std::min(static_cast<int>(s / h), last_);
  const double t = s / h - j;
  const cxd right = j + 1 <= last_ ? f_[j + 1] : cxd(0, 0);
  return f_[j] * (1.0 - t) + right * t;
}

MarchenkoKernel build_omega(const CplxSampled& F, double support_rel_tol) {
  if (!all_finite(F.values))
    throw DomainError("build_omega: non-finite kernel samples");
  return MarchenkoKernel(F, support_rel_tol);
}

MarchenkoSolution solve_marchenko(const MarchenkoKernel& kern, double x,
                                  const NystromGrid& grid) {
  if (x < 0) throw DomainError("solve_marchenko: x must be nonnegative");
  MarchenkoSolution out;
  out.x = x;
  out.zgrid = UniformGrid(grid.zeta_max, grid.n);
  const int n = grid.n;
  const double h = grid.h();
  out.g11.assign(n, cxd(0, 0));
  out.g12.assign(n, cxd(0, 0));
  out.g21.assign(n, cxd(0, 0));
  out.g22.assign(n, cxd(0, 0));

  // Active window: Omega(x + zeta + t) vanishes once x + zeta > support_end,
  // so those rows reduce to Gamma = -Omega = 0 exactly.
  int na = 0;
  while (na < n && x + na * h < kern.support_end()) ++na;
  out.active = na;
  if (na == 0) return out;

  // trapezoid weights of the full grid, restricted to the window
  std::vector<double> w(na);
  for (int t = 0; t < na; ++t)
    w[t] = (t == 0 || t == n - 1) ? 0.5 * h : h;

  std::vector<cxd> fq(2 * na - 1);
  for (int q = 0; q < 2 * na - 1; ++q) fq[q] = kern.F_at(x + q * h);

  // Per row pair of Gamma the collocated system is
  //   a + B b = ra,   C a + b = rb,
  // with B[j][t] = w_t F(x + (j+t)h), C = elementwise conj(B). It is solved
  // through the Schur complement (I - C B) b = rb - C ra, a = ra - B b; the
  // residual below re-substitutes into the full 2*na equations.
  const std::size_t nn = static_cast<std::size_t>(na);
  std::vector<cxd> B(nn * nn), C(nn * nn);
  for (int j = 0; j < na; ++j) {
    cxd* browj = &B[static_cast<std::size_t>(j) * na];
    cxd* crowj = &C[static_cast<std::size_t>(j) * na];
    for (int t = 0; t < na; ++t) {
      browj[t] = w[t] * fq[j + t];
      crowj[t] = std::conj(browj[t]);
    }
  }
  std::vector<cxd> schur(nn * nn, cxd(0, 0));
  for (int j = 0; j < na; ++j) schur[static_cast<std::size_t>(j) * na + j] = 1.0;
  const auto& kn = simd::active();
  constexpr int kChunk = 32;
  for (int k0 = 0; k0 < na; k0 += kChunk) {
    const int kb = std::min(kChunk, na - k0);
    kn.gemm_sub(schur.data(), nn, C.data() + k0, nn,
                B.data() + static_cast<std::size_t>(k0) * na, nn, nn, nn,
                kb);
  }
  LuFactor lu(std::move(schur), na);

  auto matvec = [&](const std::vector<cxd>& mat, const cxd* v) {
    std::vector<cxd> out2(nn);
    for (int j = 0; j < na; ++j)
      out2[j] = kn.cdotu(&mat[static_cast<std::size_t>(j) * na], v, nn);
    return out2;
  };

  // row 1: ra = 0, rb_j = -Omega12 = -conj F(x + zeta_j)
  std::vector<cxd> rb1(nn), ra2(nn);
  for (int j = 0; j < na; ++j) {
    rb1[j] = -std::conj(fq[j]);
    ra2[j] = -fq[j];  // row 2: ra = -Omega21 = -F(x + zeta_j), rb = 0
  }
  std::vector<cxd> b1 = lu.solve(rb1);
  std::vector<cxd> a1 = matvec(B, b1.data());
  for (auto& z : a1) z = -z;

  std::vector<cxd> t2 = matvec(C, ra2.data());
  for (auto& z : t2) z = -z;
  std::vector<cxd> b2 = lu.solve(t2);
  std::vector<cxd> a2 = matvec(B, b2.data());
  for (int j = 0; j < na; ++j) a2[j] = ra2[j] - a2[j];

  // residual of the full discretized equation, both rows
  double res = 0;
  {
    const auto Bb1 = matvec(B, b1.data());
    const auto Ca1 = matvec(C, a1.data());
    const auto Bb2 = matvec(B, b2.data());
    const auto Ca2 = matvec(C, a2.data());
    for (int j = 0; j < na; ++j) {
      res = std::max(res, std::abs(a1[j] + Bb1[j]));
      res = std::max(res, std::abs(Ca1[j] + b1[j] - rb1[j]));
      res = std::max(res, std::abs(a2[j] + Bb2[j] - ra2[j]));
      res = std::max(res, std::abs(Ca2[j] + b2[j]));
    }
  }
  out.residual = res;

  for (int j = 0; j < na; ++j) {
    out.g11[j] = a1[j];
    out.g12[j] = b1[j];
    out.g21[j] = a2[j];
    out.g22[j] = b2[j];
  }
  return out;
}

ExtractedV extract_v(const MarchenkoKernel& kern, const UniformGrid& xgrid,
                     const NystromGrid& grid, const ExtractOptions& opts) {
  ExtractedV out;
  std::vector<cxd> v(xgrid.n, cxd(0, 0));
  for (int j = 0; j < xgrid.n; ++j) {
    const MarchenkoSolution sol = solve_marchenko(kern, xgrid.node(j), grid);
    if (sol.active == 0) continue;
    cxd g12 = sol.g12[0], g21 = sol.g21[0];
    if (opts.extrapolate_zeta0 && sol.active > 2) {
      g12 = 2.0 * sol.g12[1] - sol.g12[2];
      g21 = 2.0 * sol.g21[1] - sol.g21[2];
    }
    v[j] = -g12;
    out.max_residual = std::max(out.max_residual, sol.residual);
    out.max_pair_dev =
        std::max(out.max_pair_dev, std::abs(g12 - std::conj(g21)));
  }
  if (out.max_pair_dev > 1e-8)
    throw Error("extract_v: conjugate-pair identity violated "
                "(quadrature imbalance)");
  out.v = CplxSampled(xgrid, std::move(v));
  return out;
}

}  // namespace edscat
