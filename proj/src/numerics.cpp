#include "edscat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edscat/simd.hpp"

namespace edscat {
namespace {

template <class T>
T value_at(const Sampled<T>& f, double x) {
  // linear interpolation, only used for partial end cells of integrate()
  const double h = f.grid.h();
  int j = std::clamp(static_cast<int>(std::floor(x / h)), 0, f.grid.n - 2);
  const double t = (x - f.grid.node(j)) / h;
  return f.values[j] * (1.0 - t) + f.values[j + 1] * t;
}

template <class T>
T integrate_impl(const Sampled<T>& f, double a, double b) {
  const double span = f.grid.x_max;
  const double slack = 1e-12 * std::max(1.0, span);
  if (!(a <= b) || a < -slack || b > span + slack)
    throw DomainError("integrate: interval outside the sampled grid");
  a = std::clamp(a, 0.0, span);
  b = std::clamp(b, 0.0, span);
  if (a == b) return T{};

  const double h = f.grid.h();
  const int ja = static_cast<int>(std::ceil(a / h - 1e-12));
  const int jb = static_cast<int>(std::floor(b / h + 1e-12));
  T sum{};
  if (ja > jb) {
    // both endpoints inside one cell
    return (value_at(f, a) + value_at(f, b)) * (0.5 * (b - a));
  }
  for (int j = ja; j < jb; ++j)
    sum += (f.values[j] + f.values[j + 1]) * (0.5 * h);
  const double left = f.grid.node(ja) - a;
  if (left > 1e-14 * span)
    sum += (value_at(f, a) + f.values[ja]) * (0.5 * left);
  const double right = b - f.grid.node(jb);
  if (right > 1e-14 * span)
    sum += (f.values[jb] + value_at(f, b)) * (0.5 * right);
  return sum;
}

template <class T>
TailIntegral<T> tail_integral_impl(const Sampled<T>& f, double rel_tol) {
  const int n = f.grid.n;
  const double h = f.grid.h();
  std::vector<T> g(n);
  g[n - 1] = T{};
  for (int j = n - 2; j >= 0; --j)
    g[j] = g[j + 1] + (f.values[j] + f.values[j + 1]) * (0.5 * h);

  TailIntegral<T> out;
  double l1 = 0;
  for (int j = 0; j + 1 < n; ++j)
    l1 += 0.5 * h * (std::abs(f.values[j]) + std::abs(f.values[j + 1]));
  out.l1 = l1;
  const int j90 = std::min(n - 1, static_cast<int>(std::floor(0.9 * (n - 1))));
  out.tail_abs = std::abs(g[j90]);
  out.tail_ok = out.tail_abs <= rel_tol * std::max(l1, 1e-300);
  out.g = Sampled<T>(f.grid, std::move(g));
  return out;
}

template <class T>
T interp4_impl(const Sampled<T>& f, double x) {
  const int n = f.grid.n;
  const double h = f.grid.h();
  if (n < 4) return value_at(f, std::clamp(x, 0.0, f.grid.x_max));
  int j = static_cast<int>(std::floor(x / h));
  j = std::clamp(j, 1, n - 3);
  const double t = x / h - j;
  // cubic Lagrange weights on nodes j-1, j, j+1, j+2
  const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w0 = (t * t - 1.0) * (t - 2.0) / 2.0;
  const double w1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
  const double w2 = t * (t * t - 1.0) / 6.0;
  return f.values[j - 1] * wm1 + f.values[j] * w0 + f.values[j + 1] * w1 +
         f.values[j + 2] * w2;
}

double cabs1(cxd z) { return std::fabs(z.real()) + std::fabs(z.imag()); }

}  // namespace

double integrate(const RealSampled& f, double a, double b) {
  return integrate_impl(f, a, b);
}
cxd integrate(const CplxSampled& f, double a, double b) {
  return integrate_impl(f, a, b);
}

TailIntegral<double> tail_integral(const RealSampled& f, double rel_tol) {
  return tail_integral_impl(f, rel_tol);
}
TailIntegral<cxd> tail_integral(const CplxSampled& f, double rel_tol) {
  return tail_integral_impl(f, rel_tol);
}

double interp4(const RealSampled& f, double x) { return interp4_impl(f, x); }
cxd interp4(const CplxSampled& f, double x) { return interp4_impl(f, x); }

LuFactor::LuFactor(std::vector<cxd> a, int n) : a_(std::move(a)), n_(n) {
  if (n < 1 || a_.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("LuFactor: matrix size mismatch");
  piv_.resize(n);
  const auto& k = simd::active();

  double amax = 0;
  for (const cxd& z : a_) amax = std::max(amax, cabs1(z));
  const double tiny =
      n * std::numeric_limits<double>::epsilon() * std::max(amax, 1e-300);
  min_pivot_ = std::numeric_limits<double>::infinity();

  auto row = [&](int r) { return &a_[static_cast<std::size_t>(r) * n]; };
  constexpr int kBlock = 32;

  for (int c0 = 0; c0 < n; c0 += kBlock) {
    const int nb = std::min(kBlock, n - c0);
    // panel factorization, unblocked, full-column pivoting rows
    for (int c = c0; c < c0 + nb; ++c) {
      int prow = c;
      double pmag = cabs1(row(c)[c]);
      for (int r = c + 1; r < n; ++r) {
        const double m = cabs1(row(r)[c]);
        if (m > pmag) {
          pmag = m;
          prow = r;
        }
      }
      piv_[c] = prow;
      if (prow != c)
        std::swap_ranges(row(c), row(c) + n, row(prow));
      const cxd pivot = row(c)[c];
      min_pivot_ = std::min(min_pivot_, std::abs(pivot));
      if (pmag < tiny)
        throw SingularSystemError("LuFactor: numerically singular matrix",
                                  std::abs(pivot));
      const int pend = c0 + nb;
      const cxd* urow = row(c) + c + 1;
      for (int r = c + 1; r < n; ++r) {
        cxd* rr = row(r);
        const cxd l = rr[c] / pivot;
        rr[c] = l;
        if (pend > c + 1) k.caxpy(rr + c + 1, urow, -l, pend - c - 1);
      }
    }
    const int jt = c0 + nb;  // first trailing column
    if (jt >= n) break;
    // U12 = L11^{-1} A12 by forward substitution over the panel rows
    for (int r = c0 + 1; r < jt; ++r)
      for (int q = c0; q < r; ++q)
        k.caxpy(row(r) + jt, row(q) + jt, -row(r)[q], n - jt);
    // trailing update A22 -= L21 U12
    k.gemm_sub(row(jt) + jt, n, row(jt) + c0, n, row(c0) + jt, n, n - jt,
               n - jt, nb);
  }
}

void LuFactor::solve_inplace(cxd* b) const {
  const auto& k = simd::active();
  for (int c = 0; c < n_; ++c)
    if (piv_[c] != c) std::swap(b[c], b[piv_[c]]);
  for (int r = 1; r < n_; ++r)
    b[r] -= k.cdotu(&a_[static_cast<std::size_t>(r) * n_], b, r);
  for (int r = n_ - 1; r >= 0; --r) {
    const cxd* row = &a_[static_cast<std::size_t>(r) * n_];
    b[r] = (b[r] - k.cdotu(row + r + 1, b + r + 1, n_ - r - 1)) / row[r];
  }
}

std::vector<cxd> LuFactor::solve(std::vector<cxd> b) const {
  if (b.size() != static_cast<std::size_t>(n_))
    throw DomainError("LuFactor::solve: rhs size mismatch");
  solve_inplace(b.data());
  return b;
}

DenseSolution solve_dense(const std::vector<cxd>& a,
                          const std::vector<cxd>& b) {
  const int n = static_cast<int>(b.size());
  if (a.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("solve_dense: matrix/rhs dimensions disagree");
  LuFactor lu(a, n);
  DenseSolution out;
  out.x = lu.solve(b);
  out.min_pivot = lu.min_pivot();

  const auto& k = simd::active();
  double rnorm = 0, bnorm = 0;
  for (int r = 0; r < n; ++r) {
    const cxd res =
        k.cdotu(&a[static_cast<std::size_t>(r) * n], out.x.data(), n) - b[r];
    rnorm += std::norm(res);
    bnorm += std::norm(b[r]);
  }
  out.residual = std::sqrt(rnorm) / std::max(std::sqrt(bnorm), 1e-300);
  return out;
}

cxd fourier_integral(const std::vector<cxd>& g, const KGrid& grid,
                     double zeta) {
  const int n = grid.n;
  if (static_cast<int>(g.size()) != n)
    throw DomainError("fourier_integral: sample count mismatch");
  const double dk = grid.dk();
  // trapezoid over the node span, then the two half-weight end corrections
  const double theta0 = -2.0 * grid.node(0) * zeta;
  const double dtheta = -2.0 * dk * zeta;
  cxd s = simd::active().phase_sum(g.data(), theta0, dtheta, g.size());
  s -= 0.5 * (g.front() * std::polar(1.0, theta0) +
              g.back() * std::polar(1.0, theta0 + (n - 1) * dtheta));
  return s * (dk / kPi);
}

}  // namespace edscat
