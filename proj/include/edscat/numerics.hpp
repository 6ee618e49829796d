#pragma once
// Quadrature, tail integrals, dense complex solves and the oscillatory
// Fourier quadrature. Composite trapezoid is the single quadrature rule; all
// operations are pure functions of their inputs.

#include <vector>

#include "edscat/types.hpp"

namespace edscat {

// Trapezoid integral of f over [a, b] with [a, b] inside the grid span.
// Partial end cells use linear interpolation, consistent with the rule's
// O(h^2) accuracy. Throws DomainError when [a, b] leaves the grid.
double integrate(const RealSampled& f, double a, double b);
cxd integrate(const CplxSampled& f, double a, double b);

template <class T>
struct TailIntegral {
  Sampled<T> g;        // g(x_j) = integral of f over [x_j, x_max]; g(end) = 0
  double l1 = 0;       // trapezoid estimate of the L1 norm of f
  double tail_abs = 0; // |integral of f over the last 10% of the grid|
  bool tail_ok = true; // tail_abs <= rel_tol * l1 (recorded, never thrown)
};

TailIntegral<double> tail_integral(const RealSampled& f,
                                   double rel_tol = 1e-8);
TailIntegral<cxd> tail_integral(const CplxSampled& f, double rel_tol = 1e-8);

// 4-point Lagrange interpolation on the uniform grid (cubic order).
double interp4(const RealSampled& f, double x);
cxd interp4(const CplxSampled& f, double x);

// Pivoted LU of a dense complex matrix (row major), factored in place.
// Throws SingularSystemError when a pivot falls below n*eps*max|A|.
class LuFactor {
 public:
  LuFactor(std::vector<cxd> a, int n);

  int size() const { return n_; }
  double min_pivot() const { return min_pivot_; }
  void solve_inplace(cxd* b) const;
  std::vector<cxd> solve(std::vector<cxd> b) const;

 private:
  std::vector<cxd> a_;
  std::vector<int> piv_;
  int n_ = 0;
  double min_pivot_ = 0;
};

struct DenseSolution {
  std::vector<cxd> x;
  double residual = 0;  // ||Ax - b|| / ||b||
  double min_pivot = 0;
};

// Solve Ax = b and report the relative residual of the returned solution.
DenseSolution solve_dense(const std::vector<cxd>& a, const std::vector<cxd>& b);

// Quadrature approximation of (1/pi) * integral of g(k) e^{-2 i k zeta} dk
// over the sampled k range (trapezoid weights on the nodes).
cxd fourier_integral(const std::vector<cxd>& g, const KGrid& grid,
                     double zeta);

}  // namespace edscat
