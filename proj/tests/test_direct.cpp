// Jost matrices and the forward scattering map: free case, constant-kernel
// closed form, structural invariants, refinement order, Schrodinger-level
// quantities, winding numbers.

#include <cmath>

#include "doctest.h"
#include "edscat/direct.hpp"
#include "test_util.hpp"

using namespace edscat;
using namespace edscat::test;

namespace {

// complex gaussian-envelope potential supplied in closed form
ZsAknsProblem synthetic_v(const UniformGrid& g, double beta) {
  auto eval = [](double x) {
    return cxd(0.35 * std::exp(-0.5 * (x - 2.0) * (x - 2.0)),
               0.25 * std::exp(-0.5 * (x - 3.0) * (x - 3.0) / 0.64)) *
           std::polar(1.0, 0.8 * x);
  };
  ZsAknsProblem zp;
  std::vector<cxd> v(g.n);
  for (int j = 0; j < g.n; ++j) v[j] = eval(g.node(j));
  zp.v = CplxSampled(g, std::move(v));
  zp.phi = RealSampled::zeros(g);
  zp.beta = beta;
  zp.p0 = 0;
  zp.v_eval = eval;
  return zp;
}

ZsAknsProblem gaussian_problem_zs(const UniformGrid& g) {
  return to_zsakns(make_problem(g, gauss_field(0.3, 2.0, 0.8),
                                gauss_field(0.3, 3.0, 0.9), 0.7));
}

}  // namespace

TEST_CASE("jost_matrix: free equation gives the identity") {
  UniformGrid g(8.0, 257);
  auto zp = to_zsakns(make_problem(g, zero_field(), zero_field(), 0.4));
  for (double k : {-5.0, 0.0, 0.25, 3.0, 40.0}) {
    auto jm = jost_matrix(zp, k);
    CHECK(std::abs(jm.psi0.a11 - 1.0) < 1e-14);
    CHECK(std::abs(jm.psi0.a12) < 1e-14);
    CHECK(std::abs(jm.psi0.a21) < 1e-14);
    CHECK(std::abs(jm.psi0.a22 - 1.0) < 1e-14);
  }
}

TEST_CASE("jost_matrix: constant kernel on [0,1] at k = 0") {
  // v = c on [0,1), zero elsewhere: M(0) = exp(c sigma1) on the support
  const double c = 0.7;
  UniformGrid g(4.0, 401);
  ZsAknsProblem zp;
  std::vector<cxd> v(g.n);
  for (int j = 0; j < g.n; ++j) v[j] = g.node(j) < 1.0 ? c : 0.0;
  zp.v = CplxSampled(g, std::move(v));
  zp.phi = RealSampled::zeros(g);
  zp.v_eval = [c](double x) { return cxd(x >= 0.0 && x < 1.0 ? c : 0.0, 0); };
  zp.breakpoints = {1.0};
  auto jm = jost_matrix(zp, 0.0);
  const double ch = std::cosh(c), sh = std::sinh(c);
  CHECK(std::abs(jm.psi0.a11 - ch) < 1e-8);
  CHECK(std::abs(jm.psi0.a12 - sh) < 1e-8);
  CHECK(std::abs(jm.psi0.a21 - sh) < 1e-8);
  CHECK(std::abs(jm.psi0.a22 - ch) < 1e-8);
}

TEST_CASE("jost_matrix: unit determinant and column symmetry") {
  UniformGrid g(12.0, 769);
  auto zp = synthetic_v(g, 0.9);
  for (double k : {0.3, 2.0, -7.0, 31.0}) {
    auto jm = jost_matrix(zp, k);
    CHECK(jm.det_dev() < 1e-8);
    CHECK(jm.sym_dev() < 1e-8);
    // second column = sigma1 * conj(first column)
    CHECK(std::abs(jm.psi0.a12 - std::conj(jm.psi0.a21)) < 1e-10);
    CHECK(std::abs(jm.psi0.a22 - std::conj(jm.psi0.a11)) < 1e-10);
  }
}

TEST_CASE("jost_matrix: fourth-order refinement on smooth v") {
  const double k = 2.0;
  auto psi0_at = [&](int n) {
    UniformGrid g(10.0, n);
    return jost_matrix(gaussian_problem_zs(g), k).psi0;
  };
  const Mat2 ref = psi0_at(4001);
  auto err = [&](int n) {
    const Mat2 d = psi0_at(n) - ref;
    return std::max({std::abs(d.a11), std::abs(d.a12), std::abs(d.a21),
                     std::abs(d.a22)});
  };
  const double e1 = err(251), e2 = err(501), e3 = err(1001);
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 26.0);
  CHECK(e2 / e3 > 10.0);
  CHECK(e2 / e3 < 26.0);
}

TEST_CASE("scattering_function: free case is the constant -e^{2i beta}") {
  UniformGrid g(8.0, 129);
  auto zp = to_zsakns(make_problem(g, zero_field(), zero_field(), 0.4));
  KGrid kg(16.0, 64);
  auto s = scattering_function(zp, kg);
  const cxd want = -std::polar(1.0, 0.8);
  for (int j = 0; j < kg.n; ++j) CHECK(std::abs(s.values[j] - want) < 1e-14);
  CHECK(s.max_unimod_dev() < 1e-14);
}

TEST_CASE("scattering_function: unimodular by construction, stable under "
          "refinement") {
  KGrid kg(16.0, 256);
  auto coarse = scattering_function(gaussian_problem_zs(UniformGrid(12.0, 769)),
                                    kg);
  CHECK(coarse.max_unimod_dev() < 1e-12);
  CHECK(coarse.invalid_count == 0);

  JostOptions half;
  half.step_cap = 0.1;  // halve every step, including the capped ones
  auto fine = scattering_function(gaussian_problem_zs(UniformGrid(12.0, 1537)),
                                  kg, half);
  double worst = 0;
  for (int j = 0; j < kg.n; ++j)
    worst = std::max(worst, std::abs(coarse.values[j] - fine.values[j]));
  CHECK(worst < 1e-6);
}

TEST_CASE("schrodinger_jost: free values and quasi-derivative consistency") {
  UniformGrid g(8.0, 257);
  auto zero = make_problem(g, zero_field(), zero_field(), 0.0);
  for (double k : {0.5, -2.0}) {
    auto sj = schrodinger_jost(zero, k);
    CHECK(std::abs(sj.f0 - 1.0) < 1e-13);
    CHECK(std::abs(sj.f0_quasi - cxd(0, k)) < 1e-13);
  }
  CHECK_THROWS_AS(schrodinger_jost(zero, 0.0), DomainError);

  // f^{[1]}(0) from differencing the profile matches k y1(0) to O(h^2)
  auto mk = [](int n) {
    return make_problem(UniformGrid(12.0, n), gauss_field(0.3, 2.0, 0.8),
                        zero_field(), 0.0);
  };
  auto fd_err = [&](int n) {
    auto sp = mk(n);
    const double k = 1.0;
    auto sj = schrodinger_jost(sp, k);
    auto prof = jost_f_profile(sp, k);
    auto qd = quasi_derivative(prof, sp.u);
    return std::abs(qd[0] - sj.f0_quasi);
  };
  const double e1 = fd_err(501), e2 = fd_err(1001);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 > 2.5);
  CHECK(e1 / e2 < 7.0);
}

TEST_CASE("jost_function: free closed form and route agreement") {
  UniformGrid g(8.0, 257);
  for (double alpha : {0.0, 0.25 * kPi, 1.0, 2.5}) {
    auto zero = make_problem(g, zero_field(), zero_field(), alpha);
    for (double k : {0.5, 1.0, -3.0}) {
      auto jf = jost_function(zero, k);
      CHECK(std::abs(jf.s - k * std::polar(1.0, alpha)) < 1e-8);
      CHECK(std::abs(jf.s - jf.s_dirac) < 1e-10);
    }
  }
  auto sp = make_problem(UniformGrid(12.0, 769), gauss_field(0.3, 2.0, 0.8),
                         gauss_field(0.3, 3.0, 0.9), 0.25 * kPi);
  auto jf = jost_function(sp, 1.0);
  CHECK(std::abs(jf.s) > 0.1);
  CHECK(std::fabs(std::abs(jf.s / std::conj(jf.s)) - 1.0) < 1e-12);
  CHECK(std::abs(jf.s - jf.s_dirac) < 1e-10);
}

TEST_CASE("winding_number: constants, Blaschke factor, conjugate") {
  KGrid kg(64.0, 4096);
  ScatteringSamples s;
  s.kgrid = kg;
  s.valid.assign(kg.n, 1);

  s.values.assign(kg.n, std::polar(1.0, 1.234));
  CHECK(winding_number(s).winding == 0);

  for (int j = 0; j < kg.n; ++j) {
    const double k = kg.node(j);
    s.values[j] = (1.0 + cxd(0, 2 * k)) / (1.0 - cxd(0, 2 * k));
  }
  auto w = winding_number(s);
  CHECK(w.winding == 1);
  CHECK(std::fabs(w.raw - 1.0) < 0.05);

  for (auto& z : s.values) z = std::conj(z);
  CHECK(winding_number(s).winding == -1);

  // under-resolved phase: increments of 1.875 rad exceed pi/2
  for (int j = 0; j < kg.n; ++j)
    s.values[j] = std::polar(1.0, 60.0 * kg.node(j));
  CHECK_THROWS_AS(winding_number(s), UnderResolvedError);
}
