// Transformation chain: phi from p, the canonical form, quasi-derivatives,
// and the finite-difference validation of the Dirac system mapping.

#include <cmath>

#include "doctest.h"
#include "edscat/transform.hpp"
#include "test_util.hpp"

using namespace edscat;
using namespace edscat::test;

TEST_CASE("phi_from_p: zero, indicator, gaussian tail") {
  UniformGrid g(4.0, 401);
  auto pr = phi_from_p(RealSampled::zeros(g));
  CHECK(pr.p0 == 0.0);
  for (int j = 0; j < g.n; ++j) CHECK(pr.phi[j] == 0.0);

  std::vector<double> ind(g.n);
  for (int j = 0; j < g.n; ++j) ind[j] = g.node(j) <= 1.0 ? 1.0 : 0.0;
  auto pi = phi_from_p(RealSampled(g, ind));
  CHECK(std::fabs(pi.p0 - 1.0) <= g.h());
  for (int j = 0; j < g.n; ++j)
    CHECK(std::fabs(pi.phi[j] - std::max(0.0, 1.0 - g.node(j))) <= g.h());

  UniformGrid g8(8.0, 4001);
  auto pg = phi_from_p(sample_field(g8, gauss_field(1.0, 2.0, 0.5)));
  for (int j = 0; j < g8.n; j += 113)
    CHECK(std::fabs(pg.phi[j] - gauss_tail(g8.node(j), 1.0, 2.0, 0.5)) <
          1e-6);
}

TEST_CASE("phi_from_p is linear and phi' = -p at interior nodes") {
  UniformGrid g(8.0, 1601);
  auto p1 = sample_field(g, gauss_field(0.4, 2.0, 0.6));
  auto p2 = sample_field(g, gauss_field(-0.2, 4.0, 0.9));
  std::vector<double> mix(g.n);
  for (int j = 0; j < g.n; ++j) mix[j] = 3.0 * p1[j] - 2.0 * p2[j];
  auto pm = phi_from_p(RealSampled(g, mix));
  auto f1 = phi_from_p(p1), f2 = phi_from_p(p2);
  for (int j = 0; j < g.n; j += 31)
    CHECK(std::fabs(pm.phi[j] - (3.0 * f1.phi[j] - 2.0 * f2.phi[j])) <
          1e-13);
  const double h = g.h();
  for (int j = 1; j + 1 < g.n; j += 17) {
    const double d = (pm.phi[j + 1] - pm.phi[j - 1]) / (2.0 * h);
    CHECK(std::fabs(d + mix[j]) < 10.0 * h * h);
  }
}

TEST_CASE("to_zsakns: zero potentials and vanishing phi") {
  UniformGrid g(8.0, 401);
  auto sp = make_problem(g, zero_field(), zero_field(), 0.3);
  auto zp = to_zsakns(sp);
  CHECK(zp.beta == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(zp.p0 == 0.0);
  for (int j = 0; j < g.n; ++j) CHECK(std::abs(zp.v[j]) == 0.0);

  auto sps = make_problem(g, step_field(0.5, 0.0, 1.0), zero_field(), 0.0);
  auto zps = to_zsakns(sps);
  CHECK(zps.beta == 0.0);
  for (int j = 0; j < g.n; ++j) {
    CHECK(zps.phi[j] == 0.0);
    CHECK(zps.v[j].imag() == 0.0);
    CHECK(zps.v[j].real() == doctest::Approx(-sps.u[j]).epsilon(1e-15));
  }
}

TEST_CASE("to_zsakns: modulus identity and beta reduction") {
  UniformGrid g(16.0, 801);
  auto sp = make_problem(g, gauss_field(0.5, 2.0, 0.8),
                         gauss_field(0.7, 3.0, 0.9), 2.9);
  auto zp = to_zsakns(sp);
  for (int j = 0; j < g.n; ++j) {
    const double want = std::hypot(sp.u[j], sp.p[j]);
    CHECK(std::fabs(std::abs(zp.v[j]) - want) < 1e-12);
  }
  CHECK(zp.beta >= 0.0);
  CHECK(zp.beta < kPi);
  const double k = (sp.alpha + zp.p0 - zp.beta) / kPi;
  CHECK(std::fabs(k - std::round(k)) < 1e-12);
}

TEST_CASE("quasi_derivative") {
  UniformGrid g(2.0, 2001);
  std::vector<cxd> lin(g.n), expv(g.n), zero(g.n, cxd(0, 0));
  for (int j = 0; j < g.n; ++j) {
    lin[j] = g.node(j);
    expv[j] = std::exp(g.node(j));
  }
  auto d1 = quasi_derivative(CplxSampled(g, lin), RealSampled::zeros(g));
  for (int j = 1; j + 1 < g.n; j += 41)
    CHECK(std::abs(d1[j] - 1.0) < 1e-10);

  std::vector<double> ones(g.n, 1.0);
  auto d2 = quasi_derivative(CplxSampled(g, expv), RealSampled(g, ones));
  for (int j = 0; j < g.n; j += 41) CHECK(std::abs(d2[j]) < 2e-5);

  auto d3 = quasi_derivative(CplxSampled(g, zero), RealSampled(g, ones));
  for (int j = 0; j < g.n; ++j) CHECK(std::abs(d3[j]) == 0.0);

  UniformGrid other(2.0, 1999);
  CHECK_THROWS_AS(
      quasi_derivative(CplxSampled(g, lin), RealSampled::zeros(other)),
      DomainError);
}

TEST_CASE("chain_residual: exact free case, second order, moderate k") {
  UniformGrid g(12.0, 769);
  auto zero = make_problem(g, zero_field(), zero_field(), 0.0);
  CHECK(chain_residual(zero, 1.7) < 1e-10);

  auto mk = [&](int n) {
    return make_problem(UniformGrid(12.0, n), gauss_field(0.3, 2.0, 0.8),
                        gauss_field(0.3, 3.0, 0.9), 0.0);
  };
  const double r1 = chain_residual(mk(769), 1.0);
  const double r2 = chain_residual(mk(1537), 1.0);
  CHECK(r1 / r2 > 2.5);
  CHECK(r1 / r2 < 7.0);

  auto sp = make_problem(UniformGrid(16.0, 2048), gauss_field(0.3, 2.0, 0.8),
                         gauss_field(0.3, 3.0, 0.9), 0.0);
  CHECK(chain_residual(sp, 4.0) < 1e-3);
}
