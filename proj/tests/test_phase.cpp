// Phase recovery: onset search, the contraction iteration, backward
// extension, algebraic potential recovery, and the assembled inverse
// pipeline on synthetic inputs.

#include <cmath>

#include "doctest.h"
#include "edscat/phase.hpp"
#include "test_util.hpp"

using namespace edscat;
using namespace edscat::test;

namespace {

CplxSampled complex_v(const UniformGrid& g, const ScalarField& uf,
                      const ScalarField& pf) {
  return to_zsakns(make_problem(g, uf, pf, 0.0)).v;
}

ScatteringSamples const_samples(const KGrid& kg, cxd value) {
  ScatteringSamples s;
  s.kgrid = kg;
  s.values.assign(kg.n, value);
  s.valid.assign(kg.n, 1);
  return s;
}

}  // namespace

TEST_CASE("find_x0: zero, small mass, indicator") {
  UniformGrid g(4.0, 401);
  CHECK(find_x0(CplxSampled::zeros(g)).index == 0);

  std::vector<cxd> small(g.n);
  for (int j = 0; j < g.n; ++j)
    small[j] = cxd(0.05 * (g.node(j) < 2.0 ? 1.0 : 0.0), 0);  // mass 0.1
  CHECK(find_x0(CplxSampled(g, small)).index == 0);

  std::vector<cxd> ind(g.n);
  for (int j = 0; j < g.n; ++j)
    ind[j] = cxd(g.node(j) <= 2.0 ? 1.0 : 0.0, 0);  // mass 2
  auto r = find_x0(CplxSampled(g, ind), 0.25);
  CHECK(std::fabs(r.x0 - 1.75) <= 2.0 * g.h());

  // mass so heavy at the edge that the tail only settles at the last node
  std::vector<cxd> fat(g.n, cxd(30.0, 0));
  CHECK_THROWS_AS(find_x0(CplxSampled(g, fat)), TailError);
}

TEST_CASE("fixed_point_phi: zero and real v collapse immediately") {
  UniformGrid g(8.0, 257);
  auto r0 = fixed_point_phi(CplxSampled::zeros(g), 0);
  CHECK(r0.iterations == 1);
  for (double v : r0.phi_tail) CHECK(v == 0.0);

  auto vr = complex_v(g, gauss_field(0.4, 2.0, 0.7), zero_field());
  for (int j = 0; j < g.n; ++j) CHECK(vr[j].imag() == 0.0);
  auto rr = fixed_point_phi(vr, 0);
  CHECK(rr.iterations == 1);
  for (double v : rr.phi_tail) CHECK(v == 0.0);
}

TEST_CASE("fixed_point_phi: contraction ratios on gaussian data") {
  UniformGrid g(16.0, 2048);
  auto v = complex_v(g, gauss_field(0.3, 2.0, 0.8),
                     gauss_field(0.3, 3.0, 0.9));
  auto x0 = find_x0(v, 0.2);
  auto fp = fixed_point_phi(v, x0.index);
  CHECK(fp.iterations <= 50);
  for (double r : fp.ratios) CHECK(r <= 0.55);
  // fixed point satisfies the tail condition phi(x_max) = 0 exactly
  CHECK(fp.phi_tail.back() == 0.0);
}

TEST_CASE("extend_phi: trivial extension and real v") {
  UniformGrid g(8.0, 257);
  auto v = complex_v(g, gauss_field(0.4, 2.0, 0.7),
                     gauss_field(0.2, 3.0, 0.8));
  auto fp = fixed_point_phi(v, 0);
  auto phi = extend_phi(v, fp);
  for (int j = 0; j < g.n; ++j) CHECK(phi[j] == fp.phi_tail[j]);

  auto vr = complex_v(g, gauss_field(0.4, 2.0, 0.7), zero_field());
  auto fpr = fixed_point_phi(vr, 128);
  auto phir = extend_phi(vr, fpr);
  for (int j = 0; j < g.n; ++j) CHECK(phir[j] == 0.0);
}

TEST_CASE("extend_phi: fourth-order refinement against the known phase") {
  // for v built from (u, p) the solution of the phase equation vanishing at
  // infinity is the gaussian tail integral of p
  auto phi0_err = [&](int n) {
    UniformGrid g(12.0, n);
    auto uf = gauss_field(0.3, 2.0, 0.8);
    auto pf = gauss_field(0.3, 5.0, 0.7);
    auto v = complex_v(g, uf, pf);
    const int j0 = (3 * (n - 1)) / 4;  // x0 = 9, beyond the bumps
    FixedPointResult tail;
    tail.x0_index = j0;
    tail.iterations = 0;
    tail.phi_tail.resize(n - j0);
    for (int i = 0; i < n - j0; ++i)
      tail.phi_tail[i] = gauss_tail(g.node(j0 + i), 0.3, 5.0, 0.7);
    auto phi = extend_phi(v, tail);
    return std::fabs(phi[0] - gauss_tail(0.0, 0.3, 5.0, 0.7));
  };
  const double e1 = phi0_err(376 + 1);
  const double e2 = phi0_err(751 + 1);
  const double ratio = e1 / e2;
  CHECK(ratio > 8.0);
  CHECK(ratio < 40.0);
}

TEST_CASE("recover_potentials: algebraic cases and the exact round trip") {
  UniformGrid g(8.0, 513);
  {
    auto v = complex_v(g, gauss_field(0.4, 2.0, 0.7),
                       gauss_field(-0.2, 3.0, 0.6));
    auto rec = recover_potentials(v, RealSampled::zeros(g), 0.9);
    for (int j = 0; j < g.n; ++j) {
      CHECK(rec.u[j] == doctest::Approx(-v[j].real()).epsilon(1e-14));
      CHECK(rec.p[j] == doctest::Approx(v[j].imag()).epsilon(1e-14));
    }
    CHECK(rec.alpha == doctest::Approx(0.9).epsilon(1e-14));
  }
  {
    auto rec = recover_potentials(CplxSampled::zeros(g),
                                  RealSampled::zeros(g), 1.3);
    for (int j = 0; j < g.n; ++j) {
      CHECK(rec.u[j] == 0.0);
      CHECK(rec.p[j] == 0.0);
    }
    CHECK(rec.alpha == doctest::Approx(1.3).epsilon(1e-14));
  }
  {
    UniformGrid gg(16.0, 1025);
    auto sp = make_problem(gg, gauss_field(0.5, 2.0, 0.8),
                           gauss_field(0.4, 3.5, 0.9), 1.1);
    auto zp = to_zsakns(sp);
    auto rec = recover_potentials(zp.v, zp.phi, zp.beta);
    double worst = 0;
    for (int j = 0; j < gg.n; ++j)
      worst = std::max({worst, std::fabs(rec.u[j] - sp.u[j]),
                        std::fabs(rec.p[j] - sp.p[j])});
    CHECK(worst < 1e-10);
    CHECK(mod_pi_dist(rec.alpha, sp.alpha) < 1e-12);
  }
}

TEST_CASE("inverse_scatter: constant unimodular input gives the zero "
          "potential with the calibrated alpha") {
  // a zero-potential forward run with boundary parameter a produces
  // S = -e^{2ia}; feed that constant back in
  const double alpha_true = 0.8;
  KGrid kg(32.0, 1024);
  auto s = const_samples(kg, -std::polar(1.0, 2.0 * alpha_true));
  InverseConfig cfg;
  cfg.x_max = 8.0;
  cfg.n_x = 257;
  cfg.n_zeta = 129;
  cfg.n_f = 513;
  auto rec = inverse_scatter(s, cfg);
  double worst = 0;
  for (int j = 0; j < rec.u.grid.n; ++j)
    worst = std::max({worst, std::fabs(rec.u[j]), std::fabs(rec.p[j])});
  CHECK(worst < 1e-8);
  CHECK(mod_pi_dist(rec.alpha, alpha_true) < 1e-3);
  CHECK(rec.report.pass());
}

TEST_CASE("inverse_scatter: non-unimodular input is rejected with a report") {
  KGrid kg(32.0, 1024);
  auto s = const_samples(kg, cxd(1.1, 0.0));
  InverseConfig cfg;
  cfg.x_max = 8.0;
  cfg.n_x = 129;
  try {
    inverse_scatter(s, cfg);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK_FALSE(e.report.pass_unimodular);
  }
}
