#include "edscat/transform.hpp"

#include <algorithm>
#include <cmath>

#include "edscat/direct.hpp"

namespace edscat {

DiracSystem dirac_system(const SchrodingerProblem& sp) {
  if (!(sp.u.grid == sp.p.grid))
    throw DomainError("dirac_system: u and p sampled on different grids");
  return {sp.u, sp.p};
}

PhiResult phi_from_p(const RealSampled& p, double tail_rel_tol) {
  auto tail = tail_integral(p, tail_rel_tol);
  PhiResult out;
  out.p0 = tail.g[0];
  out.tail_ok = tail.tail_ok;
  out.tail_abs = tail.tail_abs;
  out.phi = std::move(tail.g);
  return out;
}

ZsAknsProblem to_zsakns(const SchrodingerProblem& sp) {
  if (!(sp.u.grid == sp.p.grid))
    throw DomainError("to_zsakns: u and p sampled on different grids");
  const UniformGrid grid = sp.u.grid;
  const int n = grid.n;

  ZsAknsProblem zp;
  if (sp.p_field && sp.p_field->tail) {
    std::vector<double> phi(n);
    for (int j = 0; j < n; ++j) phi[j] = sp.p_field->tail(grid.node(j));
    zp.phi = RealSampled(grid, std::move(phi));
    zp.p0 = zp.phi[0];
    zp.tail_ok = true;
  } else {
    auto pr = phi_from_p(sp.p);
    zp.phi = std::move(pr.phi);
    zp.p0 = pr.p0;
    zp.tail_ok = pr.tail_ok;
    zp.tail_abs = pr.tail_abs;
  }

  std::vector<cxd> v(n);
  for (int j = 0; j < n; ++j)
    v[j] = cxd(-sp.u[j], sp.p[j]) * std::polar(1.0, -2.0 * zp.phi[j]);
  zp.v = CplxSampled(grid, std::move(v));
  zp.beta = mod_pi(sp.alpha + zp.p0);

  if (sp.u_field && sp.p_field && sp.u_field->f && sp.p_field->f &&
      sp.p_field->tail) {
    const auto uf = sp.u_field->f;
    const auto pf = sp.p_field->f;
    const auto ptail = sp.p_field->tail;
    zp.v_eval = [uf, pf, ptail](double x) {
      return cxd(-uf(x), pf(x)) * std::polar(1.0, -2.0 * ptail(x));
    };
    zp.breakpoints = sp.u_field->breakpoints;
    zp.breakpoints.insert(zp.breakpoints.end(),
                          sp.p_field->breakpoints.begin(),
                          sp.p_field->breakpoints.end());
    std::sort(zp.breakpoints.begin(), zp.breakpoints.end());
    zp.breakpoints.erase(
        std::unique(zp.breakpoints.begin(), zp.breakpoints.end()),
        zp.breakpoints.end());
  }
  return zp;
}

CplxSampled quasi_derivative(const CplxSampled& y, const RealSampled& u) {
  if (!(y.grid == u.grid))
    throw DomainError("quasi_derivative: grids do not match");
  const int n = y.grid.n;
  const double h = y.grid.h();
  std::vector<cxd> out(n);
  out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  for (int j = 1; j + 1 < n; ++j) out[j] = (y[j + 1] - y[j - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  for (int j = 0; j < n; ++j) out[j] -= u[j] * y[j];
  return CplxSampled(y.grid, std::move(out));
}

double chain_residual(const SchrodingerProblem& sp, double k) {
  if (k == 0) throw DomainError("chain_residual: k must be nonzero");
  const ZsAknsProblem zp = to_zsakns(sp);
  JostOptions opts;
  opts.record_profile = true;
  const JostMatrix jm = jost_matrix(zp, k, opts);
  const auto& profile = *jm.profile;

  const UniformGrid grid = sp.u.grid;
  const int n = grid.n;
  const double h = grid.h();
  const DiracSystem ds = dirac_system(sp);

  double worst = 0;
  for (int j = 1; j + 1 < n; ++j) {
    const cxd m1 = profile[j].a11, m2 = profile[j].a21;
    const cxd dm1 = (profile[j + 1].a11 - profile[j - 1].a11) / (2.0 * h);
    const cxd dm2 = (profile[j + 1].a21 - profile[j - 1].a21) / (2.0 * h);

    // G = U diag(e^{i(phi+kx)}, e^{-i(phi+kx)}), G' = i(k - p) G sigma3
    const double ang = zp.phi[j] + k * grid.node(j);
    const cxd e = std::polar(1.0, ang), ec = std::conj(e);
    const Mat2 g{kU.a11 * e, kU.a12 * ec, kU.a21 * e, kU.a22 * ec};
    auto [y1, y2] = g.mul_col(m1, m2);
    const cxd factor = cxd(0, 1) * (k - sp.p[j]);
    auto [gp1, gp2] = g.mul_col(factor * m1, -factor * m2);
    auto [gd1, gd2] = g.mul_col(dm1, dm2);
    const cxd yp1 = gp1 + gd1, yp2 = gp2 + gd2;

    const Mat2 pot = ds.potential_at(j);
    // sigma2 y' = (y2', -y1')
    const cxd r1 = yp2 + pot.a11 * y1 + pot.a12 * y2 - k * y1;
    const cxd r2 = -yp1 + pot.a21 * y1 + pot.a22 * y2 - k * y2;
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return worst;
}

}  // namespace edscat
