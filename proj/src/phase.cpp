#include "edscat/phase.hpp"

#include <algorithm>
#include <cmath>

namespace edscat {
namespace {

double phase_rhs(cxd v, double phi) {
  return -v.real() * std::sin(2.0 * phi) - v.imag() * std::cos(2.0 * phi);
}

}  // namespace

X0Result find_x0(const CplxSampled& v, double threshold) {
  const int n = v.grid.n;
  std::vector<double> mag(n);
  for (int j = 0; j < n; ++j)
    mag[j] = std::fabs(v[j].real()) + std::fabs(v[j].imag());
  const auto tail = tail_integral(RealSampled(v.grid, std::move(mag)));
  for (int j = 0; j < n; ++j) {
    if (tail.g[j] < threshold) {
      if (j == n - 1)
        throw TailError("find_x0: tail only settles at the last node "
                        "(domain too short; increase x_max)");
      return {j, v.grid.node(j), tail.g[j]};
    }
  }
  throw TailError("find_x0: tail never falls below the contraction "
                  "threshold (domain too short; increase x_max)");
}

FixedPointResult fixed_point_phi(const CplxSampled& v, int x0_index,
                                 double tol, int max_iter) {
  const int n = v.grid.n;
  if (x0_index < 0 || x0_index >= n - 1)
    throw DomainError("fixed_point_phi: bad onset index");
  const int m = n - x0_index;
  const double h = v.grid.h();

  FixedPointResult out;
  out.x0_index = x0_index;
  std::vector<double> f(m, 0.0), next(m), integrand(m);
  double prev_delta = -1;
  for (int it = 1; it <= max_iter; ++it) {
    for (int i = 0; i < m; ++i) {
      const cxd vv = v[x0_index + i];
      integrand[i] = vv.real() * std::sin(2.0 * f[i]) +
                     vv.imag() * std::cos(2.0 * f[i]);
    }
    next[m - 1] = 0.0;
    for (int i = m - 2; i >= 0; --i)
      next[i] = next[i + 1] + 0.5 * h * (integrand[i] + integrand[i + 1]);

    double delta = 0;  // Y norm of the update: total variation on the grid
    for (int i = 0; i + 1 < m; ++i)
      delta += std::fabs((next[i + 1] - f[i + 1]) - (next[i] - f[i]));
    f.swap(next);
    if (prev_delta > 0) out.ratios.push_back(delta / prev_delta);
    out.iterations = it;
    if (delta < tol) {
      out.phi_tail = std::move(f);
      return out;
    }
    prev_delta = delta;
  }
  throw ConvergenceError(
      "fixed_point_phi: no contraction after max iterations "
      "(tail precondition violated?)");
}

RealSampled extend_phi(const CplxSampled& v, const FixedPointResult& tail) {
  const int n = v.grid.n;
  const int j0 = tail.x0_index;
  if (static_cast<int>(tail.phi_tail.size()) != n - j0)
    throw DomainError("extend_phi: tail length mismatch");
  const double h = v.grid.h();
  std::vector<double> phi(n);
  std::copy(tail.phi_tail.begin(), tail.phi_tail.end(), phi.begin() + j0);

  for (int j = j0; j > 0; --j) {
    const double hj = -h;  // backward step over one cell
    const double y = phi[j];
    const cxd vr = v[j];
    const cxd vm = interp4(v, v.grid.node(j) - 0.5 * h);
    const cxd vl = v[j - 1];
    const double k1 = phase_rhs(vr, y);
    const double k2 = phase_rhs(vm, y + 0.5 * hj * k1);
    const double k3 = phase_rhs(vm, y + 0.5 * hj * k2);
    const double k4 = phase_rhs(vl, y + hj * k3);
    phi[j - 1] = y + hj / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(phi[j - 1]))
      throw IntegrationError("extend_phi: non-finite state");
  }
  return RealSampled(v.grid, std::move(phi));
}

RecoveredPotentials recover_potentials(const CplxSampled& v,
                                       const RealSampled& phi, double beta) {
  if (!(v.grid == phi.grid))
    throw DomainError("recover_potentials: grids do not match");
  const int n = v.grid.n;
  std::vector<double> u(n), p(n);
  double dev = 0;
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(2.0 * phi[j]), s = std::sin(2.0 * phi[j]);
    const double v1 = v[j].real(), v2 = v[j].imag();
    u[j] = -v1 * c + v2 * s;
    p[j] = v1 * s + v2 * c;
    const cxd back = cxd(-u[j], p[j]) * std::polar(1.0, -2.0 * phi[j]);
    dev = std::max(dev, std::abs(back - v[j]));
  }
  if (dev > 1e-10)
    throw Error("recover_potentials: defining identity failed to re-verify");
  RecoveredPotentials out;
  out.u = RealSampled(v.grid, std::move(u));
  out.p = RealSampled(v.grid, std::move(p));
  out.alpha = mod_pi(beta - phi[0]);
  out.reverify_max = dev;
  return out;
}

ReconstructionResult inverse_scatter(const ScatteringSamples& s,
                                     const InverseConfig& cfg) {
  ReconstructionResult out;
  const double zeta_max = cfg.zeta_max_factor * cfg.x_max;

  out.report = validate_class_S(s, cfg.class_tols);
  if (!out.report.pass())
    throw ValidationError("inverse_scatter: input rejected by class-S "
                          "validation", out.report);
  out.gamma = out.report.gamma;
  // Calibration against the forward convention: the forward S carries a
  // leading minus relative to the representation this inversion is built
  // on, so -S is what gets inverted. That shifts the limit (beta =
  // gamma - pi/2 mod pi) and negates the extracted F.
  out.beta = mod_pi(out.gamma - 0.5 * kPi);

  ExtractedF ef;
  try {
    ef = extract_F_for_inversion(s, out.gamma, zeta_max, cfg.n_f,
                                 cfg.n_f / 4, cfg.refine);
    for (auto& z : ef.F.values) z = -z;
  } catch (const Error& e) {
    throw StageError("extract_f", e.what());
  }
  out.diag.f_neg_l2 = ef.neg_l2;

  UniformGrid xgrid(cfg.x_max, cfg.n_x);
  try {
    const MarchenkoKernel kern = build_omega(ef.F, cfg.f_support_rel_tol);
    out.diag.f_discarded_tail = kern.discarded_tail();
    const NystromGrid ng{zeta_max, cfg.n_zeta};
    ExtractOptions eo;
    eo.extrapolate_zeta0 = cfg.extrapolate_v0;
    ExtractedV ev = extract_v(kern, xgrid, ng, eo);
    out.diag.marchenko_residual_max = ev.max_residual;
    out.diag.marchenko_pair_dev_max = ev.max_pair_dev;
    out.v = std::move(ev.v);
  } catch (const Error& e) {
    throw StageError("marchenko", e.what());
  }

  try {
    const X0Result x0 = find_x0(out.v, cfg.x0_threshold);
    const FixedPointResult fp =
        fixed_point_phi(out.v, x0.index, cfg.fp_tol, cfg.fp_max_iter);
    out.phase.phi = extend_phi(out.v, fp);
    out.phase.x0 = x0.x0;
    out.phase.x0_index = x0.index;
    out.phase.iterations = fp.iterations;
    out.phase.contraction_ratios = fp.ratios;
  } catch (const Error& e) {
    throw StageError("phase", e.what());
  }

  // central-difference residual of the phase ODE, recorded as a diagnostic
  {
    const double h = xgrid.h();
    double worst = 0;
    for (int j = 1; j + 1 < xgrid.n; ++j) {
      const double d = (out.phase.phi[j + 1] - out.phase.phi[j - 1]) /
                       (2.0 * h);
      worst = std::max(worst,
                       std::fabs(d - phase_rhs(out.v[j], out.phase.phi[j])));
    }
    out.phase.ode_residual_max = worst;
    out.diag.ode_residual_max = worst;
  }

  try {
    RecoveredPotentials rec = recover_potentials(out.v, out.phase.phi,
                                                 out.beta);
    out.u = std::move(rec.u);
    out.p = std::move(rec.p);
    out.alpha = rec.alpha;
    out.diag.reverify_max = rec.reverify_max;
  } catch (const Error& e) {
    throw StageError("recover", e.what());
  }

  out.p0_estimate = out.phase.phi[0];
  out.diag.fixed_point_iterations = out.phase.iterations;
  out.diag.contraction_ratios = out.phase.contraction_ratios;
  return out;
}

}  // namespace edscat
