#include "edscat/scatdata.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edscat/numerics.hpp"

namespace edscat {
namespace {

std::vector<cxd> shifted_values(const ScatteringSamples& s, double gamma) {
  if (s.invalid_count > 0)
    throw DomainError("extract_F: masked nodes in scattering samples");
  const cxd limit = std::polar(1.0, 2.0 * gamma);
  std::vector<cxd> g(s.values.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = s.values[j] - limit;
  return g;
}

}  // namespace

GammaEstimate extract_gamma(const ScatteringSamples& s, double band_fraction,
                            double spread_tol) {
  const int n = static_cast<int>(s.values.size());
  if (n < 4) throw DomainError("extract_gamma: too few samples");
  const int band = std::max(1, static_cast<int>(0.5 * band_fraction * n));
  cxd mean{};
  for (int j = 0; j < band; ++j) mean += s.values[j] + s.values[n - 1 - j];
  mean /= 2.0 * band;
  double spread = 0;
  for (int j = 0; j < band; ++j)
    spread = std::max({spread, std::abs(s.values[j] - mean),
                       std::abs(s.values[n - 1 - j] - mean)});
  if (spread > spread_tol)
    throw TailError("extract_gamma: S has not settled at the grid ends "
                    "(k_max too small)");
  GammaEstimate out;
  out.gamma = mod_pi(0.5 * std::arg(mean));
  out.spread = spread;
  return out;
}

ExtractedF extract_F(const ScatteringSamples& s, double gamma,
                     double zeta_max, int n_zeta, int n_neg) {
  const std::vector<cxd> g = shifted_values(s, gamma);
  ExtractedF out;
  const UniformGrid zg(zeta_max, n_zeta);
  std::vector<cxd> f(n_zeta);
  for (int j = 0; j < n_zeta; ++j)
    f[j] = fourier_integral(g, s.kgrid, zg.node(j));
  out.F = CplxSampled(zg, std::move(f));

  const double h = zg.h();
  double l1 = 0, l2 = 0;
  for (int j = 0; j + 1 < n_zeta; ++j) {
    l1 += 0.5 * h * (std::abs(out.F[j]) + std::abs(out.F[j + 1]));
    l2 += 0.5 * h * (std::norm(out.F[j]) + std::norm(out.F[j + 1]));
  }
  out.pos_l1 = l1;
  out.pos_l2 = std::sqrt(l2);

  out.F_neg.resize(std::max(0, n_neg));
  double neg2 = 0;
  for (int j = 0; j < n_neg; ++j) {
    out.F_neg[j] = fourier_integral(g, s.kgrid, -(j + 1) * h);
    neg2 += h * std::norm(out.F_neg[j]);
  }
  out.neg_l2 = std::sqrt(neg2);
  return out;
}

namespace {

struct JumpFit {
  cxd j0, j1, j2;  // jumps of F, F', F'' across zeta = 0
};

// The smooth part of F transforms with fast decay in k, so the outer-band
// behaviour of S - e^{2i gamma} is set by the origin kinks:
//   T[F](k) = -J0 w - J1' ... = c1 w + c2 w^2 + c3 w^3 + O(w^4),
// with w = 1/(2ik), c1 = -J0, c2 = +J1, c3 = -J2 (checked against the
// e^{-zeta} pair, whose transform is -w - w^2 - w^3 - ...). A least-squares
// fit of (c1, c2, c3) over the middle outer band recovers the jumps without
// the curvature bias a zeta-space extrapolation would have.
JumpFit fit_origin_jumps(const KGrid& kg, const std::vector<cxd>& g) {
  cxd h[3][3] = {};
  cxd rhs[3] = {};
  const double lo = 0.25 * kg.k_max, hi = 0.75 * kg.k_max;
  for (int j = 0; j < kg.n; ++j) {
    const double k = kg.node(j);
    if (std::fabs(k) < lo || std::fabs(k) > hi) continue;
    const cxd w = 1.0 / cxd(0, 2.0 * k);
    const cxd basis[3] = {w, w * w, w * w * w};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) h[r][c] += std::conj(basis[r]) * basis[c];
      rhs[r] += std::conj(basis[r]) * g[j];
    }
  }
  // 3x3 complex normal equations, plain elimination
  cxd m[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = h[r][c];
    m[r][3] = rhs[r];
  }
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    for (int cc = 0; cc < 4; ++cc) std::swap(m[c][cc], m[p][cc]);
    for (int r = c + 1; r < 3; ++r) {
      const cxd f = m[r][c] / m[c][c];
      for (int cc = c; cc < 4; ++cc) m[r][cc] -= f * m[c][cc];
    }
  }
  cxd c3[3];
  for (int r = 2; r >= 0; --r) {
    cxd acc = m[r][3];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * c3[c];
    c3[r] = acc / m[r][r];
  }
  return {-c3[0], c3[1], -c3[2]};
}

}  // namespace

ExtractedF extract_F_for_inversion(const ScatteringSamples& s, double gamma,
                                   double zeta_max, int n_zeta, int n_neg,
                                   const OriginRefinement& refine) {
  if (!refine.enabled)
    return extract_F(s, gamma, zeta_max, n_zeta, n_neg);

  std::vector<cxd> g = shifted_values(s, gamma);
  const JumpFit jumps = fit_origin_jumps(s.kgrid, g);

  // one-sided model M(zeta) = (b + a zeta + q zeta^2) e^{zeta/lambda} on
  // zeta < 0 carrying the same origin jumps as F, so F - M is C^2 across 0;
  // M vanishes on zeta > 0, hence the payload converges to the one-sided
  // representative. Transform: b/mu - a/mu^2 + 2q/mu^3, mu = 1/lambda + 2ik.
  const double lam = refine.model_scale;
  const cxd b = -jumps.j0;
  const cxd a = -jumps.j1 - b / lam;
  const cxd q = 0.5 * (-jumps.j2 - 2.0 * a / lam - b / (lam * lam));

  const double kmax = s.kgrid.k_max;
  const double edge = (1.0 - refine.taper_fraction) * kmax;
  for (int j = 0; j < s.kgrid.n; ++j) {
    const double k = s.kgrid.node(j);
    const cxd mu = 1.0 / lam + cxd(0, 2.0 * k);
    g[j] -= b / mu - a / (mu * mu) + 2.0 * q / (mu * mu * mu);
    const double t = (std::fabs(k) - edge) / (kmax - edge);
    if (t > 0) g[j] *= 0.5 * (1.0 + std::cos(kPi * std::min(1.0, t)));
  }

  ExtractedF out;
  const UniformGrid zg(zeta_max, n_zeta);
  std::vector<cxd> f(n_zeta);
  for (int j = 0; j < n_zeta; ++j)
    f[j] = fourier_integral(g, s.kgrid, zg.node(j));
  out.F = CplxSampled(zg, std::move(f));

  const double h = zg.h();
  double l1 = 0, l2 = 0;
  for (int j = 0; j + 1 < n_zeta; ++j) {
    l1 += 0.5 * h * (std::abs(out.F[j]) + std::abs(out.F[j + 1]));
    l2 += 0.5 * h * (std::norm(out.F[j]) + std::norm(out.F[j + 1]));
  }
  out.pos_l1 = l1;
  out.pos_l2 = std::sqrt(l2);

  // diagnostics on the negative side stay raw (they measure the two-sided
  // structure itself)
  const std::vector<cxd> raw = shifted_values(s, gamma);
  out.F_neg.resize(std::max(0, n_neg));
  double neg2 = 0;
  for (int j = 0; j < n_neg; ++j) {
    out.F_neg[j] = fourier_integral(raw, s.kgrid, -(j + 1) * h);
    neg2 += h * std::norm(out.F_neg[j]);
  }
  out.neg_l2 = std::sqrt(neg2);
  return out;
}

ClassSReport validate_class_S(const ScatteringSamples& s,
                              const ClassSTolerances& tols, double zeta_max,
                              int n_zeta) {
  ClassSReport rep;
  rep.unimod_dev = s.max_unimod_dev();
  rep.pass_unimodular =
      s.invalid_count == 0 && rep.unimod_dev <= tols.unimodularity;

  try {
    const auto w = winding_number(s);
    rep.winding = w.winding;
    rep.winding_raw = w.raw;
    rep.limit_gap = w.limit_gap;
    rep.pass_winding = (w.winding == 0);
  } catch (const Error&) {
    rep.winding_resolved = false;
    rep.pass_winding = false;
  }

  try {
    const auto ge =
        extract_gamma(s, tols.band_fraction, tols.tail_spread);
    rep.gamma = ge.gamma;
    rep.tail_spread = ge.spread;
    rep.pass_tails = true;
  } catch (const Error&) {
    rep.pass_tails = false;
  }

  if (rep.pass_tails && s.invalid_count == 0) {
    const auto f = extract_F(s, rep.gamma, zeta_max, n_zeta, n_zeta / 4);
    rep.f_l1 = f.pos_l1;
    rep.f_l2 = f.pos_l2;
    rep.f_neg_l2 = f.neg_l2;
  }
  return rep;
}

ScatteringSamples load_scattering_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open scattering file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw DomainError("scattering file is empty: " + path);
  // tolerate trailing CR and surrounding spaces in the header
  std::string hdr;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) hdr += c;
  if (hdr != "k,re_S,im_S")
    throw DomainError("scattering file needs header 'k,re_S,im_S': " + path);

  std::vector<double> ks;
  std::vector<cxd> vals;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string cell;
    double col[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ','))
        throw DomainError("scattering file: short row");
      col[c] = std::stod(cell);
    }
    ks.push_back(col[0]);
    vals.emplace_back(col[1], col[2]);
  }
  const int n = static_cast<int>(ks.size());
  if (n < 2 || n % 2 != 0)
    throw DomainError("scattering file: need an even number (>= 2) of rows");

  const double dk = ks[1] - ks[0];
  if (!(dk > 0)) throw DomainError("scattering file: k must increase");
  const KGrid grid(0.5 * n * dk, n);
  const double tol = 1e-9 * std::max(1.0, grid.k_max);
  for (int j = 0; j < n; ++j)
    if (std::fabs(ks[j] - grid.node(j)) > tol)
      throw DomainError(
          "scattering file: k grid must be uniform and symmetric about 0 "
          "with half-step offsets");

  ScatteringSamples out;
  out.kgrid = grid;
  out.values = std::move(vals);
  out.valid.assign(n, 1);
  out.min_denominator = std::numeric_limits<double>::quiet_NaN();
  return out;
}

void save_scattering_csv(const std::string& path,
                         const ScatteringSamples& s) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write scattering file: " + path);
  out << "k,re_S,im_S\n";
  char buf[128];
  for (int j = 0; j < s.kgrid.n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.kgrid.node(j),
                  s.values[j].real(), s.values[j].imag());
    out << buf;
  }
  if (!out) throw DomainError("write failed: " + path);
}

}  // namespace edscat
