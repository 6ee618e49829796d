#include "edscat/direct.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace edscat {
namespace {

// Gauss-Legendre nodes on (0,1) for the 4th-order Magnus step.
constexpr double kGauss1 = 0.5 - 0.28867513459481287;  // 1/2 - sqrt(3)/6
constexpr double kGauss2 = 0.5 + 0.28867513459481287;
constexpr double kRoot3Over12 = 0.14433756729740643;

// exp of the trace-free matrix [[d, b], [conj-symmetric c], [-d]] in closed
// form: exp(O) = cosh(mu) I + sinh(mu)/mu O, mu^2 = d^2 + bc.
inline Mat2 expm_tracefree(cxd d, cxd b, cxd c) {
  const cxd mu2 = d * d + b * c;
  cxd ch, sc;
  if (std::abs(mu2) < 1e-12) {
    ch = 1.0 + mu2 * (0.5 + mu2 / 24.0);
    sc = 1.0 + mu2 * (1.0 / 6.0 + mu2 / 120.0);
  } else {
    const cxd mu = std::sqrt(mu2);
    ch = std::cosh(mu);
    sc = std::sinh(mu) / mu;
  }
  return {ch + sc * d, sc * b, sc * c, ch - sc * d};
}

// Backward sweep of the de-oscillated Jost system. The substep schedule
// (cells split at jump points, v at the two Gauss nodes of every substep)
// depends only on the per-cell substep count, so it is cached and shared by
// every k that maps to the same count.
class JostIntegrator {
 public:
  JostIntegrator(const ZsAknsProblem& zp, const JostOptions& opts)
      : zp_(zp), opts_(opts) {}

  int substeps_for(double k) const {
    const double h = zp_.v.grid.h();
    const double need = h * std::max(1.0, std::fabs(k)) / opts_.step_cap;
    if (need > 4096.0)
      throw IntegrationError("jost_matrix: step count overflow");
    return std::max(1, static_cast<int>(std::ceil(need - 1e-12)));
  }

  Mat2 sweep(double k, std::vector<Mat2>* profile) const {
    const Table& tab = table_for(substeps_for(k));
    const int n = zp_.v.grid.n;
    Mat2 m = Mat2::identity();
    if (profile) {
      profile->assign(n, Mat2::identity());
    }
    std::size_t s = 0;
    for (int cell = n - 2; cell >= 0; --cell) {
      const std::size_t end = tab.cell_end[cell];
      for (; s < end; ++s) {
        const Step& st = tab.steps[s];
        const double x1 = st.x_right - kGauss1 * st.delta;
        const double x2 = st.x_right - kGauss2 * st.delta;
        const cxd a1 = st.v1 * std::polar(1.0, -2.0 * k * x1);
        const cxd a2 = st.v2 * std::polar(1.0, -2.0 * k * x2);
        // Magnus: O = (h/2)(A1+A2) + (sqrt(3)/12) h^2 [A2, A1], h = -delta,
        // with A_i = -[[0, a_i], [conj a_i, 0]]; the commutator is diagonal.
        const cxd off = 0.5 * st.delta * (a1 + a2);
        const cxd diag = kRoot3Over12 * st.delta * st.delta *
                         (a2 * std::conj(a1) - a1 * std::conj(a2));
        m = expm_tracefree(diag, off, std::conj(off)) * m;
      }
      if (profile) (*profile)[cell] = m;
    }
    if (!std::isfinite(m.a11.real()) || !std::isfinite(m.a11.imag()) ||
        !std::isfinite(m.a21.real()) || !std::isfinite(m.a21.imag()))
      throw IntegrationError("jost_matrix: non-finite state");
    return m;
  }

 private:
  struct Step {
    double x_right, delta;
    cxd v1, v2;
  };
  struct Table {
    std::vector<Step> steps;
    std::vector<std::size_t> cell_end;  // steps consumed once cell j is done
  };

  const Table& table_for(int s) const {
    auto it = tables_.find(s);
    if (it != tables_.end()) return it->second;
    Table tab;
    const UniformGrid grid = zp_.v.grid;
    const double h = grid.h();
    tab.cell_end.resize(grid.n - 1);
    for (int j = grid.n - 2; j >= 0; --j) {
      const double left = grid.node(j), right = grid.node(j + 1);
      // piece boundaries: split the cell at jump points of v
      double hi = right;
      for (auto bp = zp_.breakpoints.rbegin(); bp != zp_.breakpoints.rend();
           ++bp) {
        if (*bp < hi - 1e-13 && *bp > left + 1e-13) {
          append_piece(tab, hi, *bp, s, h);
          hi = *bp;
        }
      }
      append_piece(tab, hi, left, s, h);
      tab.cell_end[j] = tab.steps.size();
    }
    return tables_.emplace(s, std::move(tab)).first->second;
  }

  void append_piece(Table& tab, double right, double left, int s,
                    double h_cell) const {
    const double len = right - left;
    const int m = std::max(
        1, static_cast<int>(std::ceil(s * len / h_cell - 1e-12)));
    const double d = len / m;
    for (int q = 0; q < m; ++q) {
      Step st;
      st.x_right = right - q * d;
      st.delta = d;
      st.v1 = zp_.v_at(st.x_right - kGauss1 * d);
      st.v2 = zp_.v_at(st.x_right - kGauss2 * d);
      tab.steps.push_back(st);
    }
  }

  const ZsAknsProblem& zp_;
  JostOptions opts_;
  mutable std::map<int, Table> tables_;
};

struct JostColumn {
  cxd y1, y2;  // Dirac-form Jost column at x = 0
};

JostColumn jost_column0(const ZsAknsProblem& zp, double k,
                        const JostOptions& opts) {
  const JostMatrix jm = jost_matrix(zp, k, opts);
  const cxd e = std::polar(1.0, zp.p0);
  const cxd z1 = e * jm.psi0.a11, z2 = std::conj(e) * jm.psi0.a21;
  return {cxd(0, 1) * (z1 - z2), z1 + z2};
}

}  // namespace

JostMatrix jost_matrix(const ZsAknsProblem& zp, double k,
                       const JostOptions& opts) {
  JostIntegrator integ(zp, opts);
  JostMatrix out;
  out.k = k;
  if (opts.record_profile) {
    std::vector<Mat2> prof;
    out.psi0 = integ.sweep(k, &prof);
    out.profile = std::move(prof);
  } else {
    out.psi0 = integ.sweep(k, nullptr);
  }
  return out;
}

double ScatteringSamples::max_unimod_dev() const {
  double worst = 0;
  for (std::size_t j = 0; j < values.size(); ++j)
    if (valid.empty() || valid[j])
      worst = std::max(worst, std::fabs(std::abs(values[j]) - 1.0));
  return worst;
}

ScatteringSamples scattering_function(const ZsAknsProblem& zp,
                                      const KGrid& kgrid,
                                      const JostOptions& opts) {
  JostIntegrator integ(zp, opts);
  ScatteringSamples out;
  out.kgrid = kgrid;
  out.beta = zp.beta;
  out.values.resize(kgrid.n);
  out.valid.assign(kgrid.n, 1);
  out.min_denominator = std::numeric_limits<double>::infinity();
  const cxd eb = std::polar(1.0, zp.beta);

  for (int j = 0; j < kgrid.n; ++j) {
    const Mat2 m0 = integ.sweep(kgrid.node(j), nullptr);
    out.max_det_dev = std::max(out.max_det_dev, std::abs(m0.det() - 1.0));
    out.max_sym_dev =
        std::max({out.max_sym_dev, std::abs(m0.a12 - std::conj(m0.a21)),
                  std::abs(m0.a22 - std::conj(m0.a11))});
    const cxd n0 = eb * m0.a11 + std::conj(eb) * m0.a21;
    const double mag = std::abs(n0);
    out.min_denominator = std::min(out.min_denominator, mag);
    if (mag < 1e-12) {
      out.valid[j] = 0;
      ++out.invalid_count;
      out.values[j] = cxd(0, 0);
      continue;
    }
    out.values[j] = -n0 / std::conj(n0);
  }
  return out;
}

SchrodingerJost schrodinger_jost(const SchrodingerProblem& sp, double k,
                                 const JostOptions& opts) {
  if (k == 0) throw DomainError("schrodinger_jost: k must be nonzero");
  const ZsAknsProblem zp = to_zsakns(sp);
  const JostColumn y = jost_column0(zp, k, opts);
  return {y.y2, k * y.y1};
}

CplxSampled jost_f_profile(const SchrodingerProblem& sp, double k,
                           const JostOptions& opts) {
  if (k == 0) throw DomainError("jost_f_profile: k must be nonzero");
  const ZsAknsProblem zp = to_zsakns(sp);
  JostOptions o = opts;
  o.record_profile = true;
  const JostMatrix jm = jost_matrix(zp, k, o);
  const UniformGrid grid = zp.v.grid;
  std::vector<cxd> f(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const cxd e = std::polar(1.0, zp.phi[j] + k * grid.node(j));
    // y2 = (U e^{i phi sigma3} e^{ikx sigma3} m)_2 with U row 2 = (1, 1)
    f[j] = e * (*jm.profile)[j].a11 + std::conj(e) * (*jm.profile)[j].a21;
  }
  return CplxSampled(grid, std::move(f));
}

JostFunctionValue jost_function(const SchrodingerProblem& sp, double k,
                                const JostOptions& opts) {
  if (k == 0) throw DomainError("jost_function: k must be nonzero");
  const ZsAknsProblem zp = to_zsakns(sp);
  const JostColumn y = jost_column0(zp, k, opts);
  const double sa = std::sin(sp.alpha), ca = std::cos(sp.alpha);
  JostFunctionValue out;
  // Schrodinger route: assemble from (f, f^{[1]}) = (y2, k y1)
  const cxd f0 = y.y2, f0q = k * y.y1;
  out.s = sa * f0q + k * ca * f0;
  // Dirac route: k (sin a y1 + cos a y2); identical up to rounding
  out.s_dirac = k * (sa * y.y1 + ca * y.y2);
  return out;
}

WindingResult winding_number(const ScatteringSamples& s) {
  const int n = static_cast<int>(s.values.size());
  if (n < 2) throw DomainError("winding_number: need at least two samples");
  if (s.invalid_count > 0)
    throw DomainError("winding_number: masked nodes in scattering samples");
  double total = 0;
  for (int j = 0; j + 1 < n; ++j) {
    const double inc = std::arg(s.values[j + 1] * std::conj(s.values[j]));
    if (!(std::fabs(inc) < 0.5 * kPi))
      throw UnderResolvedError(
          "winding_number: phase increment >= pi/2 between adjacent nodes");
    total += inc;
  }
  WindingResult out;
  out.raw = total / (2.0 * kPi);
  out.winding = static_cast<int>(std::lround(out.raw));
  out.limit_gap = std::abs(s.values.back() - s.values.front());
  out.limits_warning = out.limit_gap > 0.1;
  return out;
}

}  // namespace edscat
