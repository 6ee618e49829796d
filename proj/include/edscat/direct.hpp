#pragma once
// Jost solutions of the canonical ZS-AKNS system and the forward map
// (u, p, alpha) -> S(k): de-oscillated integration of the Jost matrix,
// the scattering function on a symmetric k grid, Schrodinger-level Jost
// quantities, and winding numbers.

#include <optional>
#include <vector>

#include "edscat/transform.hpp"
#include "edscat/types.hpp"

namespace edscat {

struct JostOptions {
  bool record_profile = false;
  // substep length <= step_cap / max(1, |k|), so the e^{+-2ikx} kernel
  // factor stays resolved at large |k|
  double step_cap = 0.2;
};

// Psi(0, k) of the matrix Jost solution, plus (optionally) the de-oscillated
// profile M(x_j, k) = e^{-ikx sigma3} Psi(x_j, k) at the grid nodes.
struct JostMatrix {
  double k = 0;
  Mat2 psi0;
  std::optional<std::vector<Mat2>> profile;

  double det_dev() const { return std::abs(psi0.det() - 1.0); }
  double sym_dev() const {
    return std::max(std::abs(psi0.a12 - std::conj(psi0.a21)),
                    std::abs(psi0.a22 - std::conj(psi0.a11)));
  }
};

// Integrates M' = -[[0, v e^{-2ikx}], [conj(v) e^{2ikx}, 0]] M backward from
// M(x_max) = I with a fixed-step 4th-order one-step method (two-point Gauss
// Magnus; the closed-form trace-free exponential keeps det M = 1 and the
// sigma1 column symmetry exact). psi0 = M(0) = Psi(0, k).
JostMatrix jost_matrix(const ZsAknsProblem& zp, double k,
                       const JostOptions& opts = {});

struct ScatteringSamples {
  KGrid kgrid;
  std::vector<cxd> values;
  std::vector<char> valid;  // node masked when the denominator degenerates
  double beta = std::numeric_limits<double>::quiet_NaN();
  int invalid_count = 0;
  double min_denominator = 0;
  // structural diagnostics accumulated over the grid
  double max_det_dev = 0;
  double max_sym_dev = 0;
  double max_unimod_dev() const;
};

// S(k) = -(e^{i beta} psi11 + e^{-i beta} psi21) /
//         (e^{-i beta} conj(psi11) + e^{i beta} conj(psi21)) at x = 0.
// Numerator and denominator are conjugates up to sign, so |S| = 1 to
// rounding at every node.
ScatteringSamples scattering_function(const ZsAknsProblem& zp,
                                      const KGrid& kgrid,
                                      const JostOptions& opts = {});

struct SchrodingerJost {
  cxd f0;        // f(0, k)
  cxd f0_quasi;  // f^{[1]}(0, k) = k y_1(0, k)
};

// Jost solution data of the energy-dependent Schrodinger equation via the
// first ZS-AKNS Jost column, y = U e^{i phi sigma3} psi_1.
SchrodingerJost schrodinger_jost(const SchrodingerProblem& sp, double k,
                                 const JostOptions& opts = {});

// f-profile y_2(x_j, k) on the grid, for differencing oracles.
CplxSampled jost_f_profile(const SchrodingerProblem& sp, double k,
                           const JostOptions& opts = {});

struct JostFunctionValue {
  cxd s;        // sin(alpha) f^{[1]}(0,k) + k cos(alpha) f(0,k)
  cxd s_dirac;  // k (sin(alpha) y1(0,k) + cos(alpha) y2(0,k))
};

JostFunctionValue jost_function(const SchrodingerProblem& sp, double k,
                                const JostOptions& opts = {});

struct WindingResult {
  int winding = 0;
  double raw = 0;            // unwrapped phase change / 2 pi
  double limit_gap = 0;      // |S(+K) - S(-K)|
  bool limits_warning = false;
};

// Winding number by phase unwrapping across the grid. Adjacent increments
// must stay below pi/2 in magnitude or the grid is declared under-resolved.
WindingResult winding_number(const ScatteringSamples& s);

}  // namespace edscat
