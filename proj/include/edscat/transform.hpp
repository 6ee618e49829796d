#pragma once
// The three equivalent problem forms and the transformation chain between
// them: the half-line Schrodinger problem with energy-linear potential in
// Riccati parameterization, the non-canonical Dirac system, and the canonical
// ZS-AKNS form the solvers operate on.
//
// The Riccati representative u is the stored object; q = u' + u^2 is never
// materialized (for step-like u it is a genuine distribution).

#include <functional>
#include <optional>
#include <vector>

#include "edscat/numerics.hpp"
#include "edscat/types.hpp"

namespace edscat {

// Constant matrices of the chain, named as used throughout:
//   y = U z,   z = exp(i phi sigma3) w.
inline const Mat2 kU{cxd(0, 1), cxd(0, -1), cxd(1, 0), cxd(1, 0)};
inline const Mat2 kSigma1{0.0, 1.0, 1.0, 0.0};
inline const Mat2 kSigma2{0.0, 1.0, -1.0, 0.0};
inline const Mat2 kSigma3{1.0, 0.0, 0.0, -1.0};

// Optional closed-form description of a sampled coefficient. When present,
// integrators evaluate between grid nodes exactly and split steps at the
// listed jump locations.
struct ScalarField {
  std::function<double(double)> f;     // pointwise value
  std::function<double(double)> tail;  // integral over [x, infinity)
  std::vector<double> breakpoints;     // jump locations, ascending
};

// The triple (u, p, alpha): Riccati representative, energy-linear potential,
// boundary parameter in [0, pi).
struct SchrodingerProblem {
  RealSampled u;
  RealSampled p;
  double alpha = 0;
  std::optional<ScalarField> u_field;
  std::optional<ScalarField> p_field;
};

// Non-canonical Dirac form: sigma2 y' + P y = k y with
// P = [[0, -u], [-u, 2p]].
struct DiracSystem {
  RealSampled u;
  RealSampled p;
  Mat2 potential_at(int j) const {
    return {0.0, -u[j], -u[j], 2.0 * p[j]};
  }
};

DiracSystem dirac_system(const SchrodingerProblem& sp);

// Canonical ZS-AKNS data: complex potential v, phase phi(x) = tail integral
// of p, its value p0 = phi(0), and the rotated boundary parameter beta.
struct ZsAknsProblem {
  CplxSampled v;
  RealSampled phi;
  double beta = 0;
  double p0 = 0;
  std::function<cxd(double)> v_eval;  // empty -> cubic interpolation of v
  std::vector<double> breakpoints;
  bool tail_ok = true;
  double tail_abs = 0;

  cxd v_at(double x) const { return v_eval ? v_eval(x) : interp4(v, x); }
  bool analytic() const { return static_cast<bool>(v_eval); }
};

struct PhiResult {
  RealSampled phi;
  double p0 = 0;
  bool tail_ok = true;
  double tail_abs = 0;
};

// phi(x_j) = integral of p over [x_j, x_max]; phi(x_max) = 0.
PhiResult phi_from_p(const RealSampled& p, double tail_rel_tol = 1e-8);

// Build the canonical form: v = (-u + i p) e^{-2 i phi},
// beta = (alpha + p0) mod pi.
ZsAknsProblem to_zsakns(const SchrodingerProblem& sp);

// Quasi-derivative y' - u y with central differences inside and one-sided
// second-order stencils at the ends. Grids must match.
CplxSampled quasi_derivative(const CplxSampled& y, const RealSampled& u);

// Validation of the whole chain: maps the ZS-AKNS Jost column through
// y = U e^{i phi sigma3} e^{i k x sigma3} m and evaluates the Dirac system
// residual sigma2 y' + P y - k y at interior nodes, differencing only the
// slowly varying profile m so the free problem is exact. Returns the max
// norm; expected O(h^2) (1 + |k|^2) on smooth data.
double chain_residual(const SchrodingerProblem& sp, double k);

}  // namespace edscat
