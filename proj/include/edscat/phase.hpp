#pragma once
// Recovery of the phase phi from v by contraction mapping on the tail plus
// backward integration of phi' = -(Re v) sin 2phi - (Im v) cos 2phi, then
// the algebraic recovery of (u, p, alpha); orchestration of the whole
// inverse pipeline S -> (u, p, alpha).

#include <vector>

#include "edscat/marchenko.hpp"
#include "edscat/scatdata.hpp"
#include "edscat/transform.hpp"
#include "edscat/types.hpp"

namespace edscat {

struct X0Result {
  int index = 0;
  double x0 = 0;
  double tail_at_x0 = 0;  // integral of |Re v| + |Im v| over [x0, x_max]
};

// Smallest grid node whose tail integral of |Re v| + |Im v| falls strictly
// below the contraction threshold. Throws TailError when the tail never
// settles before the last node (x_max too small).
X0Result find_x0(const CplxSampled& v, double threshold = 0.25);

struct FixedPointResult {
  std::vector<double> phi_tail;  // on nodes x0_index .. n-1 of v's grid
  int x0_index = 0;
  int iterations = 0;
  std::vector<double> ratios;  // successive-iterate ratios in the Y norm
};

// Picard iteration of (Tf)(x) = integral over [x, x_max] of
// (Re v) sin 2f + (Im v) cos 2f, started from f = 0, measured in the Y norm
// (total variation of the update on the grid).
FixedPointResult fixed_point_phi(const CplxSampled& v, int x0_index,
                                 double tol = 1e-12, int max_iter = 200);

// Extend the tail solution to [0, x_max] by backward fixed-step RK4 (one
// grid cell per step, v at midpoints by cubic interpolation). The
// concatenation is continuous at x0 by construction.
RealSampled extend_phi(const CplxSampled& v, const FixedPointResult& tail);

struct RecoveredPotentials {
  RealSampled u, p;
  double alpha = 0;
  double reverify_max = 0;  // max |(-u + i p) e^{-2 i phi} - v|
};

// u = -(Re v) cos 2phi + (Im v) sin 2phi,
// p =  (Re v) sin 2phi + (Im v) cos 2phi, alpha = (beta - phi(0)) mod pi.
RecoveredPotentials recover_potentials(const CplxSampled& v,
                                       const RealSampled& phi, double beta);

struct PhaseSolution {
  RealSampled phi;
  double x0 = 0;
  int x0_index = 0;
  int iterations = 0;
  std::vector<double> contraction_ratios;
  double ode_residual_max = 0;
};

struct InverseConfig {
  double x_max = 16.0;
  int n_x = 2048;
  double zeta_max_factor = 2.0;  // Marchenko truncation at factor * x_max
  int n_zeta = 512;
  int n_f = 2048;  // F samples on [0, zeta_max]
  double f_support_rel_tol = 1e-9;
  double x0_threshold = 0.2;  // safety margin under the 1/4 bound
  bool extrapolate_v0 = false;
  double fp_tol = 1e-12;
  int fp_max_iter = 200;
  ClassSTolerances class_tols;
  OriginRefinement refine;  // jump-compensated F extraction at zeta = 0
};

struct ReconstructionDiagnostics {
  double marchenko_residual_max = 0;
  double marchenko_pair_dev_max = 0;
  double ode_residual_max = 0;
  double reverify_max = 0;
  double f_neg_l2 = 0;
  double f_discarded_tail = 0;
  int fixed_point_iterations = 0;
  std::vector<double> contraction_ratios;
};

struct ReconstructionResult {
  CplxSampled v;
  PhaseSolution phase;
  RealSampled u, p;
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  double p0_estimate = 0;
  ReconstructionDiagnostics diag;
  ClassSReport report;
};

// Full pipeline: class-S validation (rejection carries the report), gamma,
// the convention calibration beta = (gamma - pi/2) mod pi, F extraction,
// Marchenko solves over the x grid, tail contraction, backward extension,
// algebraic recovery. Stage failures propagate as StageError.
ReconstructionResult inverse_scatter(const ScatteringSamples& s,
                                     const InverseConfig& cfg);

}  // namespace edscat
