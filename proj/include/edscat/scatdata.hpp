#pragma once
// The admissible-class side of the problem: validation of candidate
// scattering functions (unimodularity, winding, settled limits) and
// extraction of the representation data (gamma, F) with
// S(k) = e^{2 i gamma} + integral of F(zeta) e^{2 i k zeta} d zeta.

#include <string>
#include <vector>

#include "edscat/direct.hpp"
#include "edscat/types.hpp"

namespace edscat {

struct ClassSTolerances {
  double unimodularity = 1e-6;
  double tail_spread = 0.2;
  double band_fraction = 0.1;  // outer fraction of nodes used for the limit
};

struct ClassSReport {
  double unimod_dev = 0;
  int winding = 0;
  double winding_raw = 0;
  bool winding_resolved = true;
  double gamma = 0;
  double tail_spread = 0;
  double limit_gap = 0;
  double f_l1 = 0, f_l2 = 0;
  double f_neg_l2 = 0;  // mass on zeta < 0; reported, not gated
  bool pass_unimodular = false;
  bool pass_winding = false;
  bool pass_tails = false;
  bool pass() const { return pass_unimodular && pass_winding && pass_tails; }
};

// Rejection of out-of-class input; carries the full report.
struct ValidationError : Error {
  ClassSReport report;
  ValidationError(const std::string& msg, ClassSReport rep)
      : Error(msg), report(std::move(rep)) {}
};

struct GammaEstimate {
  double gamma = 0;   // in [0, pi)
  double spread = 0;  // max |S - mean| over the outer bands
};

// gamma = arg(mean of S over the outer band at both ends) / 2, reduced into
// [0, pi). Throws TailError when the band has not settled (spread too big).
GammaEstimate extract_gamma(const ScatteringSamples& s,
                            double band_fraction = 0.1,
                            double spread_tol = 0.2);

struct ExtractedF {
  CplxSampled F;              // zeta >= 0 payload
  std::vector<cxd> F_neg;     // diagnostic samples at zeta = -h, -2h, ...
  double pos_l1 = 0, pos_l2 = 0;
  double neg_l2 = 0;
};

// F(zeta) = (1/pi) integral of (S(k) - e^{2 i gamma}) e^{-2 i k zeta} dk over
// the sampled window, on zeta in [0, zeta_max] plus a diagnostic band on the
// negative side.
ExtractedF extract_F(const ScatteringSamples& s, double gamma,
                     double zeta_max, int n_zeta, int n_neg = 0);

struct OriginRefinement {
  bool enabled = true;
  double model_scale = 1.0;      // decay scale of the subtracted jump model
  double taper_fraction = 0.25;  // outer k fraction rolled off
};

// Inversion-side variant of extract_F. The representation's F is generally
// two-sided with jumps of F, F', F'' at zeta = 0, and a finite k window
// turns those into Dirichlet ringing across the whole zeta axis. This
// variant reads the jumps off the outer-band 1/k asymptotics of
// S - e^{2i gamma}, subtracts a one-sided exponential model carrying the
// same jumps (closed-form transform), and tapers the outer k band; the model
// vanishes on zeta > 0, so the payload converges to the one-sided
// representative with the ringing suppressed. The negative band diagnostics
// stay raw.
ExtractedF extract_F_for_inversion(const ScatteringSamples& s, double gamma,
                                   double zeta_max, int n_zeta, int n_neg,
                                   const OriginRefinement& refine);

// Never throws; reports every criterion with the configured tolerances.
ClassSReport validate_class_S(const ScatteringSamples& s,
                              const ClassSTolerances& tols = {},
                              double zeta_max = 8.0, int n_zeta = 257);

struct ScatteringData {
  ScatteringSamples samples;
  double gamma = 0;
  ExtractedF F;
  ClassSReport report;
};

// Scattering-data CSV: header "k,re_S,im_S", k strictly increasing, uniform
// and symmetric about 0 on half-integer offsets.
ScatteringSamples load_scattering_csv(const std::string& path);
void save_scattering_csv(const std::string& path,
                         const ScatteringSamples& s);

}  // namespace edscat
