#pragma once
// Kernel assembly and Nystrom solution of the Marchenko equation
//   Gamma(x, zeta) + Omega(x + zeta)
//     + integral over t of Gamma(x, t) Omega(x + t + zeta) = 0,
// collocated with trapezoid weights; the ZS-AKNS potential is read off as
// v(x) = -Gamma12(x, 0) = -conj(Gamma21(x, 0)).

#include <vector>

#include "edscat/numerics.hpp"
#include "edscat/types.hpp"

namespace edscat {

// Omega(s) = [[0, conj F(s)], [F(s), 0]]; linear interpolation between
// samples and exactly zero beyond the (thresholded) support, which makes
// Gamma(x, .) vanish identically for zeta > support_end - x and lets each
// solve restrict to the active window without approximation.
class MarchenkoKernel {
 public:
  MarchenkoKernel(CplxSampled f, double support_rel_tol);

  cxd F_at(double s) const;
  Mat2 omega(double s) const {
    const cxd f = F_at(s);
    return {0.0, std::conj(f), f, 0.0};
  }
  double support_end() const { return support_end_; }
  double discarded_tail() const { return discarded_tail_; }
  const CplxSampled& F() const { return f_; }

 private:
  CplxSampled f_;
  int last_ = -1;  // last sample index kept
  double support_end_ = 0;
  double discarded_tail_ = 0;
};

MarchenkoKernel build_omega(const CplxSampled& F,
                            double support_rel_tol = 1e-9);

// Collocation grid for zeta and t: nodes j*h on [0, zeta_max].
struct NystromGrid {
  double zeta_max = 32.0;
  int n = 512;
  double h() const { return zeta_max / (n - 1); }
};

struct MarchenkoSolution {
  double x = 0;
  UniformGrid zgrid;
  // rows of Gamma(x, .) at the nodes
  std::vector<cxd> g11, g12, g21, g22;
  double residual = 0;  // max-norm of the discretized equation, resubstituted
  int active = 0;       // nodes actually solved for; the rest are exactly 0
};

// One dense solve (dimension 2 * active) shared by both nontrivial rows of
// Gamma. Throws SingularSystemError if the Nystrom system degenerates, which
// signals out-of-class input or too aggressive truncation.
MarchenkoSolution solve_marchenko(const MarchenkoKernel& kern, double x,
                                  const NystromGrid& grid);

struct ExtractOptions {
  // collocate v at zeta = 0 (default) or extrapolate linearly from the two
  // smallest positive nodes
  bool extrapolate_zeta0 = false;
};

struct ExtractedV {
  CplxSampled v;
  double max_residual = 0;
  double max_pair_dev = 0;  // |Gamma12(x,0) - conj Gamma21(x,0)|, worst node
};

// v(x_j) = -Gamma12(x_j, 0) over the requested grid, with the conjugate-pair
// identity checked at every node (failure signals quadrature imbalance).
ExtractedV extract_v(const MarchenkoKernel& kern, const UniformGrid& xgrid,
                     const NystromGrid& grid, const ExtractOptions& opts = {});

}  // namespace edscat
