#pragma once
// Grids, sampled functions, 2x2 complex matrices and the error hierarchy
// shared by every module.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edscat {

using cxd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Reduce an angle to the representative in [0, pi).
inline double mod_pi(double a) {
  double r = std::fmod(a, kPi);
  if (r < 0) r += kPi;
  if (r >= kPi) r -= kPi;
  return r;
}

// Distance between two angles identified modulo pi.
inline double mod_pi_dist(double a, double b) {
  double d = std::fmod(std::fabs(a - b), kPi);
  return std::min(d, kPi - d);
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct IntegrationError : Error {
  using Error::Error;
};
struct ConvergenceError : Error {
  using Error::Error;
};
struct UnderResolvedError : Error {
  using Error::Error;
};
struct TailError : Error {
  using Error::Error;
};

struct SingularSystemError : Error {
  double pivot;
  SingularSystemError(const std::string& msg, double piv)
      : Error(msg), pivot(piv) {}
};

// Wraps a failure with the pipeline stage that produced it.
struct StageError : Error {
  std::string stage;
  StageError(std::string st, const std::string& msg)
      : Error(st + ": " + msg), stage(std::move(st)) {}
};

// Uniform grid on [0, x_max]; nodes x_j = j*h with h = x_max/(n-1).
struct UniformGrid {
  double x_max = 1.0;
  int n = 2;

  UniformGrid() = default;
  UniformGrid(double xmax, int count) : x_max(xmax), n(count) {
    if (n < 2 || !(x_max > 0) || !std::isfinite(x_max))
      throw DomainError("UniformGrid: need n >= 2 and finite x_max > 0");
  }
  double h() const { return x_max / (n - 1); }
  double node(int j) const { return j * h(); }
  bool operator==(const UniformGrid& o) const {
    return n == o.n && x_max == o.x_max;
  }
};

template <class T>
struct Sampled {
  UniformGrid grid;
  std::vector<T> values;

  Sampled() = default;
  Sampled(UniformGrid g, std::vector<T> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.n)
      throw DomainError("Sampled: value count does not match grid");
  }
  static Sampled zeros(UniformGrid g) {
    return Sampled(g, std::vector<T>(g.n, T{}));
  }
  int size() const { return grid.n; }
  const T& operator[](int j) const { return values[j]; }
  T& operator[](int j) { return values[j]; }
};

using RealSampled = Sampled<double>;
using CplxSampled = Sampled<cxd>;

template <class T>
bool all_finite(const std::vector<T>& v) {
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, cxd>) {
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    } else {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

// Symmetric k grid avoiding zero: k_j = -k_max + (j + 1/2)*dk, j = 0..n-1,
// with dk = 2*k_max/n and n even, so the nodes come in +/- pairs.
struct KGrid {
  double k_max = 64.0;
  int n = 4096;

  KGrid() = default;
  KGrid(double kmax, int count) : k_max(kmax), n(count) {
    if (n < 2 || n % 2 != 0 || !(k_max > 0))
      throw DomainError("KGrid: need even n >= 2 and k_max > 0");
  }
  double dk() const { return 2.0 * k_max / n; }
  double node(int j) const { return -k_max + (j + 0.5) * dk(); }
};

// Dense 2x2 complex matrix, value semantics.
struct Mat2 {
  cxd a11{}, a12{}, a21{}, a22{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  cxd det() const { return a11 * a22 - a12 * a21; }
  cxd trace() const { return a11 + a22; }

  Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  friend Mat2 operator*(cxd s, const Mat2& m) {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }
  std::pair<cxd, cxd> mul_col(cxd x1, cxd x2) const {
    return {a11 * x1 + a12 * x2, a21 * x1 + a22 * x2};
  }
};

inline Mat2 commutator(const Mat2& a, const Mat2& b) {
  return a * b - b * a;
}

}  // namespace edscat
