#pragma once
// Problem definitions as data: the JSON schema consumed by the CLI
//   { "grid": {"x_max":, "n":}, "u": <field>, "p": <field>, "alpha": }
// with <field> one of
//   {"type":"zero"} | {"type":"gaussian","amplitude":,"center":,"width":}
//   | {"type":"step","height":,"from":,"to":} | {"type":"samples","values":[..]}
// plus optional run parameters (k grid, tolerances, inverse options).

#include <string>
#include <vector>

#include "edscat/phase.hpp"
#include "edscat/transform.hpp"
#include "edscat/types.hpp"

namespace edscat {

struct FieldSpec {
  enum class Kind { Zero, Gaussian, Step, Samples };
  Kind kind = Kind::Zero;
  double amplitude = 0, center = 0, width = 1;  // gaussian: a e^{-(x-c)^2/(2w^2)}
  double height = 0, from = 0, to = 0;          // step: height on [from, to)
  std::vector<double> samples;

  bool analytic() const { return kind != Kind::Samples; }
  double eval(double x) const;
  double tail(double x) const;  // integral over [x, infinity), analytic kinds
  std::vector<double> breakpoints() const;
};

struct ProblemSpec {
  UniformGrid grid{16.0, 2048};
  FieldSpec u, p;
  double alpha = 0;
};

struct Tolerances {
  double roundtrip_l2 = 5e-2;
  double alpha = 1e-3;
};

struct RunConfig {
  ProblemSpec problem;
  double k_max = 64.0;
  int n_k = 4096;
  double step_cap = 0.2;
  Tolerances tol;
  InverseConfig inverse;  // x_max / n_x mirror the problem grid
  std::string output;
};

// Throws DomainError on malformed or inconsistent configuration.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Sample the fields on the grid and attach closed-form evaluators where the
// field kind allows it.
SchrodingerProblem build_problem(const ProblemSpec& spec);

}  // namespace edscat
