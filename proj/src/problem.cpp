#include "edscat/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace edscat {

using nlohmann::json;

double FieldSpec::eval(double x) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Gaussian: {
      const double t = (x - center) / width;
      return amplitude * std::exp(-0.5 * t * t);
    }
    case Kind::Step:
      return (x >= from && x < to) ? height : 0.0;
    case Kind::Samples:
      throw DomainError("FieldSpec: sampled field has no closed form");
  }
  return 0.0;
}

double FieldSpec::tail(double x) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Gaussian:
      return amplitude * width * std::sqrt(0.5 * kPi) *
             std::erfc((x - center) / (std::sqrt(2.0) * width));
    case Kind::Step:
      return height * std::max(0.0, to - std::max(x, from));
    case Kind::Samples:
      throw DomainError("FieldSpec: sampled field has no closed form");
  }
  return 0.0;
}

std::vector<double> FieldSpec::breakpoints() const {
  if (kind == Kind::Step) return {from, to};
  return {};
}

namespace {

FieldSpec parse_field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains("type"))
    throw DomainError(std::string("field '") + name +
                      "' needs an object with a 'type'");
  FieldSpec f;
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") {
    f.kind = FieldSpec::Kind::Zero;
  } else if (type == "gaussian") {
    f.kind = FieldSpec::Kind::Gaussian;
    f.amplitude = j.at("amplitude").get<double>();
    f.center = j.at("center").get<double>();
    f.width = j.at("width").get<double>();
    if (!(f.width > 0))
      throw DomainError(std::string("field '") + name + "': width must be > 0");
  } else if (type == "step") {
    f.kind = FieldSpec::Kind::Step;
    f.height = j.at("height").get<double>();
    f.from = j.at("from").get<double>();
    f.to = j.at("to").get<double>();
    if (!(f.from < f.to))
      throw DomainError(std::string("field '") + name + "': need from < to");
  } else if (type == "samples") {
    f.kind = FieldSpec::Kind::Samples;
    f.samples = j.at("values").get<std::vector<double>>();
  } else {
    throw DomainError(std::string("field '") + name +
                      "': unknown type '" + type + "'");
  }
  return f;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    RunConfig cfg;
    const auto& jg = j.at("grid");
    cfg.problem.grid =
        UniformGrid(jg.at("x_max").get<double>(), jg.at("n").get<int>());
    cfg.problem.u = parse_field(j.at("u"), "u");
    cfg.problem.p = parse_field(j.at("p"), "p");
    cfg.problem.alpha = j.at("alpha").get<double>();
    if (!(cfg.problem.alpha >= 0 && cfg.problem.alpha < kPi))
      throw DomainError("config: alpha must lie in [0, pi)");

    cfg.k_max = j.value("k_max", 64.0);
    cfg.n_k = j.value("n_k", 4096);
    cfg.step_cap = j.value("step_cap", 0.2);
    cfg.output = j.value("output", std::string());
    if (j.contains("tolerances")) {
      const auto& jt = j.at("tolerances");
      cfg.tol.roundtrip_l2 = jt.value("roundtrip_l2", cfg.tol.roundtrip_l2);
      cfg.tol.alpha = jt.value("alpha", cfg.tol.alpha);
    }
    cfg.inverse.x_max = cfg.problem.grid.x_max;
    cfg.inverse.n_x = cfg.problem.grid.n;
    if (j.contains("inverse")) {
      const auto& ji = j.at("inverse");
      cfg.inverse.zeta_max_factor =
          ji.value("zeta_max_factor", cfg.inverse.zeta_max_factor);
      cfg.inverse.n_zeta = ji.value("n_zeta", cfg.inverse.n_zeta);
      cfg.inverse.n_f = ji.value("n_f", cfg.inverse.n_f);
      cfg.inverse.f_support_rel_tol =
          ji.value("f_support_rel_tol", cfg.inverse.f_support_rel_tol);
      cfg.inverse.x0_threshold =
          ji.value("x0_threshold", cfg.inverse.x0_threshold);
      cfg.inverse.extrapolate_v0 =
          ji.value("extrapolate_v0", cfg.inverse.extrapolate_v0);
    }
    if (cfg.n_k < 2 || cfg.n_k % 2 != 0)
      throw DomainError("config: n_k must be even and >= 2");
    if (!(cfg.k_max > 0)) throw DomainError("config: k_max must be > 0");
    return cfg;
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

SchrodingerProblem build_problem(const ProblemSpec& spec) {
  const UniformGrid grid = spec.grid;
  auto sample = [&grid](const FieldSpec& f) {
    std::vector<double> vals(grid.n);
    if (f.kind == FieldSpec::Kind::Samples) {
      if (static_cast<int>(f.samples.size()) != grid.n)
        throw DomainError("build_problem: sample count does not match grid");
      vals = f.samples;
    } else {
      for (int j = 0; j < grid.n; ++j) vals[j] = f.eval(grid.node(j));
    }
    if (!all_finite(vals))
      throw DomainError("build_problem: non-finite field samples");
    return RealSampled(grid, std::move(vals));
  };

  SchrodingerProblem sp;
  sp.u = sample(spec.u);
  sp.p = sample(spec.p);
  sp.alpha = spec.alpha;
  if (spec.u.analytic()) {
    FieldSpec f = spec.u;
    sp.u_field = ScalarField{[f](double x) { return f.eval(x); },
                             [f](double x) { return f.tail(x); },
                             f.breakpoints()};
  }
  if (spec.p.analytic()) {
    FieldSpec f = spec.p;
    sp.p_field = ScalarField{[f](double x) { return f.eval(x); },
                             [f](double x) { return f.tail(x); },
                             f.breakpoints()};
  }
  return sp;
}

}  // namespace edscat
