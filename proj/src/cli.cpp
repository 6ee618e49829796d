#include "edscat/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "edscat/direct.hpp"
#include "edscat/phase.hpp"
#include "edscat/problem.hpp"
#include "edscat/scatdata.hpp"

namespace edscat::cli {
namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kNumericalFailure = 1;
constexpr int kIoFailure = 2;
constexpr int kRejected = 3;

std::string sidecar_path(const std::string& path, const char* suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw DomainError("write failed: " + path);
}

json report_json(const ClassSReport& rep) {
  return json{{"unimodularity_max_dev", rep.unimod_dev},
              {"winding", rep.winding},
              {"winding_raw", rep.winding_raw},
              {"winding_resolved", rep.winding_resolved},
              {"gamma", rep.gamma},
              {"tail_spread", rep.tail_spread},
              {"limit_gap", rep.limit_gap},
              {"F_l1", rep.f_l1},
              {"F_l2", rep.f_l2},
              {"F_neg_l2", rep.f_neg_l2},
              {"pass_unimodular", rep.pass_unimodular},
              {"pass_winding", rep.pass_winding},
              {"pass_tails", rep.pass_tails},
              {"pass", rep.pass()}};
}

double rel_l2_error(const RealSampled& got, const RealSampled& want) {
  double num = 0, den = 0;
  const double h = want.grid.h();
  for (int j = 0; j < want.grid.n; ++j) {
    const double w = (j == 0 || j == want.grid.n - 1) ? 0.5 * h : h;
    num += w * (got[j] - want[j]) * (got[j] - want[j]);
    den += w * want[j] * want[j];
  }
  num = std::sqrt(num);
  den = std::sqrt(den);
  return den > 1e-12 ? num / den : num;
}

void write_reconstruction_csv(const std::string& path,
                              const ReconstructionResult& rec) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write: " + path);
  out << "x,u,p,re_v,im_v,phi\n";
  char buf[256];
  const UniformGrid& g = rec.u.grid;
  for (int j = 0; j < g.n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  g.node(j), rec.u[j], rec.p[j], rec.v[j].real(),
                  rec.v[j].imag(), rec.phase.phi[j]);
    out << buf;
  }
  if (!out) throw DomainError("write failed: " + path);
}

json reconstruction_meta(const ReconstructionResult& rec) {
  return json{{"alpha", rec.alpha},
              {"beta", rec.beta},
              {"gamma", rec.gamma},
              {"p0_estimate", rec.p0_estimate},
              {"residuals",
               {{"marchenko_max", rec.diag.marchenko_residual_max},
                {"marchenko_pair_max", rec.diag.marchenko_pair_dev_max},
                {"ode_max", rec.diag.ode_residual_max},
                {"reverify_max", rec.diag.reverify_max}}},
              {"iterations", rec.diag.fixed_point_iterations},
              {"contraction_ratios", rec.diag.contraction_ratios},
              {"f_neg_l2", rec.diag.f_neg_l2},
              {"f_discarded_tail", rec.diag.f_discarded_tail},
              {"validation_report", report_json(rec.report)}};
}

struct ForwardArtifacts {
  ScatteringSamples samples;
  json sidecar;
};

ForwardArtifacts run_forward(const RunConfig& cfg) {
  const SchrodingerProblem sp = build_problem(cfg.problem);
  const ZsAknsProblem zp = to_zsakns(sp);
  JostOptions jopts;
  jopts.step_cap = cfg.step_cap;
  ForwardArtifacts fa;
  fa.samples = scattering_function(zp, KGrid(cfg.k_max, cfg.n_k), jopts);

  json side{{"beta", zp.beta},
            {"p0", zp.p0},
            {"x_max", cfg.problem.grid.x_max},
            {"n_x", cfg.problem.grid.n},
            {"k_max", cfg.k_max},
            {"n_k", cfg.n_k},
            {"unimodularity_max_dev", fa.samples.max_unimod_dev()},
            {"det_dev_max", fa.samples.max_det_dev},
            {"sym_dev_max", fa.samples.max_sym_dev},
            {"tail_ok", zp.tail_ok}};
  try {
    side["gamma_estimate"] = extract_gamma(fa.samples).gamma;
  } catch (const Error&) {
    side["gamma_estimate"] = nullptr;
  }
  try {
    const auto w = winding_number(fa.samples);
    side["winding"] = w.winding;
    side["winding_raw"] = w.raw;
  } catch (const Error&) {
    side["winding"] = nullptr;
  }
  fa.sidecar = std::move(side);
  return fa;
}

int cmd_forward(const RunConfig& cfg) {
  const std::string out =
      cfg.output.empty() ? std::string("scattering.csv") : cfg.output;
  try {
    ForwardArtifacts fa = run_forward(cfg);
    save_scattering_csv(out, fa.samples);
    write_json(sidecar_path(out, ".json"), fa.sidecar);
    std::cout << "wrote " << out << " and " << sidecar_path(out, ".json")
              << "\n";
    return kOk;
  } catch (const Error& e) {
    std::cerr << "forward: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_inverse(const std::string& s_file, const RunConfig& cfg) {
  const std::string out =
      cfg.output.empty() ? std::string("reconstruction.csv") : cfg.output;
  ScatteringSamples samples = load_scattering_csv(s_file);  // throws -> 2
  try {
    const ReconstructionResult rec = inverse_scatter(samples, cfg.inverse);
    write_reconstruction_csv(out, rec);
    write_json(sidecar_path(out, ".json"), reconstruction_meta(rec));
    std::cout << "wrote " << out << " and " << sidecar_path(out, ".json")
              << "\n";
    return kOk;
  } catch (const ValidationError& e) {
    write_json(sidecar_path(out, ".json"),
               json{{"rejected", true},
                    {"reason", e.what()},
                    {"validation_report", report_json(e.report)}});
    std::cerr << "inverse: " << e.what() << "\n";
    return kRejected;
  } catch (const Error& e) {
    std::cerr << "inverse: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_roundtrip(const RunConfig& cfg) {
  const std::string out =
      cfg.output.empty() ? std::string("roundtrip.json") : cfg.output;
  try {
    const SchrodingerProblem sp = build_problem(cfg.problem);
    ForwardArtifacts fa = run_forward(cfg);
    const ReconstructionResult rec =
        inverse_scatter(fa.samples, cfg.inverse);

    const double u_err = rel_l2_error(rec.u, sp.u);
    const double p_err = rel_l2_error(rec.p, sp.p);
    const double a_err = mod_pi_dist(rec.alpha, sp.alpha);
    const bool pass = u_err <= cfg.tol.roundtrip_l2 &&
                      p_err <= cfg.tol.roundtrip_l2 &&
                      a_err <= cfg.tol.alpha;
    json rep{{"u_rel_l2", u_err},
             {"p_rel_l2", p_err},
             {"alpha_error_mod_pi", a_err},
             {"alpha_true", sp.alpha},
             {"alpha_recovered", rec.alpha},
             {"beta", rec.beta},
             {"gamma", rec.gamma},
             {"tolerances",
              {{"roundtrip_l2", cfg.tol.roundtrip_l2},
               {"alpha", cfg.tol.alpha}}},
             {"stage_residuals",
              {{"marchenko_max", rec.diag.marchenko_residual_max},
               {"marchenko_pair_max", rec.diag.marchenko_pair_dev_max},
               {"ode_max", rec.diag.ode_residual_max},
               {"reverify_max", rec.diag.reverify_max}}},
             {"iterations", rec.diag.fixed_point_iterations},
             {"validation_report", report_json(rec.report)},
             {"pass", pass}};
    write_json(out, rep);
    std::cout << "u_rel_l2=" << u_err << " p_rel_l2=" << p_err
              << " alpha_err=" << a_err << " -> "
              << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kOk : kNumericalFailure;
  } catch (const ValidationError& e) {
    std::cerr << "roundtrip: " << e.what() << "\n";
    return kRejected;
  } catch (const Error& e) {
    std::cerr << "roundtrip: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_validate(const std::string& s_file, const std::string& out_path) {
  ScatteringSamples samples = load_scattering_csv(s_file);  // throws -> 2
  const ClassSReport rep = validate_class_S(samples);
  const json j = report_json(rep);
  std::cout << j.dump(2) << "\n";
  if (!out_path.empty()) write_json(out_path, j);
  return rep.pass() ? kOk : kRejected;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Direct and inverse scattering for half-line Schrodinger "
               "problems with energy-linear potentials"};
  app.require_subcommand(1);

  std::string config_path, output, input;
  double k_max = 0, x_max = 0, tol_rt = 0;
  int n_k = 0, n_x = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path,
                              "problem/run configuration (JSON)");
    if (needs_config) c->required();
    sub->add_option("--output", output, "output path");
    sub->add_option("--k-max", k_max, "k-grid half width");
    sub->add_option("--n-k", n_k, "k-grid size (even)");
    sub->add_option("--x-max", x_max, "truncation length");
    sub->add_option("--n-x", n_x, "x-grid size");
  };

  auto* fwd = app.add_subcommand("forward", "compute S(k) for a problem");
  add_common(fwd, true);
  auto* inv = app.add_subcommand(
      "inverse", "reconstruct (u, p, alpha) from a scattering CSV");
  inv->add_option("input", input, "scattering CSV (k,re_S,im_S)")->required();
  add_common(inv, false);
  auto* rt = app.add_subcommand("roundtrip",
                                "forward then inverse, report the errors");
  add_common(rt, true);
  rt->add_option("--tol-roundtrip", tol_rt, "relative L2 tolerance");
  auto* val =
      app.add_subcommand("validate", "class-S report for a scattering CSV");
  val->add_option("input", input, "scattering CSV (k,re_S,im_S)")->required();
  val->add_option("--output", output, "also write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kIoFailure;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_run_config(config_path);
    }
    // flags override config-file fields
    if (k_max > 0) cfg.k_max = k_max;
    if (n_k > 0) cfg.n_k = n_k;
    if (x_max > 0 || n_x > 0) {
      const double xm = x_max > 0 ? x_max : cfg.problem.grid.x_max;
      const int nx = n_x > 0 ? n_x : cfg.problem.grid.n;
      cfg.problem.grid = UniformGrid(xm, nx);
      cfg.inverse.x_max = xm;
      cfg.inverse.n_x = nx;
    }
    if (!output.empty()) cfg.output = output;
    if (tol_rt > 0) cfg.tol.roundtrip_l2 = tol_rt;

    if (fwd->parsed()) return cmd_forward(cfg);
    if (inv->parsed()) return cmd_inverse(input, cfg);
    if (rt->parsed()) return cmd_roundtrip(cfg);
    if (val->parsed()) return cmd_validate(input, cfg.output);
    return kIoFailure;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace edscat::cli
