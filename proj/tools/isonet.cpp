// Command-line front end: builtin listing, existence checking over a sample
// grid, isothermic mesh generation with verification, and report re-checks.
//
// Exit codes: 0 pass, 1 error, 2 fail.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isonet/integrator.hpp"
#include "isonet/isothermic.hpp"
#include "isonet/report.hpp"
#include "isonet/surface.hpp"
#include "isonet/verify.hpp"

namespace {

using nlohmann::json;
using namespace isonet;

std::string load_surface_spec(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    std::ifstream f(arg);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  return arg;
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& flag) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw Error(flag + " expects two comma-separated values, got '" + s + "'");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

int cmd_list() {
  std::cout << std::left << std::setw(10) << "name" << std::setw(28) << "parameters"
            << "description\n";
  for (const auto& b : builtin_catalog()) {
    std::ostringstream ps;
    for (std::size_t i = 0; i < b.params.size(); ++i) {
      if (i) ps << ", ";
      ps << b.params[i].name << "=" << b.params[i].default_value;
    }
    std::cout << std::left << std::setw(10) << b.name << std::setw(28)
              << (ps.str().empty() ? "-" : ps.str()) << b.description << "\n";
  }
  return 0;
}

int cmd_check(const RunConfig& cfg, const std::string& report_path, bool force_full) {
  const auto t0 = std::chrono::steady_clock::now();
  const SurfaceDef s = parse_surface(cfg.surface_spec);

  const int nx = cfg.n_beta, ny = cfg.n_gamma;
  const double dx = (s.domain.xmax - s.domain.xmin) / nx;
  const double dy = (s.domain.ymax - s.domain.ymin) / ny;

  json points = json::array();
  int umbilic_count = 0;
  double max_abs = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double x = s.domain.xmin + (i + 0.5) * dx;
      const double y = s.domain.ymin + (j + 0.5) * dy;
      json pt = {{"x", x}, {"y", y}};
      try {
        const FundamentalData fd = fundamental(jet(s, x, y));
        if (is_umbilic(fd, cfg.tol_umbilic)) {
          ++umbilic_count;
          pt["umbilic"] = true;
          points.push_back(pt);
          continue;
        }
        double res;
        std::string method = "full";
        if (force_full) {
          res = existence_residual(s, x, y, cfg.branch, cfg.fd_step, cfg.tol_umbilic);
        } else {
          try {
            res = existence_residual_special(s, x, y, ReductionCase::revolution,
                                             cfg.fd_step, cfg.tol_umbilic);
            method = "revolution";
          } catch (const HypothesisViolated&) {
            try {
              res = existence_residual_special(s, x, y, ReductionCase::orthogonal,
                                               cfg.fd_step, cfg.tol_umbilic);
              method = "orthogonal";
            } catch (const HypothesisViolated&) {
              res = existence_residual(s, x, y, cfg.branch, cfg.fd_step, cfg.tol_umbilic);
            }
          }
        }
        max_abs = std::max(max_abs, std::abs(res));
        pt["residual"] = res;
        pt["method"] = method;
      } catch (const UmbilicPoint&) {
        ++umbilic_count;
        pt["umbilic"] = true;
      } catch (const OutOfDomain&) {
        pt["skipped"] = "out of domain stencil";
      }
      points.push_back(pt);
    }
  }

  const int total = nx * ny;
  std::string verdict;
  int rc;
  if (umbilic_count == total) {
    verdict = "UNDEFINED";
    rc = 2;
  } else if (max_abs <= cfg.tol_residual) {
    verdict = "PASS";
    rc = 0;
  } else {
    verdict = "FAIL";
    rc = 2;
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json rep = {{"schema_version", kReportSchemaVersion},
              {"command", "check"},
              {"surface", {{"name", s.name}, {"source", s.source}}},
              {"config", config_to_json(cfg)},
              {"points", points},
              {"max_abs_residual", max_abs},
              {"umbilic_count", umbilic_count},
              {"verdict", verdict},
              {"timing", {{"seconds", secs}}}};
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << rep.dump(2) << "\n";
  }
  std::cout << "surface: " << s.name << "\n"
            << "grid: " << nx << "x" << ny << ", umbilic points: " << umbilic_count << "\n"
            << "max |residual| = " << max_abs << " (threshold " << cfg.tol_residual << ")\n"
            << "verdict: " << verdict << "\n";
  return rc;
}

struct ReparamResult {
  IsoMesh mesh;
  DiagnosticsReport diag;
};

ReparamResult run_reparam(const SurfaceDef& s, const RunConfig& cfg) {
  ReparamResult r;
  r.mesh = build_mesh(s, cfg.x0, cfg.y0, cfg.K0, cfg.branch, cfg.h_beta, cfg.h_gamma,
                      cfg.n_beta, cfg.n_gamma, cfg.workers, cfg.tol_umbilic);
  r.diag = mesh_diagnostics(r.mesh, s);
  r.diag.hopf_imag_max = hopf_realness(r.mesh, s);
  const int steps = std::min(cfg.n_beta, cfg.n_gamma) - 1;
  r.diag.path_independence = path_independence_check(
      s, cfg.x0, cfg.y0, cfg.K0, cfg.branch, cfg.h_beta, cfg.h_gamma, steps,
      cfg.tol_umbilic);
  return r;
}

json reparam_report(const SurfaceDef& s, const RunConfig& cfg, const ReparamResult& r,
                    const std::string& verdict, double secs) {
  return {{"schema_version", kReportSchemaVersion},
          {"command", "reparam"},
          {"surface", {{"name", s.name}, {"source", s.source}}},
          {"config", config_to_json(cfg)},
          {"residuals", diagnostics_to_json(r.diag)},
          {"umbilic_count", 0},
          {"verdict", verdict},
          {"mesh_stats",
           {{"n_beta", r.mesh.n_beta},
            {"n_gamma", r.mesh.n_gamma},
            {"n_valid", r.diag.n_valid},
            {"n_interior", r.diag.n_interior}}},
          {"timing", {{"seconds", secs}}}};
}

int cmd_reparam(const RunConfig& cfg, const std::string& out_path,
                const std::string& report_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const SurfaceDef s = parse_surface(cfg.surface_spec);
  const ReparamResult r = run_reparam(s, cfg);

  const bool pass = r.diag.conformality_max <= cfg.tol_diagnostic &&
                    r.diag.orthogonality_max <= cfg.tol_diagnostic &&
                    r.diag.curvature_line_max <= cfg.tol_diagnostic &&
                    r.diag.hopf_imag_max <= cfg.tol_diagnostic;
  const std::string verdict = pass ? "PASS" : "FAIL";

  if (r.diag.n_valid < r.mesh.n_beta * r.mesh.n_gamma)
    std::cerr << "warning: mesh truncated, " << r.diag.n_valid << " of "
              << r.mesh.n_beta * r.mesh.n_gamma << " nodes valid\n";

  if (!out_path.empty()) write_obj_file(out_path, r.mesh);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << reparam_report(s, cfg, r, verdict, secs).dump(2) << "\n";
  }
  std::cout << "surface: " << s.name << ", valid nodes: " << r.diag.n_valid << "/"
            << r.mesh.n_beta * r.mesh.n_gamma << "\n"
            << "conformality_max   = " << r.diag.conformality_max << "\n"
            << "orthogonality_max  = " << r.diag.orthogonality_max << "\n"
            << "curvature_line_max = " << r.diag.curvature_line_max << "\n"
            << "hopf_imag_max      = " << r.diag.hopf_imag_max << "\n"
            << "path_independence  = " << r.diag.path_independence << "\n"
            << "integral_drift_max = " << r.diag.integral_drift_max << "\n"
            << "verdict: " << verdict << "\n";
  return pass ? 0 : 2;
}

int cmd_verify(const std::string& report_path) {
  std::ifstream f(report_path);
  if (!f) {
    std::cerr << "error: cannot open report file: " << report_path << "\n";
    return 1;
  }
  json rep;
  try {
    f >> rep;
  } catch (const std::exception& e) {
    std::cerr << "error: report is not valid JSON: " << e.what() << "\n";
    return 1;
  }
  RunConfig cfg;
  json stored;
  try {
    if (rep.at("schema_version").get<int>() != kReportSchemaVersion)
      throw Error("unsupported schema version");
    if (rep.at("command").get<std::string>() != "reparam")
      throw Error("verify expects a reparam report");
    cfg = config_from_json(rep.at("config"));
    stored = rep.at("residuals");
  } catch (const std::exception& e) {
    std::cerr << "error: report schema: " << e.what() << "\n";
    return 1;
  }

  const SurfaceDef s = parse_surface(cfg.surface_spec);
  const ReparamResult r = run_reparam(s, cfg);
  const json fresh = diagnostics_to_json(r.diag);
  bool match = true;
  for (auto& [key, value] : fresh.items()) {
    const double got = value.get<double>();
    const double want = stored.at(key).get<double>();
    if (std::abs(got - want) > 1e-12) {
      std::cerr << "mismatch in " << key << ": stored " << want << ", recomputed " << got
                << "\n";
      match = false;
    }
  }
  std::cout << (match ? "report verified: diagnostics match\n"
                      : "report verification FAILED\n");
  return match ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isonet - isothermic (isothermal curvature-line) reparameterization"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list builtin surfaces");

  RunConfig cfg;
  std::string surface_arg, origin_arg = "0,0";
  std::string check_size = "20,20", steps_arg = "0.02,0.02", size_arg = "51,51";
  std::string out_path, report_path;
  bool force_full = false;

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--surface", surface_arg, "builtin URI, document file, or document text")
        ->required();
    sc->add_option("--branch", cfg.branch, "angle branch (0..3)");
    sc->add_option("--tol-umbilic", cfg.tol_umbilic, "umbilic detection tolerance");
    sc->add_option("--fd-step", cfg.fd_step, "finite-difference step override");
    sc->add_option("--report", report_path, "write JSON report to this path");
  };

  auto* check = app.add_subcommand("check", "evaluate the existence condition on a grid");
  add_common(check);
  check->add_option("--size", check_size, "sample grid size n,m");
  check->add_option("--tol-residual", cfg.tol_residual, "existence pass threshold");
  check->add_flag("--full", force_full, "always evaluate the full condition");

  auto* reparam = app.add_subcommand("reparam", "build an isothermic mesh and verify it");
  add_common(reparam);
  reparam->add_option("--origin", origin_arg, "seed point x0,y0 in the original chart");
  reparam->add_option("--k0", cfg.K0, "initial scaling K at the seed");
  reparam->add_option("--steps", steps_arg, "step sizes h_beta,h_gamma");
  reparam->add_option("--size", size_arg, "grid size n_beta,n_gamma");
  reparam->add_option("--tol-diag", cfg.tol_diagnostic, "diagnostic pass threshold");
  reparam->add_option("--out", out_path, "write OBJ mesh to this path");
  reparam->add_option("--workers", cfg.workers, "column worker threads");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "recompute and compare a stored report");
  verify->add_option("report", verify_path, "reparam JSON report path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list();
    if (verify->parsed()) return cmd_verify(verify_path);

    cfg.surface_spec = load_surface_spec(surface_arg);
    if (check->parsed()) {
      auto [n, m] = parse_pair(check_size, "--size");
      cfg.n_beta = static_cast<int>(n);
      cfg.n_gamma = static_cast<int>(m);
      if (cfg.n_beta < 2 || cfg.n_gamma < 2) throw Error("--size entries must be >= 2");
      return cmd_check(cfg, report_path, force_full);
    }
    // reparam
    auto [x0, y0] = parse_pair(origin_arg, "--origin");
    cfg.x0 = x0;
    cfg.y0 = y0;
    auto [hb, hg] = parse_pair(steps_arg, "--steps");
    cfg.h_beta = hb;
    cfg.h_gamma = hg;
    auto [nb, ng] = parse_pair(size_arg, "--size");
    cfg.n_beta = static_cast<int>(nb);
    cfg.n_gamma = static_cast<int>(ng);
    if (cfg.n_beta < 2 || cfg.n_gamma < 2) throw Error("--size entries must be >= 2");
    if (!(cfg.K0 > 0.0)) throw Error("--k0 must be positive");
    return cmd_reparam(cfg, out_path, report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
