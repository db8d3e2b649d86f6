#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isonet/integrator.hpp"
#include "isonet/verify.hpp"

namespace isonet {

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
  std::string surface_spec;  // URI or full document text
  double x0 = 0.0, y0 = 0.0;
  double K0 = 1.0;
  int branch = 0;
  double h_beta = 0.02, h_gamma = 0.02;
  int n_beta = 51, n_gamma = 51;
  double tol_umbilic = 1e-8;
  double tol_residual = 1e-4;
  double tol_diagnostic = 1e-3;
  double fd_step = 0.0;  // 0 = automatic
  int workers = 1;
};

inline nlohmann::json config_to_json(const RunConfig& c) {
  return {{"surface", c.surface_spec},
          {"origin", {c.x0, c.y0}},
          {"k0", c.K0},
          {"branch", c.branch},
          {"steps", {c.h_beta, c.h_gamma}},
          {"size", {c.n_beta, c.n_gamma}},
          {"tol_umbilic", c.tol_umbilic},
          {"tol_residual", c.tol_residual},
          {"tol_diagnostic", c.tol_diagnostic},
          {"fd_step", c.fd_step},
          {"workers", c.workers}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.surface_spec = j.at("surface").get<std::string>();
  c.x0 = j.at("origin").at(0).get<double>();
  c.y0 = j.at("origin").at(1).get<double>();
  c.K0 = j.at("k0").get<double>();
  c.branch = j.at("branch").get<int>();
  c.h_beta = j.at("steps").at(0).get<double>();
  c.h_gamma = j.at("steps").at(1).get<double>();
  c.n_beta = j.at("size").at(0).get<int>();
  c.n_gamma = j.at("size").at(1).get<int>();
  c.tol_umbilic = j.at("tol_umbilic").get<double>();
  c.tol_residual = j.at("tol_residual").get<double>();
  c.tol_diagnostic = j.at("tol_diagnostic").get<double>();
  c.fd_step = j.at("fd_step").get<double>();
  c.workers = j.at("workers").get<int>();
  return c;
}

inline nlohmann::json diagnostics_to_json(const DiagnosticsReport& d) {
  return {{"conformality_max", d.conformality_max},
          {"orthogonality_max", d.orthogonality_max},
          {"curvature_line_max", d.curvature_line_max},
          {"path_independence", d.path_independence},
          {"integral_drift_max", d.integral_drift_max},
          {"hopf_imag_max", d.hopf_imag_max}};
}

// Writes the constructed mesh as ASCII OBJ: one `v` record per valid node in
// row-major node order, one quad `f` record per cell whose four corners are
// valid. Indices are 1-based.
inline void write_obj(std::ostream& os, const IsoMesh& mesh) {
  std::vector<int> index(mesh.nodes.size(), 0);
  int next = 1;
  os.precision(17);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const auto& nd = mesh.nodes[i];
    if (!nd.valid) continue;
    index[i] = next++;
    os << "v " << nd.f_pullback.x << " " << nd.f_pullback.y << " " << nd.f_pullback.z
       << "\n";
  }
  for (int ib = 0; ib + 1 < mesh.n_beta; ++ib) {
    for (int ig = 0; ig + 1 < mesh.n_gamma; ++ig) {
      const std::size_t a = static_cast<std::size_t>(ib) * mesh.n_gamma + ig;
      const std::size_t b = a + 1;
      const std::size_t c = a + mesh.n_gamma + 1;
      const std::size_t d = a + mesh.n_gamma;
      if (index[a] && index[b] && index[c] && index[d])
        os << "f " << index[a] << " " << index[b] << " " << index[c] << " " << index[d]
           << "\n";
    }
  }
}

inline void write_obj_file(const std::string& path, const IsoMesh& mesh) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open OBJ output file: " + path);
  write_obj(f, mesh);
}

}  // namespace isonet
