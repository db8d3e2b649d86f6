#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "isonet/integrator.hpp"
#include "isonet/report.hpp"
#include "isonet/surface.hpp"
#include "isonet/verify.hpp"

using namespace isonet;

namespace {

IsoMesh torus_mesh(int n = 31, double h = 0.05) {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  return build_mesh(t, 0.5, 0.5, 1.0, 0, h, h, n, n);
}

}  // namespace

TEST_CASE("diagnostics on a good torus mesh") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = torus_mesh();
  DiagnosticsReport d = mesh_diagnostics(m, t);
  CHECK(d.n_valid == 31 * 31);
  CHECK(d.n_interior == 27 * 27);
  CHECK(d.conformality_max <= 1e-5);  // checker FD truncation only
  CHECK(d.orthogonality_max <= 1e-6);
  CHECK(d.curvature_line_max <= 1e-6);
  CHECK(d.integral_drift_max <= 1e-7);
  CHECK(hopf_realness(m, t) <= 1e-6);
}

TEST_CASE("checker conformality error shrinks with the grid step") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  DiagnosticsReport a = mesh_diagnostics(torus_mesh(21, 0.08), t);
  DiagnosticsReport b = mesh_diagnostics(torus_mesh(21, 0.04), t);
  CHECK(b.conformality_max < a.conformality_max);
}

TEST_CASE("too small meshes are rejected") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = build_mesh(t, 0.5, 0.5, 1.0, 0, 0.05, 0.05, 4, 4);
  CHECK_THROWS_AS(mesh_diagnostics(m, t), MeshTooSmall);
}

TEST_CASE("corrupted node is flagged") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = torus_mesh();
  m.at(15, 15).f_pullback.z += 0.01;
  DiagnosticsReport d = mesh_diagnostics(m, t);
  CHECK(d.curvature_line_max > 1e-2);
  CHECK(d.integral_drift_max > 1e-3);
}

TEST_CASE("scaled K column is flagged") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = torus_mesh();
  // the FD velocity norms no longer match the recorded scaling
  for (int ig = 0; ig < m.n_gamma; ++ig) m.at(12, ig).K *= 1.1;
  DiagnosticsReport d = mesh_diagnostics(m, t);
  CHECK(d.conformality_max > 1e-2);
}

TEST_CASE("hopf check refuses a non-conformal mesh") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = torus_mesh();
  for (auto& nd : m.nodes) nd.f_pullback.z *= 1.2;  // shear the embedding
  CHECK_THROWS_AS(hopf_realness(m, t), NotConformalEnough);
  CHECK_NOTHROW(hopf_realness(m, t, 10.0));  // explicit limit bypass
}

TEST_CASE("hopf coefficient sees a checker-pattern fault") {
  // perturb f along N with a period-4 sign pattern whose mixed difference
  // does not cancel: creates a spurious m'
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = torus_mesh();
  auto sgn = [](int i) { return (i % 4) < 2 ? 1.0 : -1.0; };
  for (int ib = 0; ib < m.n_beta; ++ib)
    for (int ig = 0; ig < m.n_gamma; ++ig) {
      auto& nd = m.at(ib, ig);
      const Vec3 N = fundamental(jet(t, nd.x, nd.y)).N;
      nd.f_pullback += (1e-2 * sgn(ib) * sgn(ig)) * N;
    }
  CHECK(hopf_realness(m, t, 10.0) > 1e-2);
}

TEST_CASE("cylinder mesh diagnostics are at machine level") {
  SurfaceDef c = parse_surface("builtin:cylinder?R=2");
  IsoMesh m = build_mesh(c, 0.0, 0.5, 1.0, 0, 2e-4, 2e-4, 11, 11);
  DiagnosticsReport d = mesh_diagnostics(m, c);
  CHECK(d.conformality_max <= 1e-8);
  CHECK(d.orthogonality_max <= 1e-8);
  CHECK(d.curvature_line_max <= 1e-8);
  CHECK(hopf_realness(m, c) <= 1e-8);
}

TEST_CASE("refining the mesh does not worsen the diagnostics") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  DiagnosticsReport a = mesh_diagnostics(torus_mesh(21, 0.04), t);
  DiagnosticsReport b = mesh_diagnostics(torus_mesh(41, 0.02), t);
  // factor-1.5 allowance for FD noise; residuals already at the roundoff
  // floor are exempt
  auto ok = [](double coarse, double fine) {
    return fine <= 1.5 * coarse || (coarse <= 1e-9 && fine <= 1e-9);
  };
  CHECK(ok(a.conformality_max, b.conformality_max));
  CHECK(ok(a.orthogonality_max, b.orthogonality_max));
  CHECK(ok(a.curvature_line_max, b.curvature_line_max));
}

TEST_CASE("hopf and curvature-line residuals measure the same fault") {
  // inject a small m'-type fault so both residuals are signal-dominated;
  // they differ only in normalization and stay within a factor 4
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = torus_mesh();
  auto sgn = [](int i) { return (i % 4) < 2 ? 1.0 : -1.0; };
  for (int ib = 0; ib < m.n_beta; ++ib)
    for (int ig = 0; ig < m.n_gamma; ++ig) {
      auto& nd = m.at(ib, ig);
      const Vec3 N = fundamental(jet(t, nd.x, nd.y)).N;
      nd.f_pullback += (1e-7 * sgn(ib) * sgn(ig)) * N;
    }
  DiagnosticsReport d = mesh_diagnostics(m, t);
  const double hopf = hopf_realness(m, t, 10.0);
  CHECK(hopf <= 4.0 * d.curvature_line_max);
  CHECK(d.curvature_line_max <= 4.0 * hopf);
}

TEST_CASE("OBJ export counts and indexing") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  IsoMesh m = torus_mesh(11, 0.05);
  m.at(0, 0).valid = false;  // knock out one corner
  std::ostringstream os;
  write_obj(os, m);
  std::istringstream is(os.str());
  std::string line;
  int nv = 0, nf = 0;
  while (std::getline(is, line)) {
    if (line.rfind("v ", 0) == 0) ++nv;
    if (line.rfind("f ", 0) == 0) {
      ++nf;
      std::istringstream ls(line.substr(2));
      int idx;
      while (ls >> idx) {
        CHECK(idx >= 1);
        CHECK(idx <= nv + 1000);
      }
    }
  }
  CHECK(nv == 11 * 11 - 1);
  CHECK(nf == 10 * 10 - 1);  // the corner cell is dropped
}

TEST_CASE("config JSON round trip") {
  RunConfig c;
  c.surface_spec = "builtin:torus?R=2,r=1";
  c.x0 = 0.25;
  c.y0 = -1.5;
  c.K0 = 2.0;
  c.branch = 3;
  c.h_beta = 0.01;
  c.h_gamma = 0.03;
  c.n_beta = 7;
  c.n_gamma = 9;
  c.tol_umbilic = 1e-7;
  c.fd_step = 1e-3;
  c.workers = 5;
  RunConfig r = config_from_json(config_to_json(c));
  CHECK(r.surface_spec == c.surface_spec);
  CHECK(r.x0 == c.x0);
  CHECK(r.y0 == c.y0);
  CHECK(r.K0 == c.K0);
  CHECK(r.branch == c.branch);
  CHECK(r.h_beta == c.h_beta);
  CHECK(r.h_gamma == c.h_gamma);
  CHECK(r.n_beta == c.n_beta);
  CHECK(r.n_gamma == c.n_gamma);
  CHECK(r.tol_umbilic == c.tol_umbilic);
  CHECK(r.fd_step == c.fd_step);
  CHECK(r.workers == c.workers);
}
