#pragma once

#include <cmath>

#include "isonet/forms.hpp"
#include "isonet/integrator.hpp"
#include "isonet/isothermic.hpp"
#include "isonet/surface.hpp"

namespace isonet {

// Residuals of the defining properties of isothermic coordinates, measured
// on a constructed mesh with grid-level finite differences only. The checker
// deliberately shares no derivative code with the generator.
struct DiagnosticsReport {
  double conformality_max = 0.0;    // max | ||f_b or g|| - K | / K
  double orthogonality_max = 0.0;   // max |<f_b, f_g>| / K^2
  double curvature_line_max = 0.0;  // max |m'| / (|l'| + |n'| + eps)
  double path_independence = 0.0;   // filled in by the caller
  double integral_drift_max = 0.0;  // max ||f_pullback - f_int||
  double hopf_imag_max = 0.0;       // max |Im Q| / (|Q| + eps)
  int n_valid = 0;
  int n_interior = 0;
  int n_beta = 0, n_gamma = 0;
};

namespace detail {

inline bool interior_valid(const IsoMesh& m, int ib, int ig) {
  if (ib < 2 || ig < 2 || ib >= m.n_beta - 2 || ig >= m.n_gamma - 2) return false;
  for (int di = -2; di <= 2; ++di)
    for (int dj = -2; dj <= 2; ++dj)
      if (!m.at(ib + di, ig + dj).valid) return false;
  return true;
}

struct GridDerivs {
  Vec3 f_beta, f_gamma;          // first derivatives in the new chart
  Vec3 f_bb, f_bg, f_gg;         // second derivatives
};

inline GridDerivs grid_derivs(const IsoMesh& m, int ib, int ig) {
  const double hb = m.h_beta, hg = m.h_gamma;
  auto f = [&](int i, int j) { return m.at(i, j).f_pullback; };
  GridDerivs d;
  // fourth-order first derivatives: the conformality and orthogonality
  // residuals compare against exact quantities, so checker truncation must
  // sit well below the tolerances
  d.f_beta = (-f(ib + 2, ig) + 8.0 * f(ib + 1, ig) - 8.0 * f(ib - 1, ig) +
              f(ib - 2, ig)) /
             (12.0 * hb);
  d.f_gamma = (-f(ib, ig + 2) + 8.0 * f(ib, ig + 1) - 8.0 * f(ib, ig - 1) +
               f(ib, ig - 2)) /
              (12.0 * hg);
  d.f_bb = (f(ib + 1, ig) - 2.0 * f(ib, ig) + f(ib - 1, ig)) / (hb * hb);
  d.f_gg = (f(ib, ig + 1) - 2.0 * f(ib, ig) + f(ib, ig - 1)) / (hg * hg);
  d.f_bg = (f(ib + 1, ig + 1) - f(ib + 1, ig - 1) - f(ib - 1, ig + 1) + f(ib - 1, ig - 1)) /
           (4.0 * hb * hg);
  return d;
}

}  // namespace detail

inline DiagnosticsReport mesh_diagnostics(const IsoMesh& mesh, const SurfaceDef& s) {
  DiagnosticsReport r;
  r.n_beta = mesh.n_beta;
  r.n_gamma = mesh.n_gamma;
  for (const auto& nd : mesh.nodes)
    if (nd.valid) {
      ++r.n_valid;
      r.integral_drift_max = std::max(r.integral_drift_max, norm(nd.f_pullback - nd.f_int));
    }

  for (int ib = 2; ib < mesh.n_beta - 2; ++ib) {
    for (int ig = 2; ig < mesh.n_gamma - 2; ++ig) {
      if (!detail::interior_valid(mesh, ib, ig)) continue;
      ++r.n_interior;
      const auto& nd = mesh.at(ib, ig);
      const auto d = detail::grid_derivs(mesh, ib, ig);
      const Vec3 N = fundamental(jet(s, nd.x, nd.y)).N;
      const double lp = dot(d.f_bb, N);
      const double mp = dot(d.f_bg, N);
      const double np = dot(d.f_gg, N);
      // both velocities must have magnitude K; comparing each against the
      // recorded scaling (rather than against each other) also catches a
      // corrupted K field
      r.conformality_max =
          std::max({r.conformality_max, std::abs(norm(d.f_beta) - nd.K) / nd.K,
                    std::abs(norm(d.f_gamma) - nd.K) / nd.K});
      r.orthogonality_max =
          std::max(r.orthogonality_max, std::abs(dot(d.f_beta, d.f_gamma)) / (nd.K * nd.K));
      r.curvature_line_max = std::max(
          r.curvature_line_max, std::abs(mp) / (std::abs(lp) + std::abs(np) + kAbsFloor));
    }
  }
  if (r.n_interior == 0) throw MeshTooSmall("no valid 5x5 interior region in mesh");
  return r;
}

// Hopf coefficient Q = (l' - n')/4 - i m'/2 in the constructed chart;
// real exactly when the chart is isothermic. Presumes near-conformality.
inline double hopf_realness(const IsoMesh& mesh, const SurfaceDef& s,
                            double conformality_limit = 1e-3) {
  DiagnosticsReport base = mesh_diagnostics(mesh, s);
  if (base.conformality_max > conformality_limit)
    throw NotConformalEnough("mesh is not conformal enough for the Hopf check");
  double worst = 0.0;
  for (int ib = 2; ib < mesh.n_beta - 2; ++ib) {
    for (int ig = 2; ig < mesh.n_gamma - 2; ++ig) {
      if (!detail::interior_valid(mesh, ib, ig)) continue;
      const auto& nd = mesh.at(ib, ig);
      const auto d = detail::grid_derivs(mesh, ib, ig);
      const Vec3 N = fundamental(jet(s, nd.x, nd.y)).N;
      const double lp = dot(d.f_bb, N);
      const double mp = dot(d.f_bg, N);
      const double np = dot(d.f_gg, N);
      const double re = (lp - np) / 4.0;
      const double im = -mp / 2.0;
      const double q = std::sqrt(re * re + im * im);
      worst = std::max(worst, std::abs(im) / (q + kAbsFloor));
    }
  }
  return worst;
}

// Brute-force check of the angle construction: the rotated frame must point
// along a shape-operator eigenvector. Returns the angle (radians) between
// f_gamma and the nearest principal direction.
inline double principal_direction_oracle(const SurfaceDef& s, double x, double y,
                                         const FrameAngle& a, double umbilic_tol = 1e-8) {
  const Jet2 j = jet(s, x, y);
  const FundamentalData fd = fundamental(j);
  if (is_umbilic(fd, umbilic_tol))
    throw UmbilicPoint("principal directions undetermined at umbilic point");
  const CurvatureData cd = curvature(fd);
  const Vec3 g = normalized(frames(j, fd, a, 1.0).f_gamma);
  auto dev = [&](const Vec3& e) {
    // sine of the angle; well-conditioned near alignment, unlike acos(dot)
    return std::asin(std::min(1.0, norm(cross(g, e))));
  };
  return std::min(dev(cd.e1), dev(cd.e2));
}

}  // namespace isonet
