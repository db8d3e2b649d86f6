#pragma once

#include <cmath>

#include "isonet/errors.hpp"
#include "isonet/surface.hpp"
#include "isonet/vec3.hpp"

namespace isonet {

inline constexpr double kAbsFloor = 1e-14;

// First and second fundamental forms, Gauss map, and the metric partials
// consumed by the K-system. Everything comes from closed inner-product
// identities on the jet; no finite differencing.
struct FundamentalData {
  double E, F, G;       // first form
  double l, m, n;       // second form
  Vec3 N;               // unit normal (f_x x f_y direction)
  double Ex, Ey, Fx, Gx;  // metric partials
  double W;             // sqrt(EG - F^2)
  Vec3 fx, fy;          // velocities, kept for frame construction
};

struct CurvatureData {
  double H;        // mean curvature
  double K_gauss;  // Gaussian curvature
  double k1, k2;   // principal curvatures, k1 >= k2
  Vec3 e1, e2;     // unit principal directions in ambient space
};

inline FundamentalData fundamental(const Jet2& j) {
  FundamentalData fd;
  fd.E = dot(j.fx, j.fx);
  fd.F = dot(j.fx, j.fy);
  fd.G = dot(j.fy, j.fy);
  const double det = fd.E * fd.G - fd.F * fd.F;
  const double cl2 = std::max({1.0, fd.E, fd.G});
  if (det <= 1e-20 * cl2 * cl2) throw DegenerateMetric("EG - F^2 not positive");
  fd.W = std::sqrt(det);
  fd.N = cross(j.fx, j.fy) / fd.W;
  fd.l = dot(j.fxx, fd.N);
  fd.m = dot(j.fxy, fd.N);
  fd.n = dot(j.fyy, fd.N);
  fd.Ex = 2.0 * dot(j.fxx, j.fx);
  fd.Ey = 2.0 * dot(j.fxy, j.fx);
  fd.Fx = dot(j.fxx, j.fy) + dot(j.fx, j.fxy);
  fd.Gx = 2.0 * dot(j.fxy, j.fy);
  fd.fx = j.fx;
  fd.fy = j.fy;
  return fd;
}

// Shape operator in the {f_x, f_y} basis: S = I^{-1} II.
// Columns act on coordinates (a, b) of v = a f_x + b f_y.
struct ShapeMatrix {
  double s11, s12, s21, s22;
};

inline ShapeMatrix shape_matrix(const FundamentalData& fd) {
  const double det = fd.E * fd.G - fd.F * fd.F;
  return {(fd.l * fd.G - fd.m * fd.F) / det, (fd.m * fd.G - fd.n * fd.F) / det,
          (fd.m * fd.E - fd.l * fd.F) / det, (fd.n * fd.E - fd.m * fd.F) / det};
}

inline CurvatureData curvature(const FundamentalData& fd) {
  CurvatureData cd;
  const double det = fd.E * fd.G - fd.F * fd.F;
  cd.H = (fd.E * fd.n - 2.0 * fd.F * fd.m + fd.G * fd.l) / (2.0 * det);
  cd.K_gauss = (fd.l * fd.n - fd.m * fd.m) / det;
  const double disc = std::max(0.0, cd.H * cd.H - cd.K_gauss);
  const double root = std::sqrt(disc);
  cd.k1 = cd.H + root;
  cd.k2 = cd.H - root;

  // eigenvectors of the 2x2 shape matrix, mapped to ambient space
  const ShapeMatrix S = shape_matrix(fd);
  auto eigvec = [&](double kappa) -> Vec3 {
    // (S - kappa I) (a, b)^T = 0; pick the better-conditioned row
    const double r1a = S.s11 - kappa, r1b = S.s12;
    const double r2a = S.s21, r2b = S.s22 - kappa;
    double a, b;
    if (std::abs(r1a) + std::abs(r1b) >= std::abs(r2a) + std::abs(r2b)) {
      a = -r1b;
      b = r1a;
    } else {
      a = -r2b;
      b = r2a;
    }
    Vec3 v = a * fd.fx + b * fd.fy;
    const double nv = norm(v);
    if (nv <= kAbsFloor) {
      // near-umbilic: any tangent direction is principal
      return normalized(fd.fx);
    }
    return v / nv;
  };
  cd.e1 = eigvec(cd.k1);
  cd.e2 = eigvec(cd.k2);
  return cd;
}

// Arguments of the rotation-angle formula tan(2a) = num / den. Both vanish
// exactly at umbilic points, which is the degeneracy this test detects.
inline void alpha_atan2_args(const FundamentalData& fd, double& num, double& den) {
  num = -2.0 * (-fd.F * fd.l + fd.E * fd.m) * fd.W;
  den = (2.0 * fd.F * fd.F - fd.E * fd.G) * fd.l - 2.0 * fd.E * fd.F * fd.m +
        fd.E * fd.E * fd.n;
}

inline bool is_umbilic(const FundamentalData& fd, double tol = 1e-8) {
  double num, den;
  alpha_atan2_args(fd, num, den);
  const double scale =
      (fd.E + fd.G) * (std::abs(fd.l) + std::abs(fd.m) + std::abs(fd.n)) + kAbsFloor;
  return std::abs(num) <= tol * scale && std::abs(den) <= tol * scale;
}

}  // namespace isonet
