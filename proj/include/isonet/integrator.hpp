#pragma once

#include <cmath>
#include <optional>
#include <thread>
#include <vector>

#include "isonet/isothermic.hpp"
#include "isonet/surface.hpp"

namespace isonet {

enum class Direction { beta, gamma };

// One point of the march through the original chart: position (x, y), the
// scaling K, the accumulated position integral, and the angle hint that
// keeps the branch continuous along the trajectory.
struct MarchState {
  double x, y;
  double K;
  int branch = 0;
  std::optional<FrameAngle> alpha_hint;
  Vec3 f_int;
};

namespace detail {

struct Rhs {
  double dx, dy, dK;
  Vec3 df;
  FrameAngle a;
};

inline Rhs eval_rhs(const SurfaceDef& s, double x, double y, double K, int branch,
                    const std::optional<FrameAngle>& hint, Direction dir,
                    double umbilic_tol) {
  const Jet2 j = jet(s, x, y);
  const FundamentalData fd = fundamental(j);
  const FrameAngle a = alpha_angle(fd, branch, hint, umbilic_tol);
  const AlphaGradient g = alpha_gradient(s, x, y, branch, 0.0, umbilic_tol);
  const ChartRhs cr = chart_rhs(fd, a, K);
  const KRhs kr = k_rhs(fd, a, g, K);
  const FrameVectors fv = frames(j, fd, a, K);
  if (dir == Direction::gamma) return {cr.x_gamma, cr.y_gamma, kr.K_gamma, fv.f_gamma, a};
  return {cr.x_beta, cr.y_beta, kr.K_beta, fv.f_beta, a};
}

}  // namespace detail

// Classical fourth-order Runge-Kutta step of (x, y, K, f_int) in the chosen
// coordinate direction. The angle is recomputed at every stage with the
// continuity hint threaded through; the final-stage angle becomes the hint
// of the returned state.
inline MarchState rk4_step(const SurfaceDef& s, const MarchState& st, Direction dir,
                           double h, double umbilic_tol = 1e-8) {
  if (h == 0.0) return st;
  using detail::eval_rhs;
  const auto k1 = eval_rhs(s, st.x, st.y, st.K, st.branch, st.alpha_hint, dir, umbilic_tol);
  const auto k2 = eval_rhs(s, st.x + 0.5 * h * k1.dx, st.y + 0.5 * h * k1.dy,
                           st.K + 0.5 * h * k1.dK, st.branch, k1.a, dir, umbilic_tol);
  const auto k3 = eval_rhs(s, st.x + 0.5 * h * k2.dx, st.y + 0.5 * h * k2.dy,
                           st.K + 0.5 * h * k2.dK, st.branch, k2.a, dir, umbilic_tol);
  const auto k4 = eval_rhs(s, st.x + h * k3.dx, st.y + h * k3.dy, st.K + h * k3.dK,
                           st.branch, k3.a, dir, umbilic_tol);
  MarchState out = st;
  out.x += h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.y += h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  out.K += h / 6.0 * (k1.dK + 2.0 * k2.dK + 2.0 * k3.dK + k4.dK);
  out.f_int += h / 6.0 * (k1.df + 2.0 * k2.df + 2.0 * k3.df + k4.df);
  out.alpha_hint = k4.a;
  if (!(out.K > 0.0)) throw Error("scaling K left the positive range");
  return out;
}

struct MeshNode {
  double x = 0.0, y = 0.0, K = 0.0;
  Vec3 f_pullback, f_int;
  bool valid = false;
};

// Rectangular grid over the constructed (beta, gamma) coordinates.
// Node (i_beta, i_gamma) sits at (beta, gamma) = (i_beta*h_beta, i_gamma*h_gamma)
// relative to the origin.
struct IsoMesh {
  int n_beta = 0, n_gamma = 0;
  double h_beta = 0.0, h_gamma = 0.0;
  double x0 = 0.0, y0 = 0.0, K0 = 1.0;
  int branch = 0;
  std::vector<MeshNode> nodes;  // row-major: [i_beta * n_gamma + i_gamma]

  MeshNode& at(int ib, int ig) { return nodes[static_cast<std::size_t>(ib) * n_gamma + ig]; }
  const MeshNode& at(int ib, int ig) const {
    return nodes[static_cast<std::size_t>(ib) * n_gamma + ig];
  }
};

namespace detail {

inline bool store_node(const SurfaceDef& s, const MarchState& st, MeshNode& node) {
  try {
    node.f_pullback = jet(s, st.x, st.y).f;
  } catch (const Error&) {
    return false;
  }
  node.x = st.x;
  node.y = st.y;
  node.K = st.K;
  node.f_int = st.f_int;
  node.valid = true;
  return true;
}

}  // namespace detail

// Marches the base row along beta first, then every column along gamma,
// exactly in the order the construction prescribes. Umbilic or domain-exit
// failures truncate the affected row/column; nothing is extrapolated.
inline IsoMesh build_mesh(const SurfaceDef& s, double x0, double y0, double K0, int branch,
                          double h_beta, double h_gamma, int n_beta, int n_gamma,
                          int workers = 1, double umbilic_tol = 1e-8) {
  if (n_beta < 2 || n_gamma < 2) throw Error("mesh needs at least 2x2 nodes");
  if (!(K0 > 0.0)) throw Error("K0 must be positive");
  if (h_beta == 0.0 || h_gamma == 0.0) throw Error("steps must be nonzero");

  if (!s.domain.contains(x0, y0)) throw SeedOutOfDomain("mesh origin outside domain");
  {
    const FundamentalData fd0 = fundamental(jet(s, x0, y0));
    if (is_umbilic(fd0, umbilic_tol)) throw SeedUmbilic("mesh origin is umbilic");
  }

  IsoMesh mesh;
  mesh.n_beta = n_beta;
  mesh.n_gamma = n_gamma;
  mesh.h_beta = h_beta;
  mesh.h_gamma = h_gamma;
  mesh.x0 = x0;
  mesh.y0 = y0;
  mesh.K0 = K0;
  mesh.branch = branch;
  mesh.nodes.assign(static_cast<std::size_t>(n_beta) * n_gamma, MeshNode{});

  // base row, gamma = 0
  std::vector<std::optional<MarchState>> base(n_beta);
  MarchState st{x0, y0, K0, branch, {}, Vec3{}};
  st.f_int = jet(s, x0, y0).f;
  base[0] = st;
  detail::store_node(s, st, mesh.at(0, 0));
  for (int i = 1; i < n_beta; ++i) {
    try {
      st = rk4_step(s, st, Direction::beta, h_beta, umbilic_tol);
    } catch (const Error&) {
      break;
    }
    if (!detail::store_node(s, st, mesh.at(i, 0))) break;
    base[i] = st;
  }

  auto march_column = [&](int ib) {
    if (!base[ib]) return;
    MarchState cst = *base[ib];
    for (int j = 1; j < n_gamma; ++j) {
      try {
        cst = rk4_step(s, cst, Direction::gamma, h_gamma, umbilic_tol);
      } catch (const Error&) {
        return;
      }
      if (!detail::store_node(s, cst, mesh.at(ib, j))) return;
    }
  };

  if (workers <= 1) {
    for (int ib = 0; ib < n_beta; ++ib) march_column(ib);
  } else {
    std::vector<std::thread> pool;
    const int nw = std::min(workers, n_beta);
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
      pool.emplace_back([&, w] {
        for (int ib = w; ib < n_beta; ib += nw) march_column(ib);
      });
    }
    for (auto& t : pool) t.join();
  }
  return mesh;
}

// Endpoint discrepancy between beta-then-gamma and gamma-then-beta marches
// to node (N, N). Zero up to integration error when the K-system is
// compatible.
inline double path_independence_check(const SurfaceDef& s, double x0, double y0, double K0,
                                      int branch, double h_beta, double h_gamma, int steps,
                                      double umbilic_tol = 1e-8) {
  MarchState seed{x0, y0, K0, branch, {}, Vec3{}};
  seed.f_int = jet(s, x0, y0).f;

  auto run = [&](Direction first, Direction second) {
    MarchState st = seed;
    const double h1 = first == Direction::beta ? h_beta : h_gamma;
    const double h2 = second == Direction::beta ? h_beta : h_gamma;
    for (int i = 0; i < steps; ++i) st = rk4_step(s, st, first, h1, umbilic_tol);
    for (int i = 0; i < steps; ++i) st = rk4_step(s, st, second, h2, umbilic_tol);
    return st;
  };

  const MarchState a = run(Direction::beta, Direction::gamma);
  const MarchState b = run(Direction::gamma, Direction::beta);
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y),
                   std::abs(a.K - b.K) / a.K, norm(a.f_int - b.f_int)});
}

}  // namespace isonet
