#pragma once

#include <cmath>
#include <optional>

#include "isonet/forms.hpp"
#include "isonet/surface.hpp"

namespace isonet {

// Rotation angle applied to the Gram-Schmidt frame to align it with the
// principal directions. Four values a quarter turn apart satisfy the
// defining tan(2a) equation; `branch` selects among them.
struct FrameAngle {
  double alpha;
  int branch;
  double x = 0.0, y = 0.0;
};

struct AlphaGradient {
  double ax, ay;
  double step;
};

struct FrameVectors {
  Vec3 D1, D2;          // orthonormal Gram-Schmidt frame
  Vec3 f_gamma, f_beta;  // rotated and scaled velocities, both of magnitude K
  double K;
};

struct KRhs {
  double K_gamma, K_beta;
};

struct ChartRhs {
  double x_gamma, x_beta, y_gamma, y_beta;
};

inline double default_fd_step(double x, double y) {
  return 1e-5 * std::max({1.0, std::abs(x), std::abs(y)});
}

// Shifts `a` by multiples of pi/2 to land within pi/4 of `target`.
inline double snap_quarter(double a, double target) {
  const double q = kPi / 2.0;
  return a + std::round((target - a) / q) * q;
}

inline FrameAngle alpha_angle(const FundamentalData& fd, int branch = 0,
                              std::optional<FrameAngle> continuity_hint = {},
                              double umbilic_tol = 1e-8) {
  if (is_umbilic(fd, umbilic_tol))
    throw UmbilicPoint("rotation angle undetermined at umbilic point");
  double num, den;
  alpha_atan2_args(fd, num, den);
  double a = 0.5 * std::atan2(num, den);
  // canonical branch-0 value in (-pi/4, pi/4]
  a = snap_quarter(a, 0.0);
  if (a <= -kPi / 4.0) a += kPi / 2.0;
  a += branch * (kPi / 2.0);
  if (continuity_hint) a = snap_quarter(a, continuity_hint->alpha);
  return {a, branch};
}

// Central-difference gradient of the angle field; neighbors are unwrapped
// modulo pi/2 against the center before differencing.
inline AlphaGradient alpha_gradient(const SurfaceDef& s, double x, double y,
                                    int branch = 0, double h = 0.0,
                                    double umbilic_tol = 1e-8) {
  if (h <= 0.0) h = default_fd_step(x, y);
  const FrameAngle center = alpha_angle(fundamental(jet(s, x, y)), branch, {}, umbilic_tol);
  auto at = [&](double px, double py) {
    FrameAngle a = alpha_angle(fundamental(jet(s, px, py)), branch, center, umbilic_tol);
    return a.alpha;
  };
  AlphaGradient g;
  g.ax = (at(x + h, y) - at(x - h, y)) / (2.0 * h);
  g.ay = (at(x, y + h) - at(x, y - h)) / (2.0 * h);
  g.step = h;
  return g;
}

inline FrameVectors frames(const Jet2& j, const FundamentalData& fd, const FrameAngle& a,
                           double K) {
  const double sE = std::sqrt(fd.E);
  FrameVectors fv;
  fv.D1 = j.fx / sE;
  fv.D2 = (fd.E * j.fy - fd.F * j.fx) / (sE * fd.W);
  const double c = std::cos(a.alpha), s = std::sin(a.alpha);
  fv.f_gamma = K * (c * fv.D1 + s * fv.D2);
  fv.f_beta = K * (-s * fv.D1 + c * fv.D2);
  fv.K = K;
  return fv;
}

// The four coefficient fields of the K-system and the existence condition.
// P-fields come from exact metric partials, Q-fields from the angle gradient.
struct PQFields {
  double P1, P2, Q1, Q2;
};

inline PQFields pq_fields(const FundamentalData& fd, const AlphaGradient& g) {
  const double sE = std::sqrt(fd.E);
  const double sGF = fd.W / sE;  // sqrt(G - F^2/E)
  PQFields f;
  f.P1 = (fd.F * fd.F / (fd.E * fd.E) * fd.Ex - 2.0 * fd.F / fd.E * fd.Fx + fd.Gx) /
         (2.0 * sGF * sGF * sE);
  f.P2 = (-fd.Ey - fd.F / fd.E * fd.Ex + 2.0 * fd.Fx) / (2.0 * fd.E * sGF);
  f.Q1 = (g.ay - fd.F / fd.E * g.ax) / sGF;
  f.Q2 = g.ax / sE;
  return f;
}

inline KRhs k_rhs(const FundamentalData& fd, const FrameAngle& a, const AlphaGradient& g,
                  double K) {
  const PQFields f = pq_fields(fd, g);
  const double c = std::cos(a.alpha), s = std::sin(a.alpha);
  const double K2 = K * K;
  return {K2 * ((f.P1 + f.Q1) * c - (f.P2 + f.Q2) * s),
          K2 * (-(f.P1 + f.Q1) * s - (f.P2 + f.Q2) * c)};
}

inline ChartRhs chart_rhs(const FundamentalData& fd, const FrameAngle& a, double K) {
  const double sE = std::sqrt(fd.E);
  const double sGF = fd.W / sE;
  const double c = std::cos(a.alpha), s = std::sin(a.alpha);
  ChartRhs r;
  r.x_gamma = K * (c / sE - fd.F * s / (sE * fd.W));
  r.x_beta = K * (-s / sE - fd.F * c / (sE * fd.W));
  r.y_gamma = K * s / sGF;
  r.y_beta = K * c / sGF;
  return r;
}

// ---------------------------------------------------------------------------
// Existence condition (compatibility of the K-system)

namespace detail {

struct FieldSample {
  FundamentalData fd;
  AlphaGradient g;
  PQFields pq;
};

inline FieldSample sample_fields(const SurfaceDef& s, double x, double y, int branch,
                                 double umbilic_tol) {
  FieldSample fs;
  fs.fd = fundamental(jet(s, x, y));
  fs.g = alpha_gradient(s, x, y, branch, 0.0, umbilic_tol);
  fs.pq = pq_fields(fs.fd, fs.g);
  return fs;
}

}  // namespace detail

// Signed left side of the compatibility condition; zero means a scaling
// function K exists and the surface admits isothermic coordinates through
// this construction. Outer derivatives of the assembled P/Q fields are
// central differences with step h.
inline double existence_residual(const SurfaceDef& s, double x, double y, int branch = 0,
                                 double h = 0.0, double umbilic_tol = 1e-8) {
  if (h <= 0.0) h = 1e-4 * std::max({1.0, std::abs(x), std::abs(y)});
  const auto c = detail::sample_fields(s, x, y, branch, umbilic_tol);
  const auto xp = detail::sample_fields(s, x + h, y, branch, umbilic_tol);
  const auto xm = detail::sample_fields(s, x - h, y, branch, umbilic_tol);
  const auto yp = detail::sample_fields(s, x, y + h, branch, umbilic_tol);
  const auto ym = detail::sample_fields(s, x, y - h, branch, umbilic_tol);

  const double dP1_dx = (xp.pq.P1 - xm.pq.P1) / (2.0 * h);
  const double dP1_dy = (yp.pq.P1 - ym.pq.P1) / (2.0 * h);
  const double dP2_dx = (xp.pq.P2 - xm.pq.P2) / (2.0 * h);
  const double dQ1_dx = (xp.pq.Q1 - xm.pq.Q1) / (2.0 * h);
  const double dQ1_dy = (yp.pq.Q1 - ym.pq.Q1) / (2.0 * h);
  const double dQ2_dx = (xp.pq.Q2 - xm.pq.Q2) / (2.0 * h);

  const double sE = std::sqrt(c.fd.E);
  const double sGF = c.fd.W / sE;
  const double FoE = c.fd.F / c.fd.E;

  return (dP1_dy - FoE * dP1_dx) / sGF + dP2_dx / sE + c.pq.P1 * c.pq.Q2 -
         c.pq.P2 * c.pq.Q1 -
         (dQ2_dx / sE + c.pq.Q1 * c.pq.Q2 + dQ1_dy / sGF -
          FoE * (dQ1_dx + c.pq.Q2 * c.g.ax) / sGF);
}

enum class ReductionCase {
  orthogonal,  // F = 0
  isothermal,  // F = 0 and E = G
  revolution,  // F = 0 and m = 0 (alpha identically zero)
};

// Reduced existence conditions for the special chart classes. The case
// hypothesis is checked at p before evaluation.
inline double existence_residual_special(const SurfaceDef& s, double x, double y,
                                         ReductionCase rc, double h = 0.0,
                                         double umbilic_tol = 1e-8) {
  if (h <= 0.0) h = 1e-4 * std::max({1.0, std::abs(x), std::abs(y)});
  const FundamentalData fd = fundamental(jet(s, x, y));
  const double mscale = fd.E + fd.G;
  if (std::abs(fd.F) > 1e-9 * mscale)
    throw HypothesisViolated("reduction requires F = 0");
  if (rc == ReductionCase::isothermal && std::abs(fd.E - fd.G) > 1e-9 * mscale)
    throw HypothesisViolated("isothermal reduction requires E = G");
  if (rc == ReductionCase::revolution &&
      std::abs(fd.m) > 1e-9 * (std::abs(fd.l) + std::abs(fd.m) + std::abs(fd.n) + kAbsFloor))
    throw HypothesisViolated("revolution reduction requires m = 0");

  if (rc == ReductionCase::revolution) {
    // [ln(G/E)]_xy = 0 via a mixed central difference
    auto v = [&](double px, double py) {
      const FundamentalData f = fundamental(jet(s, px, py));
      return std::log(f.G / f.E);
    };
    return (v(x + h, y + h) - v(x + h, y - h) - v(x - h, y + h) + v(x - h, y - h)) /
           (4.0 * h * h);
  }

  struct Pt {
    FundamentalData fd;
    AlphaGradient g;
  };
  auto at = [&](double px, double py) -> Pt {
    return {fundamental(jet(s, px, py)), alpha_gradient(s, px, py, 0, 0.0, umbilic_tol)};
  };
  const Pt ctr{fd, alpha_gradient(s, x, y, 0, 0.0, umbilic_tol)};
  const Pt xp = at(x + h, y), xm = at(x - h, y), yp = at(x, y + h), ym = at(x, y - h);

  if (rc == ReductionCase::isothermal) {
    auto cx = [](const Pt& p) { return p.g.ax / p.fd.E; };
    auto cy = [](const Pt& p) { return p.g.ay / p.fd.E; };
    return (cx(xp) - cx(xm)) / (2.0 * h) + ctr.g.ay * ctr.g.ax / ctr.fd.E +
           (cy(yp) - cy(ym)) / (2.0 * h);
  }

  // orthogonal case (F = 0)
  auto fa = [](const Pt& p) { return p.fd.Gx / (2.0 * p.fd.G * std::sqrt(p.fd.E)); };
  auto fb = [](const Pt& p) { return p.fd.Ey / (2.0 * std::sqrt(p.fd.G) * p.fd.E); };
  auto fc = [](const Pt& p) { return p.g.ax / std::sqrt(p.fd.E); };
  auto fdl = [](const Pt& p) { return p.g.ay / std::sqrt(p.fd.G); };
  const double dA_dy = (fa(yp) - fa(ym)) / (2.0 * h);
  const double dB_dx = (fb(xp) - fb(xm)) / (2.0 * h);
  const double dC_dx = (fc(xp) - fc(xm)) / (2.0 * h);
  const double dD_dy = (fdl(yp) - fdl(ym)) / (2.0 * h);
  return dA_dy / std::sqrt(ctr.fd.G) - dB_dx / std::sqrt(ctr.fd.E) +
         (ctr.fd.Gx * ctr.g.ax + ctr.fd.Ey * ctr.g.ay) / (2.0 * ctr.fd.G * ctr.fd.E) -
         (dC_dx / std::sqrt(ctr.fd.E) +
          ctr.g.ay * ctr.g.ax / std::sqrt(ctr.fd.G * ctr.fd.E) + dD_dy / std::sqrt(ctr.fd.G));
}

}  // namespace isonet
