#pragma once

#include <cmath>

namespace isonet {

// Truncated second-order Taylor arithmetic in two independent variables.
// Carries the value, both first partials, and the three second partials of
// a scalar expression through ordinary arithmetic, so a single evaluation
// produces an exact 2-jet (no finite differencing).
struct Dual2 {
  double v = 0.0;
  double dx = 0.0, dy = 0.0;
  double dxx = 0.0, dxy = 0.0, dyy = 0.0;

  Dual2() = default;
  explicit Dual2(double value) : v(value) {}

  static Dual2 constant(double c) { return Dual2(c); }
  static Dual2 var_x(double value) {
    Dual2 d(value);
    d.dx = 1.0;
    return d;
  }
  static Dual2 var_y(double value) {
    Dual2 d(value);
    d.dy = 1.0;
    return d;
  }
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v + b.v;
  r.dx = a.dx + b.dx;
  r.dy = a.dy + b.dy;
  r.dxx = a.dxx + b.dxx;
  r.dxy = a.dxy + b.dxy;
  r.dyy = a.dyy + b.dyy;
  return r;
}

inline Dual2 operator-(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v - b.v;
  r.dx = a.dx - b.dx;
  r.dy = a.dy - b.dy;
  r.dxx = a.dxx - b.dxx;
  r.dxy = a.dxy - b.dxy;
  r.dyy = a.dyy - b.dyy;
  return r;
}

inline Dual2 operator-(const Dual2& a) {
  Dual2 r;
  r.v = -a.v;
  r.dx = -a.dx;
  r.dy = -a.dy;
  r.dxx = -a.dxx;
  r.dxy = -a.dxy;
  r.dyy = -a.dyy;
  return r;
}

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  Dual2 r;
  r.v = a.v * b.v;
  r.dx = a.dx * b.v + a.v * b.dx;
  r.dy = a.dy * b.v + a.v * b.dy;
  r.dxx = a.dxx * b.v + 2.0 * a.dx * b.dx + a.v * b.dxx;
  r.dxy = a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy;
  r.dyy = a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy;
  return r;
}

// Composition with a scalar function given value and first two derivatives
// at the inner value.
inline Dual2 compose(const Dual2& u, double f, double f1, double f2) {
  Dual2 r;
  r.v = f;
  r.dx = f1 * u.dx;
  r.dy = f1 * u.dy;
  r.dxx = f2 * u.dx * u.dx + f1 * u.dxx;
  r.dxy = f2 * u.dx * u.dy + f1 * u.dxy;
  r.dyy = f2 * u.dy * u.dy + f1 * u.dyy;
  return r;
}

inline Dual2 operator/(const Dual2& a, const Dual2& b) {
  const double iv = 1.0 / b.v;
  return a * compose(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Dual2 sin(const Dual2& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return compose(u, s, c, -s);
}
inline Dual2 cos(const Dual2& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return compose(u, c, -s, -c);
}
inline Dual2 tan(const Dual2& u) {
  const double t = std::tan(u.v);
  const double sec2 = 1.0 + t * t;
  return compose(u, t, sec2, 2.0 * t * sec2);
}
inline Dual2 exp(const Dual2& u) {
  const double e = std::exp(u.v);
  return compose(u, e, e, e);
}
inline Dual2 log(const Dual2& u) {
  const double iv = 1.0 / u.v;
  return compose(u, std::log(u.v), iv, -iv * iv);
}
inline Dual2 sqrt(const Dual2& u) {
  const double s = std::sqrt(u.v);
  return compose(u, s, 0.5 / s, -0.25 / (s * u.v));
}
inline Dual2 sinh(const Dual2& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return compose(u, s, c, s);
}
inline Dual2 cosh(const Dual2& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return compose(u, c, s, c);
}
inline Dual2 tanh(const Dual2& u) {
  const double t = std::tanh(u.v);
  const double sech2 = 1.0 - t * t;
  return compose(u, t, sech2, -2.0 * t * sech2);
}
inline Dual2 atan(const Dual2& u) {
  const double d = 1.0 + u.v * u.v;
  return compose(u, std::atan(u.v), 1.0 / d, -2.0 * u.v / (d * d));
}

// Integer power by repeated multiplication; valid for any base sign.
inline Dual2 powi(const Dual2& a, long long e) {
  if (e < 0) return Dual2::constant(1.0) / powi(a, -e);
  Dual2 r = Dual2::constant(1.0);
  Dual2 base = a;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

inline Dual2 pow(const Dual2& a, const Dual2& b) { return exp(b * log(a)); }

}  // namespace isonet
