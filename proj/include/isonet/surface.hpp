#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "isonet/errors.hpp"
#include "isonet/expr.hpp"
#include "isonet/vec3.hpp"

namespace isonet {

inline constexpr double kPi = 3.14159265358979323846;

// 2-jet of the immersion at a domain point: position, first and second
// partials. The mixed partial is stored once (f_xy == f_yx).
struct Jet2 {
  Vec3 f;
  Vec3 fx, fy;
  Vec3 fxx, fxy, fyy;
};

struct Rect {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool periodic_x = false, periodic_y = false;

  bool contains(double x, double y, double pad = 0.0) const {
    bool okx = periodic_x || (x >= xmin - pad && x <= xmax + pad);
    bool oky = periodic_y || (y >= ymin - pad && y <= ymax + pad);
    return okx && oky;
  }
};

// A parametric surface: a catalog entry with closed-form jets, or a parsed
// expression triple evaluated through second-order dual numbers. Immutable
// and shareable; all evaluation is pure.
struct SurfaceDef {
  std::string name;
  std::string source;  // the text this surface was parsed from
  Rect domain;
  std::function<Vec3(double, double)> position;  // value-only evaluation
  std::function<Jet2(double, double)> jets;      // raw jets, unchecked
};

// Checked jet evaluation: domain membership and the immersion condition.
inline Jet2 jet(const SurfaceDef& s, double x, double y) {
  const double span =
      std::max(s.domain.xmax - s.domain.xmin, s.domain.ymax - s.domain.ymin);
  if (!s.domain.contains(x, y, 1e-7 * std::max(1.0, span)))
    throw OutOfDomain("point (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") outside domain of " + s.name);
  Jet2 j = s.jets(x, y);
  const double cl2 = std::max({1.0, dot(j.fx, j.fx), dot(j.fy, j.fy)});
  if (norm(cross(j.fx, j.fy)) <= 1e-10 * cl2)
    throw DegenerateImmersion("degenerate immersion at (" + std::to_string(x) +
                              ", " + std::to_string(y) + ") on " + s.name);
  return j;
}

// ---------------------------------------------------------------------------
// Expression surfaces

struct ExprTriple {
  ExprPtr X, Y, Z;
};

inline SurfaceDef make_expression_surface(const ExprTriple& t, Rect domain,
                                          std::string name, std::string source) {
  SurfaceDef s;
  s.name = std::move(name);
  s.source = std::move(source);
  s.domain = domain;
  ExprTriple tr = t;
  s.position = [tr](double x, double y) -> Vec3 {
    return {eval<double>(*tr.X, x, y), eval<double>(*tr.Y, x, y), eval<double>(*tr.Z, x, y)};
  };
  s.jets = [tr](double x, double y) -> Jet2 {
    const Dual2 dx = Dual2::var_x(x), dy = Dual2::var_y(y);
    const Dual2 X = eval<Dual2>(*tr.X, dx, dy);
    const Dual2 Y = eval<Dual2>(*tr.Y, dx, dy);
    const Dual2 Z = eval<Dual2>(*tr.Z, dx, dy);
    Jet2 j;
    j.f = {X.v, Y.v, Z.v};
    j.fx = {X.dx, Y.dx, Z.dx};
    j.fy = {X.dy, Y.dy, Z.dy};
    j.fxx = {X.dxx, Y.dxx, Z.dxx};
    j.fxy = {X.dxy, Y.dxy, Z.dxy};
    j.fyy = {X.dyy, Y.dyy, Z.dyy};
    return j;
  };
  return s;
}

// ---------------------------------------------------------------------------
// Builtin catalog

struct BuiltinParam {
  std::string name;
  double default_value;
};

struct BuiltinInfo {
  std::string name;
  std::string description;
  std::vector<BuiltinParam> params;
  std::function<SurfaceDef(const std::map<std::string, double>&)> make;
};

namespace detail {

// Surface of revolution f(s, th) = (X(s) cos th, X(s) sin th, Z(s)) built
// from a profile 2-jet evaluator.
struct ProfileJet {
  double X, dX, ddX;
  double Z, dZ, ddZ;
};

inline Jet2 revolution_jet(const ProfileJet& p, double th) {
  const double c = std::cos(th), s = std::sin(th);
  Jet2 j;
  j.f = {p.X * c, p.X * s, p.Z};
  j.fx = {p.dX * c, p.dX * s, p.dZ};
  j.fy = {-p.X * s, p.X * c, 0.0};
  j.fxx = {p.ddX * c, p.ddX * s, p.ddZ};
  j.fxy = {-p.dX * s, p.dX * c, 0.0};
  j.fyy = {-p.X * c, -p.X * s, 0.0};
  return j;
}

// Delaunay roulette profile of the unduloid in arclength s, integrated on
// demand from the neck (X, Z, phi) = (a, 0, pi/2) with fixed-step RK4.
// First integral: X sin(phi) - H X^2 = ab/(a+b), H = 1/(a+b).
struct UnduloidProfile {
  double a, b, H;

  struct State {
    double X, Z, phi;
  };

  static std::array<double, 3> rhs(const State& s, double H) {
    return {std::cos(s.phi), std::sin(s.phi), 2.0 * H - std::sin(s.phi) / s.X};
  }

  State at(double s_target) const {
    State s{a, 0.0, kPi / 2.0};
    if (s_target == 0.0) return s;
    const double hmax = 1e-3;
    const long long n = static_cast<long long>(std::ceil(std::abs(s_target) / hmax));
    const double h = s_target / static_cast<double>(n);
    for (long long i = 0; i < n; ++i) {
      auto k1 = rhs(s, H);
      State s2{s.X + 0.5 * h * k1[0], s.Z + 0.5 * h * k1[1], s.phi + 0.5 * h * k1[2]};
      auto k2 = rhs(s2, H);
      State s3{s.X + 0.5 * h * k2[0], s.Z + 0.5 * h * k2[1], s.phi + 0.5 * h * k2[2]};
      auto k3 = rhs(s3, H);
      State s4{s.X + h * k3[0], s.Z + h * k3[1], s.phi + h * k3[2]};
      auto k4 = rhs(s4, H);
      s.X += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      s.Z += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      s.phi += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
    }
    return s;
  }

  ProfileJet jet(double sv) const {
    const State st = at(sv);
    const double cphi = std::cos(st.phi), sphi = std::sin(st.phi);
    const double dphi = 2.0 * H - sphi / st.X;
    ProfileJet p;
    p.X = st.X;
    p.dX = cphi;
    p.ddX = -sphi * dphi;
    p.Z = st.Z;
    p.dZ = sphi;
    p.ddZ = cphi * dphi;
    return p;
  }
};

inline double require(const std::map<std::string, double>& kv, const std::string& key,
                      double dflt) {
  auto it = kv.find(key);
  return it == kv.end() ? dflt : it->second;
}

}  // namespace detail

inline const std::vector<BuiltinInfo>& builtin_catalog() {
  static const std::vector<BuiltinInfo> catalog = [] {
    std::vector<BuiltinInfo> v;

    v.push_back({"catenoid",
                 "catenoid of revolution, non-arclength profile (c cosh(x/c), x)",
                 {{"c", 1.0}},
                 [](const std::map<std::string, double>& kv) {
                   const double c = detail::require(kv, "c", 1.0);
                   SurfaceDef s;
                   s.name = "catenoid";
                   s.domain = {-1.5, 1.5, 0.0, 2.0 * kPi, false, true};
                   s.position = [c](double x, double y) -> Vec3 {
                     const double r = c * std::cosh(x / c);
                     return {r * std::cos(y), r * std::sin(y), x};
                   };
                   s.jets = [c](double x, double y) {
                     detail::ProfileJet p;
                     p.X = c * std::cosh(x / c);
                     p.dX = std::sinh(x / c);
                     p.ddX = std::cosh(x / c) / c;
                     p.Z = x;
                     p.dZ = 1.0;
                     p.ddZ = 0.0;
                     return detail::revolution_jet(p, y);
                   };
                   return s;
                 }});

    v.push_back({"cylinder",
                 "circular cylinder of radius R, x along the axis",
                 {{"R", 1.0}},
                 [](const std::map<std::string, double>& kv) {
                   const double R = detail::require(kv, "R", 1.0);
                   SurfaceDef s;
                   s.name = "cylinder";
                   s.domain = {-10.0, 10.0, 0.0, 2.0 * kPi, false, true};
                   s.position = [R](double x, double y) -> Vec3 {
                     return {R * std::cos(y), R * std::sin(y), x};
                   };
                   s.jets = [R](double x, double y) {
                     detail::ProfileJet p{R, 0.0, 0.0, x, 1.0, 0.0};
                     return detail::revolution_jet(p, y);
                   };
                   return s;
                 }});

    v.push_back({"graph",
                 "graph surface z = x^2*y over [0.1,1]^2",
                 {},
                 [](const std::map<std::string, double>&) {
                   SurfaceDef s;
                   s.name = "graph";
                   s.domain = {0.1, 1.0, 0.1, 1.0, false, false};
                   s.position = [](double x, double y) -> Vec3 { return {x, y, x * x * y}; };
                   s.jets = [](double x, double y) {
                     Jet2 j;
                     j.f = {x, y, x * x * y};
                     j.fx = {1.0, 0.0, 2.0 * x * y};
                     j.fy = {0.0, 1.0, x * x};
                     j.fxx = {0.0, 0.0, 2.0 * y};
                     j.fxy = {0.0, 0.0, 2.0 * x};
                     j.fyy = {0.0, 0.0, 0.0};
                     return j;
                   };
                   return s;
                 }});

    v.push_back({"plane",
                 "flat plane z = 0",
                 {},
                 [](const std::map<std::string, double>&) {
                   SurfaceDef s;
                   s.name = "plane";
                   s.domain = {-5.0, 5.0, -5.0, 5.0, false, false};
                   s.position = [](double x, double y) -> Vec3 { return {x, y, 0.0}; };
                   s.jets = [](double x, double y) {
                     Jet2 j;
                     j.f = {x, y, 0.0};
                     j.fx = {1.0, 0.0, 0.0};
                     j.fy = {0.0, 1.0, 0.0};
                     return j;
                   };
                   return s;
                 }});

    v.push_back({"sphere",
                 "round sphere of radius R (polar angle x, azimuth y); all points umbilic",
                 {{"R", 1.0}},
                 [](const std::map<std::string, double>& kv) {
                   const double R = detail::require(kv, "R", 1.0);
                   SurfaceDef s;
                   s.name = "sphere";
                   s.domain = {0.2, kPi - 0.2, 0.0, 2.0 * kPi, false, true};
                   s.position = [R](double x, double y) -> Vec3 {
                     return {R * std::sin(x) * std::cos(y), R * std::sin(x) * std::sin(y),
                             R * std::cos(x)};
                   };
                   s.jets = [R](double x, double y) {
                     detail::ProfileJet p;
                     p.X = R * std::sin(x);
                     p.dX = R * std::cos(x);
                     p.ddX = -R * std::sin(x);
                     p.Z = R * std::cos(x);
                     p.dZ = -R * std::sin(x);
                     p.ddZ = -R * std::cos(x);
                     return detail::revolution_jet(p, y);
                   };
                   return s;
                 }});

    v.push_back({"torus",
                 "torus of revolution, tube angle x, axis angle y",
                 {{"R", 2.0}, {"r", 1.0}},
                 [](const std::map<std::string, double>& kv) {
                   const double R = detail::require(kv, "R", 2.0);
                   const double r = detail::require(kv, "r", 1.0);
                   SurfaceDef s;
                   s.name = "torus";
                   s.domain = {0.0, 2.0 * kPi, 0.0, 2.0 * kPi, true, true};
                   s.position = [R, r](double x, double y) -> Vec3 {
                     const double w = R + r * std::cos(x);
                     return {w * std::cos(y), w * std::sin(y), r * std::sin(x)};
                   };
                   s.jets = [R, r](double x, double y) {
                     detail::ProfileJet p;
                     p.X = R + r * std::cos(x);
                     p.dX = -r * std::sin(x);
                     p.ddX = -r * std::cos(x);
                     p.Z = r * std::sin(x);
                     p.dZ = r * std::cos(x);
                     p.ddZ = -r * std::sin(x);
                     return detail::revolution_jet(p, y);
                   };
                   return s;
                 }});

    v.push_back({"unduloid",
                 "CMC Delaunay unduloid, neck radius a, bulge radius b; profile "
                 "integrated from the roulette ODE (arclength x)",
                 {{"a", 0.5}, {"b", 1.0}},
                 [](const std::map<std::string, double>& kv) {
                   const double a = detail::require(kv, "a", 0.5);
                   const double b = detail::require(kv, "b", 1.0);
                   if (!(a > 0.0) || !(b > 0.0) || a > b)
                     throw DomainError("unduloid requires 0 < a <= b");
                   detail::UnduloidProfile prof{a, b, 1.0 / (a + b)};
                   SurfaceDef s;
                   s.name = "unduloid";
                   s.domain = {-3.0, 3.0, 0.0, 2.0 * kPi, false, true};
                   s.position = [prof](double x, double y) -> Vec3 {
                     auto st = prof.at(x);
                     return {st.X * std::cos(y), st.X * std::sin(y), st.Z};
                   };
                   s.jets = [prof](double x, double y) {
                     return detail::revolution_jet(prof.jet(x), y);
                   };
                   return s;
                 }});

    return v;
  }();
  return catalog;
}

// ---------------------------------------------------------------------------
// Surface text parsing

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s, const std::string& what) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &consumed);
  } catch (const std::exception&) {
    throw SyntaxError(0, "malformed number in " + what + ": '" + s + "'");
  }
  if (trim(s.substr(consumed)).size())
    throw SyntaxError(consumed, "trailing characters in " + what + ": '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

inline SurfaceDef parse_builtin_uri(const std::string& text) {
  // builtin:<name>?k=v,k=v
  std::string rest = text.substr(std::string("builtin:").size());
  std::string name = rest, query;
  if (auto q = rest.find('?'); q != std::string::npos) {
    name = rest.substr(0, q);
    query = rest.substr(q + 1);
  }
  name = trim(name);
  const BuiltinInfo* info = nullptr;
  for (const auto& b : builtin_catalog())
    if (b.name == name) info = &b;
  if (!info) throw UnknownBuiltin(name);
  std::map<std::string, double> kv;
  if (!query.empty()) {
    for (const auto& pair : split(query, ',')) {
      auto eq = pair.find('=');
      if (eq == std::string::npos)
        throw SyntaxError(0, "expected k=v in builtin query: '" + pair + "'");
      std::string key = trim(pair.substr(0, eq));
      bool known = false;
      for (const auto& p : info->params) known |= (p.name == key);
      if (!known) throw UnboundIdentifier(key);
      kv[key] = parse_double(trim(pair.substr(eq + 1)), "builtin parameter " + key);
    }
  }
  SurfaceDef s = info->make(kv);
  s.source = text;
  return s;
}

}  // namespace detail

// Parses either a builtin URI (`builtin:<name>?k=v,...`) or a line-oriented
// surface document with `param`, `X|Y|Z = <expr>`, `domain = a,b,c,d`, and
// optional `periodic = x|y|x,y` lines. `#` starts a comment.
inline SurfaceDef parse_surface(const std::string& text) {
  const std::string trimmed = detail::trim(text);
  if (trimmed.rfind("builtin:", 0) == 0) return detail::parse_builtin_uri(trimmed);

  std::map<std::string, double> params;
  std::map<std::string, std::string> components;
  Rect domain;
  bool have_domain = false;
  std::string name = "expression surface";

  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SyntaxError(lineno, "expected '=' in line: '" + line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key == "X" || key == "Y" || key == "Z") {
      components[key] = value;
    } else if (key == "domain") {
      auto parts = detail::split(value, ',');
      if (parts.size() != 4)
        throw SyntaxError(lineno, "domain needs four numbers: x_min,x_max,y_min,y_max");
      domain.xmin = detail::parse_double(detail::trim(parts[0]), "domain");
      domain.xmax = detail::parse_double(detail::trim(parts[1]), "domain");
      domain.ymin = detail::parse_double(detail::trim(parts[2]), "domain");
      domain.ymax = detail::parse_double(detail::trim(parts[3]), "domain");
      have_domain = true;
    } else if (key == "periodic") {
      for (const auto& axis : detail::split(value, ',')) {
        std::string a = detail::trim(axis);
        if (a == "x")
          domain.periodic_x = true;
        else if (a == "y")
          domain.periodic_y = true;
        else
          throw SyntaxError(lineno, "periodic axis must be x or y, got '" + a + "'");
      }
    } else if (key == "name") {
      name = value;
    } else if (key.rfind("param ", 0) == 0 || key.rfind("param\t", 0) == 0) {
      std::string pname = detail::trim(key.substr(6));
      if (pname.empty()) throw SyntaxError(lineno, "param line missing a name");
      params[pname] = detail::parse_double(value, "param " + pname);
    } else {
      throw SyntaxError(lineno, "unrecognized key '" + key + "'");
    }
  }

  for (const char* c : {"X", "Y", "Z"})
    if (!components.count(c))
      throw SyntaxError(0, std::string("missing component ") + c);
  if (!have_domain) throw SyntaxError(0, "missing domain line");
  if (!(domain.xmax > domain.xmin) || !(domain.ymax > domain.ymin))
    throw DomainError("domain rectangle must have positive side lengths");

  ExprTriple t{parse_expr(components["X"], params), parse_expr(components["Y"], params),
               parse_expr(components["Z"], params)};
  return make_expression_surface(t, domain, name, text);
}

}  // namespace isonet
