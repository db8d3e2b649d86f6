#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "isonet/forms.hpp"
#include "isonet/surface.hpp"

using namespace isonet;

TEST_CASE("cylinder fundamental forms and curvatures") {
  SurfaceDef c = parse_surface("builtin:cylinder?R=2");
  for (double y : {0.0, 1.1, 4.7}) {
    FundamentalData fd = fundamental(jet(c, 0.3, y));
    CHECK(fd.E == Catch::Approx(1.0));
    CHECK(fd.F == Catch::Approx(0.0).margin(1e-15));
    CHECK(fd.G == Catch::Approx(4.0));
    CHECK(fd.l == Catch::Approx(0.0).margin(1e-15));
    CHECK(fd.m == Catch::Approx(0.0).margin(1e-15));
    // with N = fx x fy the normal points into the axis, so n = +R
    CHECK(fd.n == Catch::Approx(2.0));
    CurvatureData cd = curvature(fd);
    CHECK(cd.H == Catch::Approx(0.25));
    CHECK(cd.K_gauss == Catch::Approx(0.0).margin(1e-15));
    CHECK(cd.k1 == Catch::Approx(0.5));
    CHECK(cd.k2 == Catch::Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("torus fundamental forms against closed forms") {
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  for (double x : {0.0, 0.9, 2.4, 4.0}) {
    for (double y : {0.0, 1.3}) {
      FundamentalData fd = fundamental(jet(t, x, y));
      const double w = 2.0 + std::cos(x);
      CHECK(fd.E == Catch::Approx(1.0));
      CHECK(fd.F == Catch::Approx(0.0).margin(1e-14));
      CHECK(fd.G == Catch::Approx(w * w));
      CHECK(fd.l == Catch::Approx(1.0));
      CHECK(fd.m == Catch::Approx(0.0).margin(1e-14));
      CHECK(fd.n == Catch::Approx(std::cos(x) * w).margin(1e-14));
      CHECK(fd.W == Catch::Approx(w));
      CHECK(fd.Gx == Catch::Approx(-2.0 * w * std::sin(x)).margin(1e-13));
      CHECK(fd.Ex == Catch::Approx(0.0).margin(1e-14));
      CHECK(fd.Ey == Catch::Approx(0.0).margin(1e-14));
      CHECK(fd.Fx == Catch::Approx(0.0).margin(1e-14));
      CurvatureData cd = curvature(fd);
      CHECK(cd.K_gauss == Catch::Approx(std::cos(x) / w).margin(1e-14));
      CHECK(cd.H == Catch::Approx(0.5 * (1.0 + std::cos(x) / w)));
    }
  }
}

TEST_CASE("graph surface fundamental forms by hand") {
  SurfaceDef g = parse_surface("builtin:graph");
  FundamentalData fd = fundamental(jet(g, 0.5, 0.5));
  // f = (x, y, x^2 y): fx = (1,0,0.5), fy = (0,1,0.25)
  CHECK(fd.E == Catch::Approx(1.25));
  CHECK(fd.F == Catch::Approx(0.125));
  CHECK(fd.G == Catch::Approx(1.0625));
  const double w = std::sqrt(1.3125);
  CHECK(fd.W == Catch::Approx(w));
  CHECK(fd.l == Catch::Approx(1.0 / w));
  CHECK(fd.m == Catch::Approx(1.0 / w));
  CHECK(fd.n == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("metric partials agree with finite differences") {
  SurfaceDef u = parse_surface("builtin:unduloid?a=0.5,b=1");
  const double x = 0.8, y = 1.9, h = 1e-5;
  FundamentalData c = fundamental(jet(u, x, y));
  auto at = [&](double px, double py) { return fundamental(jet(u, px, py)); };
  const double Ex = (at(x + h, y).E - at(x - h, y).E) / (2 * h);
  const double Ey = (at(x, y + h).E - at(x, y - h).E) / (2 * h);
  const double Fx = (at(x + h, y).F - at(x - h, y).F) / (2 * h);
  const double Gx = (at(x + h, y).G - at(x - h, y).G) / (2 * h);
  CHECK(c.Ex == Catch::Approx(Ex).margin(1e-7));
  CHECK(c.Ey == Catch::Approx(Ey).margin(1e-7));
  CHECK(c.Fx == Catch::Approx(Fx).margin(1e-7));
  CHECK(c.Gx == Catch::Approx(Gx).margin(1e-7));
}

TEST_CASE("curvature eigen-structure invariants") {
  std::mt19937 rng(7);
  for (const char* uri : {"builtin:torus", "builtin:graph", "builtin:unduloid",
                          "builtin:catenoid", "builtin:cylinder"}) {
    SurfaceDef s = parse_surface(uri);
    std::uniform_real_distribution<double> ux(s.domain.xmin + 0.05, s.domain.xmax - 0.05);
    std::uniform_real_distribution<double> uy(s.domain.ymin + 0.05, s.domain.ymax - 0.05);
    for (int i = 0; i < 50; ++i) {
      FundamentalData fd = fundamental(jet(s, ux(rng), uy(rng)));
      CurvatureData cd = curvature(fd);
      INFO(uri);
      CHECK(cd.k1 + cd.k2 == Catch::Approx(2.0 * cd.H).margin(1e-12));
      CHECK(cd.k1 * cd.k2 == Catch::Approx(cd.K_gauss).margin(1e-12));
      CHECK(cd.k1 >= cd.k2);
      // principal directions are tangent unit vectors
      CHECK(norm(cd.e1) == Catch::Approx(1.0));
      CHECK(norm(cd.e2) == Catch::Approx(1.0));
      CHECK(dot(cd.e1, fd.N) == Catch::Approx(0.0).margin(1e-10));
      CHECK(dot(cd.e2, fd.N) == Catch::Approx(0.0).margin(1e-10));
      if (!is_umbilic(fd, 1e-6)) CHECK(dot(cd.e1, cd.e2) == Catch::Approx(0.0).margin(1e-7));
    }
  }
}

TEST_CASE("forms are invariant under rigid motion") {
  // torus vs the same torus rotated about z by 0.7 rad and translated
  SurfaceDef t = parse_surface("builtin:torus?R=2,r=1");
  SurfaceDef moved = parse_surface(
      "param c = 0.7648421872844885\n"  // cos(0.7)
      "param s = 0.644217687237691\n"   // sin(0.7)
      "X = c*((2+cos(x))*cos(y)) - s*((2+cos(x))*sin(y)) + 5\n"
      "Y = s*((2+cos(x))*cos(y)) + c*((2+cos(x))*sin(y)) - 3\n"
      "Z = sin(x) + 11\n"
      "domain = 0, 6.283185307179586, 0, 6.283185307179586\n");
  for (auto [x, y] : {std::pair{0.4, 1.0}, {2.2, 3.3}, {5.0, 0.1}}) {
    FundamentalData a = fundamental(jet(t, x, y));
    FundamentalData b = fundamental(jet(moved, x, y));
    CHECK(a.E == Catch::Approx(b.E).margin(1e-12));
    CHECK(a.F == Catch::Approx(b.F).margin(1e-12));
    CHECK(a.G == Catch::Approx(b.G).margin(1e-12));
    CHECK(a.l == Catch::Approx(b.l).margin(1e-12));
    CHECK(a.m == Catch::Approx(b.m).margin(1e-12));
    CHECK(a.n == Catch::Approx(b.n).margin(1e-12));
  }
}

TEST_CASE("umbilic classification") {
  SurfaceDef sph = parse_surface("builtin:sphere?R=2");
  CHECK(is_umbilic(fundamental(jet(sph, 1.0, 2.0))));
  SurfaceDef plane = parse_surface("builtin:plane");
  CHECK(is_umbilic(fundamental(jet(plane, 0.2, -0.4))));
  SurfaceDef t = parse_surface("builtin:torus");
  CHECK_FALSE(is_umbilic(fundamental(jet(t, 0.5, 0.5))));

  // atan2 arguments on the torus: num = 0, den = -2(2 + cos x)
  FundamentalData fd = fundamental(jet(t, 0.9, 1.7));
  double num, den;
  alpha_atan2_args(fd, num, den);
  CHECK(num == Catch::Approx(0.0).margin(1e-13));
  CHECK(den == Catch::Approx(-2.0 * (2.0 + std::cos(0.9))).margin(1e-12));
}

TEST_CASE("degenerate metric is rejected") {
  Jet2 j{};
  j.f = {0, 0, 0};
  j.fx = {1, 0, 0};
  j.fy = {2, 0, 0};  // parallel velocities
  CHECK_THROWS_AS(fundamental(j), DegenerateMetric);
}
