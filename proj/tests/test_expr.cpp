#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "isonet/expr.hpp"
#include "isonet/hyperdual.hpp"

using namespace isonet;

namespace {

constexpr double kPi = 3.14159265358979323846;

// scalar 2-jet of an expression by nested central differences, the
// independent reference for the dual-number path
struct FdJet {
  double v, dx, dy, dxx, dxy, dyy;
};

FdJet fd_jet(const Expr& e, double x, double y, double h) {
  auto f = [&](double px, double py) { return eval<double>(e, px, py); };
  FdJet j;
  j.v = f(x, y);
  j.dx = (f(x + h, y) - f(x - h, y)) / (2 * h);
  j.dy = (f(x, y + h) - f(x, y - h)) / (2 * h);
  j.dxx = (f(x + h, y) - 2 * j.v + f(x - h, y)) / (h * h);
  j.dyy = (f(x, y + h) - 2 * j.v + f(x, y - h)) / (h * h);
  j.dxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
          (4 * h * h);
  return j;
}

}  // namespace

TEST_CASE("parser accepts the documented grammar") {
  auto e = parse_expr("(2 + cos(x)) * cos(y) ^ 2 - x/y + sqrt(1.5)");
  CHECK(eval<double>(*e, 0.0, 1.0) ==
        Catch::Approx(3.0 * std::cos(1.0) * std::cos(1.0) + std::sqrt(1.5)));

  auto c = parse_expr("pi * e");
  CHECK(eval<double>(*c, 0, 0) == Catch::Approx(3.14159265358979 * 2.718281828459045));

  auto p = parse_expr("R + r*cos(x)", {{"R", 2.0}, {"r", 1.0}});
  CHECK(eval<double>(*p, kPi, 0.0) == Catch::Approx(1.0));
}

TEST_CASE("power handles integer exponents on negative bases") {
  auto e = parse_expr("x^3");
  CHECK(eval<double>(*e, -2.0, 0.0) == Catch::Approx(-8.0));
  auto d = eval<Dual2>(*e, Dual2::var_x(-2.0), Dual2::var_y(0.0));
  CHECK(d.dx == Catch::Approx(12.0));
  CHECK(d.dxx == Catch::Approx(-12.0));

  auto neg = parse_expr("x^-2");
  CHECK(eval<double>(*neg, 2.0, 0.0) == Catch::Approx(0.25));
}

TEST_CASE("parse errors carry position information") {
  CHECK_THROWS_AS(parse_expr("1 + "), SyntaxError);
  CHECK_THROWS_AS(parse_expr("sin(x"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x + zebra"), UnboundIdentifier);
  CHECK_THROWS_AS(parse_expr("foo(x)"), UnboundIdentifier);
  CHECK_THROWS_AS(parse_expr("x + * y"), SyntaxError);
  try {
    parse_expr("x + )");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& err) {
    CHECK(err.position == 4);
  }
}

TEST_CASE("fuzzed inputs never crash, only throw structured errors") {
  std::mt19937 rng(12345);
  const std::string alphabet = "xy0123456789+-*/^().,sincoetaqrl _";
  std::uniform_int_distribution<std::size_t> len(0, 40);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    const std::size_t n = len(rng);
    for (std::size_t k = 0; k < n; ++k) text += alphabet[pick(rng)];
    try {
      auto e = parse_expr(text);
      (void)eval<double>(*e, 0.3, 0.7);  // may be inf/nan, must not crash
    } catch (const Error&) {
      // structured failure is the accepted outcome
    }
  }
  SUCCEED();
}

TEST_CASE("dual-number jets match nested finite differences") {
  const char* exprs[] = {
      "(2+cos(x))*cos(y)", "sin(x)*sinh(y) + exp(x*y)", "ln(2+x) / (1+y^2)",
      "sqrt(4+x) * tanh(y)", "atan(x-y) + tan(x/4)", "cosh(x)*cos(y) - x^2*y"};
  for (const char* text : exprs) {
    auto e = parse_expr(text);
    const double x = 0.4, y = -0.3, h = 1e-4;
    const FdJet fd = fd_jet(*e, x, y, h);
    const Dual2 d = eval<Dual2>(*e, Dual2::var_x(x), Dual2::var_y(y));
    INFO(text);
    CHECK(d.v == Catch::Approx(fd.v).epsilon(1e-12));
    CHECK(d.dx == Catch::Approx(fd.dx).margin(1e-6).epsilon(1e-6));
    CHECK(d.dy == Catch::Approx(fd.dy).margin(1e-6).epsilon(1e-6));
    CHECK(d.dxx == Catch::Approx(fd.dxx).margin(1e-5).epsilon(1e-5));
    CHECK(d.dxy == Catch::Approx(fd.dxy).margin(1e-5).epsilon(1e-5));
    CHECK(d.dyy == Catch::Approx(fd.dyy).margin(1e-5).epsilon(1e-5));
  }
}
