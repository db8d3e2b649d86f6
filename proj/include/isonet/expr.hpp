#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "isonet/errors.hpp"
#include "isonet/hyperdual.hpp"

namespace isonet {

// Expression AST for parametric surface components. Identifiers are resolved
// at parse time: named constants (pi, e, user parameters) are folded into
// Number nodes, so evaluation never touches a symbol table.
struct Expr {
  enum class Kind { Number, VarX, VarY, Add, Sub, Mul, Div, Pow, PowInt, Neg, Call };
  enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh, Tanh, Atan };

  Kind kind;
  double number = 0.0;     // Number
  long long int_exp = 0;   // PowInt
  Func func = Func::Sin;   // Call
  std::shared_ptr<const Expr> lhs, rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

namespace detail {

inline double powi(double a, long long e) { return std::pow(a, static_cast<double>(e)); }

}  // namespace detail

template <class T>
T eval(const Expr& e, const T& x, const T& y) {
  using std::sin; using std::cos; using std::tan; using std::exp; using std::log;
  using std::sqrt; using std::sinh; using std::cosh; using std::tanh; using std::atan;
  using std::pow;
  using detail::powi;
  switch (e.kind) {
    case Expr::Kind::Number: return T(e.number);
    case Expr::Kind::VarX: return x;
    case Expr::Kind::VarY: return y;
    case Expr::Kind::Add: return eval(*e.lhs, x, y) + eval(*e.rhs, x, y);
    case Expr::Kind::Sub: return eval(*e.lhs, x, y) - eval(*e.rhs, x, y);
    case Expr::Kind::Mul: return eval(*e.lhs, x, y) * eval(*e.rhs, x, y);
    case Expr::Kind::Div: return eval(*e.lhs, x, y) / eval(*e.rhs, x, y);
    case Expr::Kind::Pow: return pow(eval(*e.lhs, x, y), eval(*e.rhs, x, y));
    case Expr::Kind::PowInt: return powi(eval(*e.lhs, x, y), e.int_exp);
    case Expr::Kind::Neg: return -eval(*e.lhs, x, y);
    case Expr::Kind::Call: {
      T u = eval(*e.lhs, x, y);
      switch (e.func) {
        case Expr::Func::Sin: return sin(u);
        case Expr::Func::Cos: return cos(u);
        case Expr::Func::Tan: return tan(u);
        case Expr::Func::Exp: return exp(u);
        case Expr::Func::Ln: return log(u);
        case Expr::Func::Sqrt: return sqrt(u);
        case Expr::Func::Sinh: return sinh(u);
        case Expr::Func::Cosh: return cosh(u);
        case Expr::Func::Tanh: return tanh(u);
        case Expr::Func::Atan: return atan(u);
      }
      break;
    }
  }
  return T(0.0);
}

// Recursive-descent parser. Precedence: +,- < *,/ < unary - < ^ (right assoc).
class ExprParser {
 public:
  ExprParser(std::string text, std::map<std::string, double> constants)
      : text_(std::move(text)), constants_(std::move(constants)) {
    constants_.emplace("pi", 3.14159265358979323846);
    constants_.emplace("e", 2.71828182845904523536);
  }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw SyntaxError(pos_, "unexpected trailing input '" + text_.substr(pos_) + "'");
    return e;
  }

 private:
  static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make({Expr::Kind::Add, 0, 0, Expr::Func::Sin, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make({Expr::Kind::Sub, 0, 0, Expr::Func::Sin, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make({Expr::Kind::Mul, 0, 0, Expr::Func::Sin, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make({Expr::Kind::Div, 0, 0, Expr::Func::Sin, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    if (accept('-')) return make({Expr::Kind::Neg, 0, 0, Expr::Func::Sin, parse_unary(), nullptr});
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (!accept('^')) return base;
    // exponent binds unary minus: x^-2 and x^(y+1) both parse
    ExprPtr ex = parse_unary();
    if (ex->kind == Expr::Kind::Number && ex->number == std::floor(ex->number) &&
        std::abs(ex->number) < 1e9) {
      return make({Expr::Kind::PowInt, 0, static_cast<long long>(ex->number),
                   Expr::Func::Sin, base, nullptr});
    }
    if (ex->kind == Expr::Kind::Neg && ex->lhs->kind == Expr::Kind::Number &&
        ex->lhs->number == std::floor(ex->lhs->number) && std::abs(ex->lhs->number) < 1e9) {
      return make({Expr::Kind::PowInt, 0, -static_cast<long long>(ex->lhs->number),
                   Expr::Func::Sin, base, nullptr});
    }
    return make({Expr::Kind::Pow, 0, 0, Expr::Func::Sin, base, ex});
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (accept('(')) {
      ExprPtr e = parse_sum();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return e;
    }
    throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    std::size_t start = pos_;
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(text_.substr(start), &consumed);
    } catch (const std::exception&) {
      throw SyntaxError(start, "malformed number");
    }
    pos_ = start + consumed;
    return make({Expr::Kind::Number, value, 0, Expr::Func::Sin, nullptr, nullptr});
  }

  ExprPtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (accept('(')) {
      static const std::map<std::string, Expr::Func> funcs = {
          {"sin", Expr::Func::Sin},   {"cos", Expr::Func::Cos},   {"tan", Expr::Func::Tan},
          {"exp", Expr::Func::Exp},   {"ln", Expr::Func::Ln},     {"sqrt", Expr::Func::Sqrt},
          {"sinh", Expr::Func::Sinh}, {"cosh", Expr::Func::Cosh}, {"tanh", Expr::Func::Tanh},
          {"atan", Expr::Func::Atan}};
      auto it = funcs.find(name);
      if (it == funcs.end()) throw UnboundIdentifier(name);
      ExprPtr arg = parse_sum();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')' after argument of " + name);
      return make({Expr::Kind::Call, 0, 0, it->second, arg, nullptr});
    }
    if (name == "x") return make({Expr::Kind::VarX, 0, 0, Expr::Func::Sin, nullptr, nullptr});
    if (name == "y") return make({Expr::Kind::VarY, 0, 0, Expr::Func::Sin, nullptr, nullptr});
    auto it = constants_.find(name);
    if (it == constants_.end()) throw UnboundIdentifier(name);
    return make({Expr::Kind::Number, it->second, 0, Expr::Func::Sin, nullptr, nullptr});
  }

  std::string text_;
  std::map<std::string, double> constants_;
  std::size_t pos_ = 0;
};

inline ExprPtr parse_expr(const std::string& text,
                          const std::map<std::string, double>& constants = {}) {
  return ExprParser(text, constants).parse();
}

}  // namespace isonet
