#pragma once

// Surface-definition expression language: a small recursive-descent parser
// producing an immutable AST, and an evaluator that runs the same AST over
// plain doubles or over Taylor jets.
//
//   expr     := term (('+'|'-') term)*
//   term     := unary (('*'|'/') unary)*
//   unary    := '-' unary | power
//   power    := atom ('^' exponent)?
//   exponent := '-'? (number | '(' expr ')') ('^' exponent)?   -- constant only
//   atom     := number | u1 | u2 | u3 | func '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus (-u1^2 is -(u1^2)) and is
// right-associative; its exponent must not depend on u1..u3.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>
#include <variant>

#include "relgeo4/errors.hpp"
#include "relgeo4/jet.hpp"

namespace relgeo4 {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Abs, Cbrt };
enum class BinaryOp { Add, Sub, Mul, Div };

inline constexpr std::array<std::pair<std::string_view, Func>, 10> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"abs", Func::Abs},
    {"cbrt", Func::Cbrt},
}};

inline std::string_view function_name(Func f) {
  for (const auto& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

class Expression {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Number { double value; };
  struct Variable { int index; };  // 0-based: u1 -> 0
  struct Negate { NodePtr operand; };
  struct Binary { BinaryOp op; NodePtr lhs, rhs; };
  struct Power { NodePtr base; double exponent; };
  struct Call { Func func; NodePtr arg; };

  struct Node {
    std::variant<Number, Variable, Negate, Binary, Power, Call> data;
  };

  Expression() = default;
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  bool empty() const { return !root_; }

  bool depends_on_variables() const { return root_ && uses_variables(*root_); }

  /// Structural rendering used in diagnostics and tests, e.g.
  /// "Add(Var u1, Mul(2, Var u2))".
  std::string to_string() const { return root_ ? render(*root_) : std::string{}; }

 private:
  static bool uses_variables(const Node& n) {
    return std::visit(
        [](const auto& v) -> bool {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Number>) return false;
          else if constexpr (std::is_same_v<T, Variable>) return true;
          else if constexpr (std::is_same_v<T, Negate>) return uses_variables(*v.operand);
          else if constexpr (std::is_same_v<T, Binary>) return uses_variables(*v.lhs) || uses_variables(*v.rhs);
          else if constexpr (std::is_same_v<T, Power>) return uses_variables(*v.base);
          else return uses_variables(*v.arg);
        },
        n.data);
  }

  static std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  }

  static std::string render(const Node& n) {
    return std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Number>) {
            return format_number(v.value);
          } else if constexpr (std::is_same_v<T, Variable>) {
            return "Var u" + std::to_string(v.index + 1);
          } else if constexpr (std::is_same_v<T, Negate>) {
            return "Neg(" + render(*v.operand) + ")";
          } else if constexpr (std::is_same_v<T, Binary>) {
            static constexpr const char* names[] = {"Add", "Sub", "Mul", "Div"};
            return std::string(names[static_cast<int>(v.op)]) + "(" + render(*v.lhs) + ", " +
                   render(*v.rhs) + ")";
          } else if constexpr (std::is_same_v<T, Power>) {
            return "Pow(" + render(*v.base) + ", " + format_number(v.exponent) + ")";
          } else {
            std::string name(function_name(v.func));
            name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
            return name + "(" + render(*v.arg) + ")";
          }
        },
        n.data);
  }

  NodePtr root_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    auto root = parse_expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return Expression(std::move(root));
  }

 private:
  using NodePtr = Expression::NodePtr;
  using Node = Expression::Node;

  template <class T>
  static NodePtr make(T value) {
    return std::make_shared<const Node>(Node{std::move(value)});
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError("syntax error at line " + std::to_string(line_) + ", column " +
                      std::to_string(col_) + ": " + msg);
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = make(Expression::Binary{BinaryOp::Add, lhs, parse_term()});
      else if (accept('-')) lhs = make(Expression::Binary{BinaryOp::Sub, lhs, parse_term()});
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make(Expression::Binary{BinaryOp::Mul, lhs, parse_unary()});
      else if (accept('/')) lhs = make(Expression::Binary{BinaryOp::Div, lhs, parse_unary()});
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Expression::Negate{parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make(Expression::Power{base, parse_exponent()});
    return base;
  }

  double parse_exponent() {
    skip_space();
    const int line = line_, col = col_;
    const bool negative = accept('-');
    skip_space();
    double value;
    if (accept('(')) {
      Expression inner(parse_expr());
      if (!accept(')')) fail("expected ')'");
      if (inner.depends_on_variables()) {
        line_ = line;
        col_ = col;
        fail("exponent must be a constant; write exp(b*log(a)) for a variable power");
      }
      value = fold_constant(inner.root());
    } else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      value = parse_number_literal();
    } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
      fail("exponent must be a constant; write exp(b*log(a)) for a variable power");
    } else {
      fail("expected exponent after '^'");
    }
    if (negative) value = -value;
    if (accept('^')) value = std::pow(value, parse_exponent());
    return value;
  }

  static double fold_constant(const Node& n);

  double parse_number_literal() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') advance();
    if (peek() == 'e' || peek() == 'E') {
      std::size_t save = pos_;
      int save_col = col_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;
        col_ = save_col;
      } else {
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) fail("malformed number '" + std::string(first, last) + "'");
    return value;
  }

  NodePtr parse_atom() {
    skip_space();
    if (at_end()) fail("unexpected end of expression");
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return make(Expression::Number{parse_number_literal()});
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const int col = col_;
      const std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      const std::string_view ident = src_.substr(start, pos_ - start);
      skip_space();
      if (peek() == '(') {
        for (const auto& [name, fn] : kFunctions) {
          if (name == ident) {
            advance();
            NodePtr arg = parse_expr();
            if (!accept(')')) fail("expected ')' to close " + std::string(name) + "(");
            return make(Expression::Call{fn, arg});
          }
        }
        throw UnknownIdentifier("unknown function '" + std::string(ident) + "' at line " +
                                std::to_string(line_) + ", column " + std::to_string(col));
      }
      if (ident == "u1") return make(Expression::Variable{0});
      if (ident == "u2") return make(Expression::Variable{1});
      if (ident == "u3") return make(Expression::Variable{2});
      for (const auto& [name, fn] : kFunctions)
        if (name == ident) fail("function '" + std::string(name) + "' needs an argument list");
      throw UnknownIdentifier("unknown identifier '" + std::string(ident) + "' at line " +
                              std::to_string(line_) + ", column " + std::to_string(col));
    }
    if (accept('(')) {
      NodePtr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Scalar kernels with the same domain rules as the jet versions.
inline double apply(Func f, double x) {
  switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan: return std::tan(x);
    case Func::Exp: return std::exp(x);
    case Func::Log:
      if (!(x > 0.0)) throw DomainError("log of non-positive value " + error_number(x));
      return std::log(x);
    case Func::Sqrt:
      if (!(x > 0.0)) throw DomainError("sqrt of non-positive value " + error_number(x));
      return std::sqrt(x);
    case Func::Sinh: return std::sinh(x);
    case Func::Cosh: return std::cosh(x);
    case Func::Abs:
      if (x == 0.0) throw DomainError("abs is not differentiable at 0");
      return std::abs(x);
    case Func::Cbrt:
      if (x == 0.0) throw DomainError("cbrt is not differentiable at 0");
      return std::cbrt(x);
  }
  return x;
}

template <int O>
Jet<O> apply(Func f, const Jet<O>& x) {
  switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Tan: return tan(x);
    case Func::Exp: return exp(x);
    case Func::Log: return log(x);
    case Func::Sqrt: return sqrt(x);
    case Func::Sinh: return sinh(x);
    case Func::Cosh: return cosh(x);
    case Func::Abs: return abs(x);
    case Func::Cbrt: return cbrt(x);
  }
  return x;
}

inline double power(double x, double e) {
  if (e == std::round(e)) {
    if (x == 0.0 && e < 0) throw DomainError("negative power of zero");
    return std::pow(x, e);
  }
  if (!(x > 0.0)) throw DomainError("non-integer power of non-positive value " + error_number(x));
  return std::pow(x, e);
}

template <int O>
Jet<O> power(const Jet<O>& x, double e) {
  return pow(x, e);
}

inline double divide(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}

template <int O>
Jet<O> divide(const Jet<O>& a, const Jet<O>& b) {
  return a / b;
}

inline double constant_like(double v, double) { return v; }

template <int O>
Jet<O> constant_like(double v, const Jet<O>& like) {
  return Jet<O>::constant(v, like.base_point());
}

template <class T>
T evaluate_node(const Expression::Node& n, const std::array<T, kChartDim>& vars) {
  return std::visit(
      [&](const auto& v) -> T {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Expression::Number>) {
          return constant_like(v.value, vars[0]);
        } else if constexpr (std::is_same_v<V, Expression::Variable>) {
          return vars[static_cast<std::size_t>(v.index)];
        } else if constexpr (std::is_same_v<V, Expression::Negate>) {
          return -evaluate_node(*v.operand, vars);
        } else if constexpr (std::is_same_v<V, Expression::Binary>) {
          T l = evaluate_node(*v.lhs, vars);
          T r = evaluate_node(*v.rhs, vars);
          switch (v.op) {
            case BinaryOp::Add: return l + r;
            case BinaryOp::Sub: return l - r;
            case BinaryOp::Mul: return l * r;
            case BinaryOp::Div: return divide(l, r);
          }
          return l;
        } else if constexpr (std::is_same_v<V, Expression::Power>) {
          return power(evaluate_node(*v.base, vars), v.exponent);
        } else {
          return apply(v.func, evaluate_node(*v.arg, vars));
        }
      },
      n.data);
}

inline double Parser::fold_constant(const Node& n) {
  return evaluate_node<double>(n, {0.0, 0.0, 0.0});
}

}  // namespace detail

/// Parse an expression in u1, u2, u3. Throws SyntaxError (with line and
/// column) or UnknownIdentifier.
inline Expression parse(std::string_view source) { return detail::Parser(source).parse(); }

/// Plain evaluation at a point. Throws DomainError on log/sqrt/division
/// domain violations.
inline double evaluate(const Expression& e, const ChartPoint& p) {
  return detail::evaluate_node<double>(e.root(), p);
}

/// Evaluate as a Taylor jet of the given order around p.
template <int Order = kDefaultJetOrder>
Jet<Order> eval_jet(const Expression& e, const ChartPoint& p) {
  const std::array<Jet<Order>, kChartDim> vars{Jet<Order>::variable(0, p), Jet<Order>::variable(1, p),
                                               Jet<Order>::variable(2, p)};
  return detail::evaluate_node(e.root(), vars);
}

}  // namespace relgeo4
