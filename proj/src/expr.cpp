#include "qwire/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

struct Expr::Node {
  Kind kind = Kind::Literal;
  double value = 0.0;
  Func func = Func::Sin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

constexpr std::array<std::pair<const char*, Expr::Func>, 9> kFunctions{{
    {"sin", Expr::Func::Sin},
    {"cos", Expr::Func::Cos},
    {"tan", Expr::Func::Tan},
    {"exp", Expr::Func::Exp},
    {"log", Expr::Func::Log},
    {"sqrt", Expr::Func::Sqrt},
    {"cosh", Expr::Func::Cosh},
    {"sinh", Expr::Func::Sinh},
    {"abs", Expr::Func::Abs},
}};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

double apply(Expr::Func f, double a) {
  switch (f) {
    case Expr::Func::Sin: return std::sin(a);
    case Expr::Func::Cos: return std::cos(a);
    case Expr::Func::Tan: return checked(std::tan(a), "tan");
    case Expr::Func::Exp: return checked(std::exp(a), "exp");
    case Expr::Func::Log:
      if (a <= 0.0) throw DomainError("log of non-positive argument");
      return std::log(a);
    case Expr::Func::Sqrt:
      if (a < 0.0) throw DomainError("sqrt of negative argument");
      return std::sqrt(a);
    case Expr::Func::Cosh: return checked(std::cosh(a), "cosh");
    case Expr::Func::Sinh: return checked(std::sinh(a), "sinh");
    case Expr::Func::Abs: return std::fabs(a);
  }
  return 0.0;
}

double power(double base, double exponent) {
  if (base < 0.0 && exponent != std::floor(exponent))
    throw DomainError("non-integer power of a negative base");
  if (base == 0.0 && exponent < 0.0) throw DomainError("division by zero in power");
  return checked(std::pow(base, exponent), "power");
}

double eval_node(const Expr::Node& n, double x) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Literal: return n.value;
    case K::Variable: return x;
    case K::Negate: return -eval_node(*n.lhs, x);
    case K::Add: return checked(eval_node(*n.lhs, x) + eval_node(*n.rhs, x), "sum");
    case K::Sub: return checked(eval_node(*n.lhs, x) - eval_node(*n.rhs, x), "difference");
    case K::Mul: return checked(eval_node(*n.lhs, x) * eval_node(*n.rhs, x), "product");
    case K::Div: {
      const double num = eval_node(*n.lhs, x);
      const double den = eval_node(*n.rhs, x);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(num / den, "quotient");
    }
    case K::Pow: return power(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
    case K::Call: return apply(n.func, eval_node(*n.lhs, x));
  }
  return 0.0;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const Expr::Node& n, std::string& out) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Literal:
      if (std::signbit(n.value)) {
        out += "(-" + format_number(-n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case K::Variable: out += 'x'; return;
    case K::Negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case K::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    default: break;
  }
  char op = '+';
  if (n.kind == K::Sub) op = '-';
  if (n.kind == K::Mul) op = '*';
  if (n.kind == K::Div) op = '/';
  if (n.kind == K::Pow) op = '^';
  out += '(';
  print_node(*n.lhs, out);
  out += op;
  print_node(*n.rhs, out);
  out += ')';
}

bool uses_variable(const Expr::Node& n) {
  if (n.kind == Expr::Kind::Variable) return true;
  if (n.lhs && uses_variable(*n.lhs)) return true;
  return n.rhs && uses_variable(*n.rhs);
}

NodePtr make_node(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = expr();
    skip_space();
    if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  NodePtr binary(Expr::Kind k, NodePtr l, NodePtr r) {
    Expr::Node n;
    n.kind = k;
    n.lhs = std::move(l);
    n.rhs = std::move(r);
    return make_node(std::move(n));
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      lhs = binary(c == '+' ? Expr::Kind::Add : Expr::Kind::Sub, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      lhs = binary(c == '*' ? Expr::Kind::Mul : Expr::Kind::Div, lhs, factor());
    }
    return lhs;
  }

  // '^' is right-associative: recurse into factor for the exponent.
  NodePtr factor() {
    NodePtr b = base();
    if (peek() == '^') {
      ++pos_;
      return binary(Expr::Kind::Pow, b, factor());
    }
    return b;
  }

  NodePtr base() {
    const char c = peek();
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    if (c == '-') {
      ++pos_;
      Expr::Node n;
      n.kind = Expr::Kind::Negate;
      n.lhs = base();
      return make_node(std::move(n));
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // not an exponent; leave 'e' for the next token
    }
    const std::string token(text_.substr(start, pos_ - start));
    Expr::Node n;
    n.kind = Expr::Kind::Literal;
    n.value = std::strtod(token.c_str(), nullptr);
    if (!std::isfinite(n.value)) throw ParseError("number out of range", start);
    return make_node(std::move(n));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") {
      Expr::Node n;
      n.kind = Expr::Kind::Variable;
      return make_node(std::move(n));
    }
    for (const auto& [fname, f] : kFunctions) {
      if (name == fname) {
        expect('(');
        Expr::Node n;
        n.kind = Expr::Kind::Call;
        n.func = f;
        n.lhs = expr();
        expect(')');
        return make_node(std::move(n));
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

const char* func_name(Expr::Func f) {
  for (const auto& [name, g] : kFunctions)
    if (g == f) return name;
  return "?";
}

Expr::Expr() : Expr(literal(0.0)) {}

Expr Expr::literal(double value) {
  Node n;
  n.kind = Kind::Literal;
  n.value = value;
  return Expr(make_node(std::move(n)));
}

Expr Expr::variable() {
  Node n;
  n.kind = Kind::Variable;
  return Expr(make_node(std::move(n)));
}

Expr Expr::negate(Expr operand) {
  Node n;
  n.kind = Kind::Negate;
  n.lhs = std::move(operand.node_);
  return Expr(make_node(std::move(n)));
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs) {
  if (op != Kind::Add && op != Kind::Sub && op != Kind::Mul && op != Kind::Div && op != Kind::Pow)
    throw InvalidArgument("Expr::binary needs a binary operator");
  Node n;
  n.kind = op;
  n.lhs = std::move(lhs.node_);
  n.rhs = std::move(rhs.node_);
  return Expr(make_node(std::move(n)));
}

Expr Expr::call(Func f, Expr arg) {
  Node n;
  n.kind = Kind::Call;
  n.func = f;
  n.lhs = std::move(arg.node_);
  return Expr(make_node(std::move(n)));
}

Expr Expr::parse(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i)
    if (static_cast<unsigned char>(text[i]) > 127) throw ParseError("non-ASCII character", i);
  return Expr(Parser(text).parse());
}

double Expr::eval(double x) const { return eval_node(*node_, x); }

std::string Expr::print() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

bool Expr::is_constant() const { return !uses_variable(*node_); }

Expr::Kind Expr::kind() const { return node_->kind; }

}  // namespace qwire
