#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace qwire {

/// Immutable expression tree in one real variable `x`.
///
/// Grammar (recursive descent):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' factor)?
///   base   := number | 'x' | ident '(' expr ')' | '(' expr ')' | '-' base
///
/// Copies share the underlying tree, so an Expr is cheap to pass by value and
/// safe to use from several threads.
class Expr {
 public:
  enum class Kind { Literal, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Cosh, Sinh, Abs };

  struct Node;

  /// The constant 0.
  Expr();

  static Expr literal(double value);
  static Expr variable();
  static Expr negate(Expr operand);
  static Expr binary(Kind op, Expr lhs, Expr rhs);
  static Expr call(Func f, Expr arg);

  /// Throws ParseError on malformed input or unknown identifiers.
  static Expr parse(std::string_view text);

  /// Throws DomainError when the result leaves the reals or is not finite.
  double eval(double x) const;

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string print() const;

  /// True when the tree does not reference `x`.
  bool is_constant() const;

  Kind kind() const;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

const char* func_name(Expr::Func f);

}  // namespace qwire
