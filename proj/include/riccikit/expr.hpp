#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riccikit/jet.hpp"

namespace rk {

// Immutable expression tree over named coordinates.  Trees are shared
// (shared_ptr nodes) so metric components, rescale factors and composed maps
// can reuse subtrees freely.
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

enum class ExprOp {
  constant,   // literal value
  variable,   // coordinate index
  add, sub, mul, div, pow,
  neg,
  sin, cos, tan, sinh, cosh, exp, log, sqrt, atan,
};

struct ExprNode {
  ExprOp op;
  double value = 0.0;   // constant
  int var = -1;         // variable
  Expr lhs, rhs;        // binary ops; unary ops use lhs only
};

// Grammar (operators left-associative except '^', which is right-associative
// and binds looser than unary minus):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?
//   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
// `vars` supplies the coordinate names; anything else used as an identifier
// must be one of: sin cos tan sinh cosh exp log sqrt atan.
// Throws rk::parse_error with the byte offset of the offending token.
Expr parse_expression(std::string_view src, const std::vector<std::string>& vars);

// Evaluation.  The two overloads share the same tree walk; the jet overload
// is what turns an expression into exact first/second derivatives.
double eval(const Expr& e, std::span<const double> x);
Jet2 eval_jet(const Expr& e, std::span<const double> x);

// Programmatic constructors, for building derived expressions (conformal
// factors, inner products, map compositions) without round-tripping through
// text.
Expr make_constant(double v);
Expr make_variable(int index);
Expr make_binary(ExprOp op, Expr lhs, Expr rhs);
Expr make_unary(ExprOp op, Expr arg);

// Replace variable i by replacement[i] everywhere; used to compose smooth
// maps symbolically.
Expr substitute(const Expr& e, const std::vector<Expr>& replacements);

// Round-trippable rendering (fully parenthesized), for diagnostics and
// config echo.
std::string to_string(const Expr& e, const std::vector<std::string>& vars);

// True when the tree contains no variables.
bool is_constant_expr(const Expr& e);

}  // namespace rk
