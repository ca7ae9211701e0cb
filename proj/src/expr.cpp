#include "riccikit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "riccikit/errors.hpp"

namespace rk {

namespace {

const std::map<std::string, ExprOp, std::less<>> kFunctions = {
    {"sin", ExprOp::sin},   {"cos", ExprOp::cos},   {"tan", ExprOp::tan},
    {"sinh", ExprOp::sinh}, {"cosh", ExprOp::cosh}, {"exp", ExprOp::exp},
    {"log", ExprOp::log},   {"sqrt", ExprOp::sqrt}, {"atan", ExprOp::atan},
};

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw parse_error("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (consume('+'))
        lhs = make_binary(ExprOp::add, lhs, parse_term());
      else if (consume('-'))
        lhs = make_binary(ExprOp::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (consume('*'))
        lhs = make_binary(ExprOp::mul, lhs, parse_factor());
      else if (consume('/'))
        lhs = make_binary(ExprOp::div, lhs, parse_factor());
      else
        return lhs;
    }
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (consume('^')) return make_binary(ExprOp::pow, base, parse_factor());  // right-assoc
    return base;
  }

  Expr parse_base() {
    skip_ws();
    if (pos_ >= src_.size()) throw parse_error("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return make_unary(ExprOp::neg, parse_base());
    }
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!consume(')')) throw parse_error("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw parse_error(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw parse_error("malformed number", start);
    // strtod accepts leading +/-, inf and nan; the grammar handles signs via
    // unary minus and has no named constants, so reject anything non-finite.
    if (!std::isfinite(v)) throw parse_error("non-finite literal", start);
    pos_ += static_cast<std::size_t>(end - begin);
    return make_constant(v);
  }

  Expr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (auto fn = kFunctions.find(name); fn != kFunctions.end()) {
      if (!consume('(')) throw parse_error("expected '(' after function name", pos_);
      Expr arg = parse_expr();
      if (!consume(')')) throw parse_error("expected ')'", pos_);
      return make_unary(fn->second, arg);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return make_variable(static_cast<int>(i));
    throw parse_error("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

template <class T>
T eval_impl(const ExprNode& e, std::span<const double> x);

template <class T>
T make_const_like(std::span<const double> x, double v);

template <>
double make_const_like<double>(std::span<const double>, double v) {
  return v;
}

template <>
Jet2 make_const_like<Jet2>(std::span<const double> x, double v) {
  return Jet2::constant(static_cast<int>(x.size()), v);
}

template <class T>
T make_var_like(std::span<const double> x, int i);

template <>
double make_var_like<double>(std::span<const double> x, int i) {
  return x[i];
}

template <>
Jet2 make_var_like<Jet2>(std::span<const double> x, int i) {
  return Jet2::coordinate(i, x);
}

double pow_dispatch(double a, double b) {
  const bool integral = std::floor(b) == b && std::abs(b) < 1e15;
  if (!integral && a <= 0.0)
    throw domain_error("pow with non-integral exponent requires a positive base");
  return std::pow(a, b);
}

Jet2 pow_dispatch(const Jet2& a, const Jet2& b) { return pow(a, b); }

double div_dispatch(double a, double b) {
  if (std::abs(b) < 1e-300) throw domain_error("division by zero");
  return a / b;
}

Jet2 div_dispatch(const Jet2& a, const Jet2& b) { return a / b; }

double log_dispatch(double a) {
  if (a <= 0.0) throw domain_error("log of a non-positive value");
  return std::log(a);
}

Jet2 log_dispatch(const Jet2& a) { return log(a); }

double sqrt_dispatch(double a) {
  if (a < 0.0) throw domain_error("sqrt of a negative value");
  return std::sqrt(a);
}

Jet2 sqrt_dispatch(const Jet2& a) { return sqrt(a); }

template <class T>
T eval_impl(const ExprNode& e, std::span<const double> x) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::sin;
  using std::sinh;
  using std::tan;
  using std::atan;
  switch (e.op) {
    case ExprOp::constant: return make_const_like<T>(x, e.value);
    case ExprOp::variable: return make_var_like<T>(x, e.var);
    case ExprOp::add: return eval_impl<T>(*e.lhs, x) + eval_impl<T>(*e.rhs, x);
    case ExprOp::sub: return eval_impl<T>(*e.lhs, x) - eval_impl<T>(*e.rhs, x);
    case ExprOp::mul: return eval_impl<T>(*e.lhs, x) * eval_impl<T>(*e.rhs, x);
    case ExprOp::div: return div_dispatch(eval_impl<T>(*e.lhs, x), eval_impl<T>(*e.rhs, x));
    case ExprOp::pow: return pow_dispatch(eval_impl<T>(*e.lhs, x), eval_impl<T>(*e.rhs, x));
    case ExprOp::neg: return -eval_impl<T>(*e.lhs, x);
    case ExprOp::sin: return sin(eval_impl<T>(*e.lhs, x));
    case ExprOp::cos: return cos(eval_impl<T>(*e.lhs, x));
    case ExprOp::tan: return tan(eval_impl<T>(*e.lhs, x));
    case ExprOp::sinh: return sinh(eval_impl<T>(*e.lhs, x));
    case ExprOp::cosh: return cosh(eval_impl<T>(*e.lhs, x));
    case ExprOp::exp: return exp(eval_impl<T>(*e.lhs, x));
    case ExprOp::log: return log_dispatch(eval_impl<T>(*e.lhs, x));
    case ExprOp::sqrt: return sqrt_dispatch(eval_impl<T>(*e.lhs, x));
    case ExprOp::atan: return atan(eval_impl<T>(*e.lhs, x));
  }
  throw error("corrupt expression node");
}

const char* op_name(ExprOp op) {
  switch (op) {
    case ExprOp::sin: return "sin";
    case ExprOp::cos: return "cos";
    case ExprOp::tan: return "tan";
    case ExprOp::sinh: return "sinh";
    case ExprOp::cosh: return "cosh";
    case ExprOp::exp: return "exp";
    case ExprOp::log: return "log";
    case ExprOp::sqrt: return "sqrt";
    case ExprOp::atan: return "atan";
    default: return "?";
  }
}

}  // namespace

Expr parse_expression(std::string_view src, const std::vector<std::string>& vars) {
  return Parser(src, vars).run();
}

double eval(const Expr& e, std::span<const double> x) { return eval_impl<double>(*e, x); }

Jet2 eval_jet(const Expr& e, std::span<const double> x) { return eval_impl<Jet2>(*e, x); }

Expr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::constant;
  n->value = v;
  return n;
}

Expr make_variable(int index) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::variable;
  n->var = index;
  return n;
}

Expr make_binary(ExprOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Expr make_unary(ExprOp op, Expr arg) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(arg);
  return n;
}

Expr substitute(const Expr& e, const std::vector<Expr>& replacements) {
  switch (e->op) {
    case ExprOp::constant: return e;
    case ExprOp::variable:
      if (e->var < 0 || e->var >= static_cast<int>(replacements.size()))
        throw error("substitute: variable index out of range");
      return replacements[e->var];
    default:
      if (e->rhs) return make_binary(e->op, substitute(e->lhs, replacements), substitute(e->rhs, replacements));
      return make_unary(e->op, substitute(e->lhs, replacements));
  }
}

bool is_constant_expr(const Expr& e) {
  switch (e->op) {
    case ExprOp::constant: return true;
    case ExprOp::variable: return false;
    default:
      if (e->rhs) return is_constant_expr(e->lhs) && is_constant_expr(e->rhs);
      return is_constant_expr(e->lhs);
  }
}

std::string to_string(const Expr& e, const std::vector<std::string>& vars) {
  std::ostringstream os;
  switch (e->op) {
    case ExprOp::constant: {
      os.precision(17);
      os << e->value;
      return os.str();
    }
    case ExprOp::variable:
      return e->var >= 0 && e->var < static_cast<int>(vars.size()) ? vars[e->var]
                                                                   : "$" + std::to_string(e->var);
    case ExprOp::add: return "(" + to_string(e->lhs, vars) + " + " + to_string(e->rhs, vars) + ")";
    case ExprOp::sub: return "(" + to_string(e->lhs, vars) + " - " + to_string(e->rhs, vars) + ")";
    case ExprOp::mul: return "(" + to_string(e->lhs, vars) + " * " + to_string(e->rhs, vars) + ")";
    case ExprOp::div: return "(" + to_string(e->lhs, vars) + " / " + to_string(e->rhs, vars) + ")";
    case ExprOp::pow: return "(" + to_string(e->lhs, vars) + " ^ " + to_string(e->rhs, vars) + ")";
    case ExprOp::neg: return "(-" + to_string(e->lhs, vars) + ")";
    default: return std::string(op_name(e->op)) + "(" + to_string(e->lhs, vars) + ")";
  }
}

}  // namespace rk
