#include "ddpo/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace ddpo {

struct TimeFunction::Node {
  enum class Op {
    Const,
    Time,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Log,
    Piecewise,
  };

  Op op = Op::Const;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  // Piecewise only: segment starts (ascending) and segment bodies.
  std::vector<double> starts;
  std::vector<std::shared_ptr<const Node>> pieces;
};

namespace {

using Node = TimeFunction::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr make_unary(Op op, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(arg);
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->op == Op::Const && n->value == v;
}

double eval_node(const Node& n, double t);

NodePtr make_binary(Op op, NodePtr l, NodePtr r) {
  // Constant folding and neutral-element elimination keep derivative
  // trees from snowballing.
  if (l->op == Op::Const && r->op == Op::Const) {
    double v = 0;
    switch (op) {
      case Op::Add: v = l->value + r->value; break;
      case Op::Sub: v = l->value - r->value; break;
      case Op::Mul: v = l->value * r->value; break;
      case Op::Div:
        if (r->value == 0.0) break;  // keep the node; error surfaces at eval
        v = l->value / r->value;
        break;
      case Op::Pow: v = std::pow(l->value, r->value); break;
      default: throw std::logic_error("make_binary: bad op");
    }
    if (!(op == Op::Div && r->value == 0.0)) return make_const(v);
  }
  switch (op) {
    case Op::Add:
      if (is_const(l, 0)) return r;
      if (is_const(r, 0)) return l;
      break;
    case Op::Sub:
      if (is_const(r, 0)) return l;
      if (is_const(l, 0)) return make_unary(Op::Neg, r);
      break;
    case Op::Mul:
      if (is_const(l, 0) || is_const(r, 0)) return make_const(0);
      if (is_const(l, 1)) return r;
      if (is_const(r, 1)) return l;
      break;
    case Op::Div:
      if (is_const(l, 0)) return make_const(0);
      if (is_const(r, 1)) return l;
      break;
    case Op::Pow:
      if (is_const(r, 1)) return l;
      if (is_const(r, 0)) return make_const(1);
      break;
    default:
      break;
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

double eval_node(const Node& n, double t) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Time: return t;
    case Op::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Op::Sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case Op::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Op::Div: {
      double den = eval_node(*n.rhs, t);
      if (den == 0.0) throw EvalError("division by zero at t=" + std::to_string(t));
      return eval_node(*n.lhs, t) / den;
    }
    case Op::Pow: return std::pow(eval_node(*n.lhs, t), eval_node(*n.rhs, t));
    case Op::Neg: return -eval_node(*n.lhs, t);
    case Op::Sin: return std::sin(eval_node(*n.lhs, t));
    case Op::Cos: return std::cos(eval_node(*n.lhs, t));
    case Op::Exp: return std::exp(eval_node(*n.lhs, t));
    case Op::Sqrt: {
      double v = eval_node(*n.lhs, t);
      if (v < 0.0) throw EvalError("sqrt of negative value at t=" + std::to_string(t));
      return std::sqrt(v);
    }
    case Op::Log: {
      double v = eval_node(*n.lhs, t);
      if (v <= 0.0) throw EvalError("log of non-positive value at t=" + std::to_string(t));
      return std::log(v);
    }
    case Op::Piecewise: {
      // Left-closed: segment i covers [starts[i], starts[i+1]).
      std::size_t idx = 0;
      for (std::size_t i = 0; i < n.starts.size(); ++i) {
        if (t >= n.starts[i]) idx = i;
      }
      return eval_node(*n.pieces[idx], t);
    }
  }
  throw std::logic_error("eval_node: bad op");
}

NodePtr diff_node(const NodePtr& n) {
  switch (n->op) {
    case Op::Const: return make_const(0);
    case Op::Time: return make_const(1);
    case Op::Add: return make_binary(Op::Add, diff_node(n->lhs), diff_node(n->rhs));
    case Op::Sub: return make_binary(Op::Sub, diff_node(n->lhs), diff_node(n->rhs));
    case Op::Mul:
      return make_binary(Op::Add, make_binary(Op::Mul, diff_node(n->lhs), n->rhs),
                         make_binary(Op::Mul, n->lhs, diff_node(n->rhs)));
    case Op::Div:
      // (f/g)' = f'/g - f g'/g^2
      return make_binary(
          Op::Sub, make_binary(Op::Div, diff_node(n->lhs), n->rhs),
          make_binary(Op::Div, make_binary(Op::Mul, n->lhs, diff_node(n->rhs)),
                      make_binary(Op::Mul, n->rhs, n->rhs)));
    case Op::Pow: {
      if (n->rhs->op == Op::Const) {
        double p = n->rhs->value;
        // (f^p)' = p f^{p-1} f'
        return make_binary(
            Op::Mul, make_const(p),
            make_binary(Op::Mul, make_binary(Op::Pow, n->lhs, make_const(p - 1)),
                        diff_node(n->lhs)));
      }
      // f^g = exp(g log f): (f^g)' = f^g (g' log f + g f'/f)
      auto fg = make_binary(Op::Pow, n->lhs, n->rhs);
      auto term1 = make_binary(Op::Mul, diff_node(n->rhs), make_unary(Op::Log, n->lhs));
      auto term2 = make_binary(Op::Div, make_binary(Op::Mul, n->rhs, diff_node(n->lhs)), n->lhs);
      return make_binary(Op::Mul, fg, make_binary(Op::Add, term1, term2));
    }
    case Op::Neg: return make_unary(Op::Neg, diff_node(n->lhs));
    case Op::Sin: return make_binary(Op::Mul, make_unary(Op::Cos, n->lhs), diff_node(n->lhs));
    case Op::Cos:
      return make_unary(Op::Neg,
                        make_binary(Op::Mul, make_unary(Op::Sin, n->lhs), diff_node(n->lhs)));
    case Op::Exp: return make_binary(Op::Mul, make_unary(Op::Exp, n->lhs), diff_node(n->lhs));
    case Op::Sqrt:
      // (sqrt f)' = f' / (2 sqrt f)
      return make_binary(Op::Div, diff_node(n->lhs),
                         make_binary(Op::Mul, make_const(2), make_unary(Op::Sqrt, n->lhs)));
    case Op::Log: return make_binary(Op::Div, diff_node(n->lhs), n->lhs);
    case Op::Piecewise: {
      auto out = std::make_shared<Node>();
      out->op = Op::Piecewise;
      out->starts = n->starts;
      out->pieces.reserve(n->pieces.size());
      for (const auto& p : n->pieces) out->pieces.push_back(diff_node(p));
      return out;
    }
  }
  throw std::logic_error("diff_node: bad op");
}

void print_node(const Node& n, std::ostream& os) {
  switch (n.op) {
    case Op::Const: os << n.value; return;
    case Op::Time: os << 't'; return;
    case Op::Add: os << '('; print_node(*n.lhs, os); os << '+'; print_node(*n.rhs, os); os << ')'; return;
    case Op::Sub: os << '('; print_node(*n.lhs, os); os << '-'; print_node(*n.rhs, os); os << ')'; return;
    case Op::Mul: os << '('; print_node(*n.lhs, os); os << '*'; print_node(*n.rhs, os); os << ')'; return;
    case Op::Div: os << '('; print_node(*n.lhs, os); os << '/'; print_node(*n.rhs, os); os << ')'; return;
    case Op::Pow: os << '('; print_node(*n.lhs, os); os << '^'; print_node(*n.rhs, os); os << ')'; return;
    case Op::Neg: os << "(-"; print_node(*n.lhs, os); os << ')'; return;
    case Op::Sin: os << "sin("; print_node(*n.lhs, os); os << ')'; return;
    case Op::Cos: os << "cos("; print_node(*n.lhs, os); os << ')'; return;
    case Op::Exp: os << "exp("; print_node(*n.lhs, os); os << ')'; return;
    case Op::Sqrt: os << "sqrt("; print_node(*n.lhs, os); os << ')'; return;
    case Op::Log: os << "log("; print_node(*n.lhs, os); os << ')'; return;
    case Op::Piecewise:
      os << "piecewise(";
      for (std::size_t i = 0; i < n.pieces.size(); ++i) {
        if (i) os << "; ";
        os << "t>=" << n.starts[i] << ": ";
        print_node(*n.pieces[i], os);
      }
      os << ')';
      return;
  }
}

// --- recursive-descent parser -------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    auto e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
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

  NodePtr parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = make_binary(Op::Add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = make_binary(Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = make_binary(Op::Mul, lhs, parse_unary());
      } else if (eat('/')) {
        lhs = make_binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make_unary(Op::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    if (eat('^')) {
      // right-associative; exponent may itself carry a sign
      return make_binary(Op::Pow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    // exponent suffix: 1e-3, 2.5E+4
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // not an exponent, e.g. "2*exp(t)" after "2"
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return make_const(v);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + text + "'", start);
    }
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "t") {
      auto n = std::make_shared<Node>();
      n->op = Op::Time;
      return n;
    }
    Op fn;
    if (name == "sin") fn = Op::Sin;
    else if (name == "cos") fn = Op::Cos;
    else if (name == "exp") fn = Op::Exp;
    else if (name == "sqrt") fn = Op::Sqrt;
    else throw ParseError("unknown identifier '" + name + "'", start);
    if (!eat('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
    auto arg = parse_expr();
    if (!eat(')')) throw ParseError("expected ')'", pos_);
    return make_unary(fn, arg);
  }
};

}  // namespace

TimeFunction::TimeFunction() : node_(make_const(0)) {}

TimeFunction TimeFunction::constant(double v) { return TimeFunction(make_const(v)); }

TimeFunction TimeFunction::time() {
  auto n = std::make_shared<Node>();
  n->op = Op::Time;
  return TimeFunction(std::move(n));
}

TimeFunction TimeFunction::exponential(double sigma) {
  return exp(constant(sigma) * time());
}

TimeFunction TimeFunction::harmonic(double amp, double omega, double phase) {
  return constant(amp) * cos(constant(omega) * time() + constant(phase));
}

TimeFunction TimeFunction::modulated(double amp, double lambda, double nu) {
  return constant(amp) * (constant(1) + constant(lambda) * sin(constant(nu) * time()));
}

TimeFunction TimeFunction::parse(std::string_view src) {
  return TimeFunction(Parser(src).run());
}

TimeFunction TimeFunction::piecewise(std::vector<std::pair<double, TimeFunction>> pieces) {
  if (pieces.empty()) throw std::invalid_argument("piecewise: no segments");
  auto n = std::make_shared<Node>();
  n->op = Op::Piecewise;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0 && pieces[i].first <= pieces[i - 1].first)
      throw std::invalid_argument("piecewise: segment starts must increase");
    n->starts.push_back(pieces[i].first);
    n->pieces.push_back(pieces[i].second.node_);
  }
  return TimeFunction(std::move(n));
}

TimeFunction TimeFunction::sin(TimeFunction f) { return TimeFunction(make_unary(Op::Sin, f.node_)); }
TimeFunction TimeFunction::cos(TimeFunction f) { return TimeFunction(make_unary(Op::Cos, f.node_)); }
TimeFunction TimeFunction::exp(TimeFunction f) { return TimeFunction(make_unary(Op::Exp, f.node_)); }
TimeFunction TimeFunction::sqrt(TimeFunction f) { return TimeFunction(make_unary(Op::Sqrt, f.node_)); }
TimeFunction TimeFunction::log(TimeFunction f) { return TimeFunction(make_unary(Op::Log, f.node_)); }
TimeFunction TimeFunction::pow(TimeFunction base, TimeFunction expo) {
  return TimeFunction(make_binary(Op::Pow, base.node_, expo.node_));
}

double TimeFunction::operator()(double t) const {
  double v = eval_node(*node_, t);
  if (!std::isfinite(v)) throw EvalError("non-finite value at t=" + std::to_string(t));
  return v;
}

TimeFunction TimeFunction::derivative() const { return TimeFunction(diff_node(node_)); }

bool TimeFunction::is_constant() const { return node_->op == Op::Const; }
bool TimeFunction::is_zero() const { return is_const(node_, 0.0); }

std::string TimeFunction::to_string() const {
  std::ostringstream os;
  print_node(*node_, os);
  return os.str();
}

TimeFunction operator+(const TimeFunction& l, const TimeFunction& r) {
  return TimeFunction(make_binary(Op::Add, l.node_, r.node_));
}
TimeFunction operator-(const TimeFunction& l, const TimeFunction& r) {
  return TimeFunction(make_binary(Op::Sub, l.node_, r.node_));
}
TimeFunction operator*(const TimeFunction& l, const TimeFunction& r) {
  return TimeFunction(make_binary(Op::Mul, l.node_, r.node_));
}
TimeFunction operator/(const TimeFunction& l, const TimeFunction& r) {
  return TimeFunction(make_binary(Op::Div, l.node_, r.node_));
}
TimeFunction TimeFunction::operator-() const { return TimeFunction(make_unary(Op::Neg, node_)); }

}  // namespace ddpo
