#include "toric/expr.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace toric {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;
using Op = ExprNode::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  int dim_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, ErrorKind kind = ErrorKind::syntax) const {
    throw ParseError(kind, pos_ + 1, msg);
  }
  [[noreturn]] void fail_at(size_t pos, const std::string& msg, ErrorKind kind) const {
    throw ParseError(kind, pos + 1, msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        lhs = make(Op::add, {lhs, term()});
      } else if (peek('-')) {
        ++pos_;
        lhs = make(Op::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        lhs = make(Op::mul, {lhs, factor()});
      } else if (peek('/')) {
        ++pos_;
        lhs = make(Op::div, {lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  // Digits with optional fraction and exponent, or p/q.
  Q number() {
    skip_ws();
    size_t start = pos_;
    auto digits = [&] {
      size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ > b;
    };
    bool ip = digits();
    bool plain = true;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      bool fp = digits();
      if (!ip && !fp) fail_at(start, "malformed number", ErrorKind::syntax);
      plain = false;
    } else if (!ip) {
      fail("expected a number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (!digits()) pos_ = save;
      else plain = false;
    }
    if (plain && pos_ + 1 < s_.size() && s_[pos_] == '/' &&
        std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      digits();
    }
    std::string lit = s_.substr(start, pos_ - start);
    try {
      return parse_rational(lit);
    } catch (const Error&) {
      fail_at(start, "bad number '" + lit + "'", ErrorKind::syntax);
    }
  }

  NodePtr constant(const Q& q) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::constant;
    n->value = q;
    n->dvalue = q.get_d();
    return n;
  }

  std::vector<NodePtr> call_args(const std::string& name, size_t name_pos, size_t arity,
                                 bool rational_last) {
    expect('(');
    std::vector<NodePtr> args;
    while (true) {
      if (rational_last && args.size() + 1 == arity) {
        bool neg = false;
        if (peek('-') || peek('+')) {
          neg = s_[pos_] == '-';
          ++pos_;
        }
        Q expo = number();
        args.push_back(constant(neg ? Q(-expo) : expo));
      } else {
        args.push_back(expr());
      }
      if (peek(',')) {
        ++pos_;
        if (args.size() >= arity)
          fail_at(name_pos, name + " takes " + std::to_string(arity) + " argument(s)",
                  ErrorKind::arity);
        continue;
      }
      expect(')');
      break;
    }
    if (args.size() != arity)
      fail_at(name_pos, name + " takes " + std::to_string(arity) + " argument(s)",
              ErrorKind::arity);
    return args;
  }

  NodePtr factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return make(Op::neg, {factor()});
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (peek('(')) {
        if (id == "min" || id == "max") {
          auto a = call_args(id, start, 2, false);
          return make(id == "min" ? Op::min : Op::max, a);
        }
        if (id == "sqrt") return make(Op::sqrt, call_args(id, start, 1, false));
        if (id == "pow") {
          auto a = call_args(id, start, 2, true);
          auto n = std::make_shared<ExprNode>();
          n->op = Op::pow;
          n->value = a[1]->value;
          n->dvalue = a[1]->dvalue;
          n->args = {a[0]};
          return n;
        }
        fail_at(start, "unknown function '" + id + "'", ErrorKind::syntax);
      }
      if (id.size() >= 2 && id[0] == 'y') {
        bool num = true;
        for (size_t i = 1; i < id.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(id[i]))) num = false;
        if (num && id.size() < 9) {
          int k = std::stoi(id.substr(1));
          if (k >= 1 && k <= dim_) {
            auto n = std::make_shared<ExprNode>();
            n->op = Op::var;
            n->var = k - 1;
            return n;
          }
        }
      }
      fail_at(start, "unknown variable '" + id + "'", ErrorKind::unknown_variable);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double eval_node(const ExprNode& n, const DVec& y) {
  switch (n.op) {
    case Op::constant: return n.dvalue;
    case Op::var: return y[n.var];
    case Op::neg: return -eval_node(*n.args[0], y);
    case Op::sqrt: {
      double a = eval_node(*n.args[0], y);
      return a < 0 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(a);
    }
    case Op::add: return eval_node(*n.args[0], y) + eval_node(*n.args[1], y);
    case Op::sub: return eval_node(*n.args[0], y) - eval_node(*n.args[1], y);
    case Op::mul: return eval_node(*n.args[0], y) * eval_node(*n.args[1], y);
    case Op::div: {
      double b = eval_node(*n.args[1], y);
      double a = eval_node(*n.args[0], y);
      if (b == 0) return a == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : std::copysign(std::numeric_limits<double>::infinity(), a);
      return a / b;
    }
    case Op::pow: {
      double a = eval_node(*n.args[0], y);
      bool integral = mpz_cmp_ui(n.value.get_den_mpz_t(), 1) == 0;
      if (a < 0 && !integral) return std::numeric_limits<double>::quiet_NaN();
      return std::pow(a, n.dvalue);
    }
    case Op::min: return std::min(eval_node(*n.args[0], y), eval_node(*n.args[1], y));
    case Op::max: return std::max(eval_node(*n.args[0], y), eval_node(*n.args[1], y));
  }
  return 0;
}

std::optional<Q> exact_node(const ExprNode& n, const QVec& y) {
  auto arg = [&](int i) { return exact_node(*n.args[i], y); };
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::var: return y[n.var];
    case Op::neg: {
      auto a = arg(0);
      if (!a) return std::nullopt;
      return Q(-*a);
    }
    case Op::sqrt: {
      auto a = arg(0);
      if (!a || *a < 0) return std::nullopt;
      mpz_class p = a->get_num(), q = a->get_den();
      if (!mpz_perfect_square_p(p.get_mpz_t()) || !mpz_perfect_square_p(q.get_mpz_t()))
        return std::nullopt;
      mpz_class rp, rq;
      mpz_sqrt(rp.get_mpz_t(), p.get_mpz_t());
      mpz_sqrt(rq.get_mpz_t(), q.get_mpz_t());
      Q r(rp, rq);
      r.canonicalize();
      return r;
    }
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::min:
    case Op::max: {
      auto a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      switch (n.op) {
        case Op::add: return Q(*a + *b);
        case Op::sub: return Q(*a - *b);
        case Op::mul: return Q(*a * *b);
        case Op::div:
          if (*b == 0) return std::nullopt;
          return Q(*a / *b);
        case Op::min: return std::min(*a, *b);
        default: return std::max(*a, *b);
      }
    }
    case Op::pow: {
      auto a = arg(0);
      if (!a) return std::nullopt;
      if (mpz_cmp_ui(n.value.get_den_mpz_t(), 1) != 0) {
        if (*a == 1) return Q(1);
        if (*a == 0 && n.value > 0) return Q(0);
        return std::nullopt;
      }
      mpz_class e = n.value.get_num();
      if (!e.fits_slong_p() || abs(e) > 4096) return std::nullopt;
      long k = e.get_si();
      if (k < 0 && *a == 0) return std::nullopt;
      Q base = k < 0 ? Q(1 / *a) : *a;
      Q r(1);
      for (long i = 0; i < std::labs(k); ++i) r *= base;
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace

double Expr::eval(const DVec& y) const {
  if (static_cast<int>(y.size()) != dim_)
    throw Error(ErrorKind::dimension_mismatch, "expression point has wrong dimension");
  double v = eval_node(*root_, y);
  return std::isnan(v) ? kNegInf : v;
}

std::optional<Q> Expr::eval_exact(const QVec& y) const {
  if (static_cast<int>(y.size()) != dim_)
    throw Error(ErrorKind::dimension_mismatch, "expression point has wrong dimension");
  return exact_node(*root_, y);
}

Expr parse_roof_expression(const std::string& src, int dim) {
  if (dim < 1) throw Error(ErrorKind::invalid_input, "expression dimension must be positive");
  Parser p(src, dim);
  return Expr(p.parse(), dim, src);
}

}  // namespace toric
