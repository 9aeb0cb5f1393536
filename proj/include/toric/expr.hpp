#pragma once

#include <memory>
#include <optional>

#include "toric/rational.hpp"

namespace toric {

// Parse failure with a 1-based character offset into the source.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, size_t offset, const std::string& what)
      : Error(kind, what + " at offset " + std::to_string(offset)), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

struct ExprNode {
  enum class Op { constant, var, neg, sqrt, add, sub, mul, div, pow, min, max };
  Op op = Op::constant;
  Q value;      // constant value, or the exponent for pow
  double dvalue = 0;
  int var = 0;  // 0-based coordinate index
  std::vector<std::shared_ptr<const ExprNode>> args;
};

// Expression in the coordinates y1..yd of M_R.
class Expr {
 public:
  Expr() = default;
  Expr(std::shared_ptr<const ExprNode> root, int dim, std::string source)
      : root_(std::move(root)), dim_(dim), source_(std::move(source)) {}

  int dim() const { return dim_; }
  const std::string& source() const { return source_; }
  const ExprNode& root() const { return *root_; }
  bool empty() const { return !root_; }

  // NaN and poles collapse to -inf.
  double eval(const DVec& y) const;
  // Exact value when every operation stays in Q (no irrational sqrt/pow, no poles).
  std::optional<Q> eval_exact(const QVec& y) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  int dim_ = 0;
  std::string source_;
};

Expr parse_roof_expression(const std::string& src, int dim);

}  // namespace toric
